use num_complex::Complex64;

use crate::jacobi_blocks::EigenBlock;

/// Tally of scalar arithmetic performed by an instrumented transform.
pub trait OpTally {
    fn mul(&mut self, count: u64);
    fn add(&mut self, count: u64);
}

/// Counts multiplications and additions separately.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub multiplications: u64,
    pub additions: u64,
}

impl OpCounter {
    pub fn total(&self) -> u64 {
        self.multiplications + self.additions
    }
}

impl OpTally for OpCounter {
    fn mul(&mut self, count: u64) {
        self.multiplications += count;
    }

    fn add(&mut self, count: u64) {
        self.additions += count;
    }
}

/// `d = Vᵀ c`.
pub(crate) fn apply_transpose(block: &EigenBlock, c: &[Complex64], d: &mut [Complex64]) {
    let n = block.size();
    let v = block.vectors();
    d.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
    for (l, &cl) in c.iter().enumerate() {
        let row = &v[l * n..(l + 1) * n];
        for (di, &vli) in d.iter_mut().zip(row) {
            *di += cl * vli;
        }
    }
}

/// `c = V d`.
pub(crate) fn apply(block: &EigenBlock, d: &[Complex64], c: &mut [Complex64]) {
    let n = block.size();
    let v = block.vectors();
    for (l, cl) in c.iter_mut().enumerate() {
        let row = &v[l * n..(l + 1) * n];
        *cl = row.iter().zip(d).map(|(&vli, &di)| di * vli).sum();
    }
}

/// `d = Vᵀ c` with every scalar multiplication and addition reported:
/// each output is `N` products folded by `N - 1` additions.
pub(crate) fn apply_transpose_counted<T: OpTally>(
    block: &EigenBlock,
    c: &[Complex64],
    d: &mut [Complex64],
    tally: &mut T,
) {
    let n = block.size();
    for (i, di) in d.iter_mut().enumerate() {
        let mut acc = c[0] * block.entry(0, i);
        tally.mul(1);
        for (l, &cl) in c.iter().enumerate().skip(1) {
            acc += cl * block.entry(l, i);
            tally.mul(1);
            tally.add(1);
        }
        *di = acc;
    }
    debug_assert_eq!(d.len(), n);
}
