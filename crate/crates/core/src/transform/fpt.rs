//! Fast ultraspherical-to-Chebyshev conversion.
//!
//! For a coefficient range `[lo, hi)` the partial sum `Σ c_l p_l` is written as
//! `A p_lo + B p_{lo-1}` with Chebyshev series `A`, `B`. Leaves get `(A, B)` by
//! running the recurrence backwards; siblings merge through the transfer matrix
//! `Π(lo → mid) = M_{mid-1} ⋯ M_lo`, whose samples on Chebyshev–Lobatto points
//! are precomputed per node. Each merge is a pair of DCT-I round trips, so a
//! level costs `O(N log N)` and the whole cascade `O(N log² N)`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::ultraspherical::recurrence_coefficient;

const LEAF: usize = 32;

/// DCT-I on `K + 1` points through a complex FFT of length `2K`.
#[derive(Clone)]
pub(crate) struct Dct1 {
    k: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl Dct1 {
    pub(crate) fn new(planner: &mut FftPlanner<f64>, k: usize) -> Self {
        Dct1 {
            k,
            fft: planner.plan_fft_forward(2 * k),
        }
    }

    fn transform(&self, v: &[Complex64]) -> Vec<Complex64> {
        let k = self.k;
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * k];
        buf[..=k].copy_from_slice(&v[..=k]);
        for i in 1..k {
            buf[2 * k - i] = v[i];
        }
        self.fft.process(&mut buf);
        buf.truncate(k + 1);
        buf
    }

    /// Values `Σ_i a_i T_i(cos(π j / K))` for `j = 0..=K`; `a` may be shorter
    /// than `K + 1`.
    pub(crate) fn values(&self, a: &[Complex64]) -> Vec<Complex64> {
        let k = self.k;
        let mut v = vec![Complex64::new(0.0, 0.0); k + 1];
        v[..a.len()].copy_from_slice(a);
        let y = self.transform(&v);
        let (a0, ak) = (v[0], v[k]);
        y.iter()
            .enumerate()
            .map(|(j, &yj)| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                (yj + a0 + ak * sign) * 0.5
            })
            .collect()
    }

    /// Inverse of [`Dct1::values`].
    pub(crate) fn coefficients(&self, v: &[Complex64]) -> Vec<Complex64> {
        let k = self.k;
        let y = self.transform(v);
        let scale = 1.0 / k as f64;
        y.iter()
            .enumerate()
            .map(|(i, &yi)| {
                let w = if i == 0 || i == k { 0.5 } else { 1.0 };
                yi * (w * scale)
            })
            .collect()
    }
}

/// 2×2 matrix of Chebyshev series, row-major.
type PolyMatrix = [Vec<Complex64>; 4];

struct Level {
    dct: Dct1,
    /// Per node, samples of `Π(lo → mid)` at the `K + 1` Lobatto points.
    transfer: Vec<[Vec<Complex64>; 4]>,
}

/// Precomputed cascade for `Σ_{l<len} c_l p_l^{(alpha)}`.
pub struct ChebyshevCascade {
    alpha: usize,
    len: usize,
    leaf: usize,
    b: Vec<f64>,
    levels: Vec<Level>,
}

impl ChebyshevCascade {
    pub fn new(alpha: usize, len: usize) -> Self {
        let padded = len.max(1).next_power_of_two().max(LEAF);
        let leaf = LEAF.min(padded);
        let b: Vec<f64> = (0..=padded + 1)
            .map(|l| recurrence_coefficient(alpha, l))
            .collect();
        let mut planner = FftPlanner::new();

        let mut transfer: Vec<PolyMatrix> = (0..padded / leaf)
            .map(|j| leaf_transfer(&b, j * leaf, (j + 1) * leaf))
            .collect();
        let mut levels = Vec::new();
        let mut size = leaf;
        while size < padded {
            size *= 2;
            let dct = Dct1::new(&mut planner, size);
            let last = size == padded;
            let mut stored = Vec::with_capacity(transfer.len() / 2);
            let mut merged = Vec::with_capacity(transfer.len() / 2);
            for pair in transfer.chunks(2) {
                let left: [Vec<Complex64>; 4] = std::array::from_fn(|e| dct.values(&pair[0][e]));
                if !last {
                    let right: [Vec<Complex64>; 4] =
                        std::array::from_fn(|e| dct.values(&pair[1][e]));
                    let prod = mat_mul_samples(&right, &left);
                    merged.push(std::array::from_fn(|e| {
                        let mut c = dct.coefficients(&prod[e]);
                        c.truncate(size + 1);
                        c
                    }));
                }
                stored.push(left);
            }
            levels.push(Level {
                dct,
                transfer: stored,
            });
            transfer = merged;
        }
        ChebyshevCascade {
            alpha,
            len,
            leaf,
            b,
            levels,
        }
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Chebyshev coefficients `a` (length `len`) with
    /// `Σ_l c_l p_l(x) = Σ_i a_i T_i(x)`.
    pub fn apply(&self, c: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(c.len(), self.len, "coefficient length must match cascade");
        let padded = self.leaf << self.levels.len();
        let zero = Complex64::new(0.0, 0.0);
        let coeff = |l: usize| if l < c.len() { c[l] } else { zero };

        let mut rows: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..padded / self.leaf)
            .map(|j| self.leaf_row(j * self.leaf, (j + 1) * self.leaf, &coeff))
            .collect();

        let mut size = self.leaf;
        for level in &self.levels {
            size *= 2;
            let half = size / 2;
            rows = rows
                .chunks(2)
                .zip(&level.transfer)
                .map(|(pair, pi)| {
                    let (al, bl) = &pair[0];
                    let (ar, br) = &pair[1];
                    let av = level.dct.values(ar);
                    let bv = level.dct.values(br);
                    let na: Vec<Complex64> = (0..=size)
                        .map(|j| av[j] * pi[0][j] + bv[j] * pi[2][j])
                        .collect();
                    let nb: Vec<Complex64> = (0..=size)
                        .map(|j| av[j] * pi[1][j] + bv[j] * pi[3][j])
                        .collect();
                    let mut a = level.dct.coefficients(&na);
                    let mut b = level.dct.coefficients(&nb);
                    a.truncate(size);
                    b.truncate(size);
                    for i in 0..half {
                        a[i] += al[i];
                        b[i] += bl[i];
                    }
                    (a, b)
                })
                .collect();
        }
        let (a, _) = rows.pop().expect("cascade has a root");
        let inv_b0 = 1.0 / self.b[0];
        a.into_iter().take(self.len).map(|z| z * inv_b0).collect()
    }

    /// Row `(A, B)` of a leaf by backward recurrence.
    fn leaf_row<F: Fn(usize) -> Complex64>(
        &self,
        lo: usize,
        hi: usize,
        coeff: &F,
    ) -> (Vec<Complex64>, Vec<Complex64>) {
        let len = hi - lo;
        let zero = Complex64::new(0.0, 0.0);
        let mut a = vec![zero; len];
        let mut b = vec![zero; len];
        a[0] = coeff(hi - 1);
        let mut deg = 0;
        for l in (lo..hi - 1).rev() {
            let inv = 1.0 / self.b[l + 1];
            let xa = times_x(&a[..=deg]);
            let scale = -self.b[l] * inv;
            for i in 0..=deg + 1 {
                let old_a = if i <= deg { a[i] } else { zero };
                let old_b = if i <= deg { b[i] } else { zero };
                a[i] = xa[i] * inv + old_b;
                b[i] = old_a * scale;
            }
            deg += 1;
            a[0] += coeff(l);
        }
        (a, b)
    }
}

/// Chebyshev coefficients of `x · Σ a_i T_i` (one degree higher).
fn times_x(a: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + 1];
    for (i, &c) in a.iter().enumerate() {
        if i == 0 {
            out[1] += c;
        } else {
            out[i - 1] += c * 0.5;
            out[i + 1] += c * 0.5;
        }
    }
    out
}

/// `Π(lo → hi)` in Chebyshev coefficients by forward recurrence.
fn leaf_transfer(b: &[f64], lo: usize, hi: usize) -> PolyMatrix {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m: PolyMatrix = [vec![one], vec![zero], vec![zero], vec![one]];
    for l in lo..hi {
        let inv = 1.0 / b[l + 1];
        let scale = -b[l] * inv;
        let top: [Vec<Complex64>; 2] = std::array::from_fn(|col| {
            let xp = times_x(&m[col]);
            xp.iter()
                .enumerate()
                .map(|(i, &v)| v * inv + m[2 + col].get(i).copied().unwrap_or(zero) * scale)
                .collect()
        });
        let [t0, t1] = top;
        let old0 = std::mem::replace(&mut m[0], t0);
        let old1 = std::mem::replace(&mut m[1], t1);
        m[2] = old0;
        m[3] = old1;
    }
    m
}

fn mat_mul_samples(r: &[Vec<Complex64>; 4], l: &[Vec<Complex64>; 4]) -> [Vec<Complex64>; 4] {
    let n = r[0].len();
    std::array::from_fn(|e| {
        let (row, col) = (e / 2, e % 2);
        (0..n)
            .map(|j| r[2 * row][j] * l[col][j] + r[2 * row + 1][j] * l[2 + col][j])
            .collect()
    })
}
