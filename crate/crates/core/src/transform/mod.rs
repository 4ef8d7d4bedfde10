//! Analysis and synthesis between harmonic and localized coefficients.
//!
//! Per order `k` the change of basis is `d_k = V_kᵀ c_k`. The fast route writes
//! the same product as `d_k = K_k F_k B_k c_k`: `B_k` converts the
//! ultraspherical expansion to Chebyshev form, `F_k` evaluates it at the
//! eigenvalues and `K_k` rescales by `κ_{k,i}`.

pub mod cache;
mod dense;
mod fpt;
mod ndct;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jacobi_blocks::{EigenBlock, EigenSystem};
use crate::sphere_basis::{BandParams, HarmonicCoeffs, LocalizedCoeffs};
use crate::ultraspherical::recurrence_coefficient;

pub use dense::{OpCounter, OpTally};
pub use fpt::ChebyshevCascade;
pub use ndct::{Ndct, NdctMode, WindowNdct};

/// Measured absolute error above which a block stays on the dense path.
pub const FAST_ERROR_BUDGET: f64 = 1e-10;

/// A priori error scale above which the fast path is not even built.
const FAST_SCREEN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Dense,
    Fast,
}

/// Fast-path data for one untruncated block.
pub struct FastBlock {
    cascade: ChebyshevCascade,
    ndct: Ndct,
    kappa: Vec<f64>,
}

impl FastBlock {
    /// Builds the fast path for an untruncated block, or `None` when the
    /// Chebyshev detour would lose more than [`FAST_ERROR_BUDGET`].
    pub fn new(block: &EigenBlock, ndct: NdctMode) -> Option<Self> {
        if block.truncation_offset() != 0 {
            return None;
        }
        let alpha = block.alpha();
        let n = block.size();
        let b0 = recurrence_coefficient(alpha, 0);
        let kappa: Vec<f64> = (0..n).map(|i| block.entry(0, i) * b0).collect();
        if !(fast_error_estimate(alpha, n, &kappa) <= FAST_SCREEN) {
            return None;
        }
        let fast = FastBlock {
            cascade: ChebyshevCascade::new(alpha, n),
            ndct: Ndct::new(ndct, block.eigenvalues(), n),
            kappa,
        };
        // The cascade also amplifies rounding through its transfer matrices,
        // which the estimate above does not see; measure it on two probes.
        for seed in 1..=2u64 {
            let probe = probe_vector(n, seed);
            let mut dense = vec![Complex64::new(0.0, 0.0); n];
            dense::apply_transpose(block, &probe, &mut dense);
            let err = fast
                .apply(&probe)
                .iter()
                .zip(&dense)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if !(err <= FAST_ERROR_BUDGET) {
                return None;
            }
        }
        Some(fast)
    }

    pub fn apply(&self, c: &[Complex64]) -> Vec<Complex64> {
        let a = self.cascade.apply(c);
        let g = self.ndct.eval(&a);
        g.iter().zip(&self.kappa).map(|(z, &k)| z * k).collect()
    }
}

/// `eps · p_{N-1}(1) · max κ`. The Chebyshev coefficients of `p_l` are
/// nonnegative and sum to `p_l(1)`, so this is the scale of rounding carried
/// into every output. Used only to skip hopeless blocks before probing.
fn fast_error_estimate(alpha: usize, n: usize, kappa: &[f64]) -> f64 {
    let mut prev = 0.0;
    let mut cur = 1.0 / recurrence_coefficient(alpha, 0);
    for l in 0..n.saturating_sub(1) {
        let next = (cur - recurrence_coefficient(alpha, l) * prev) / recurrence_coefficient(alpha, l + 1);
        prev = cur;
        cur = next;
    }
    let kmax = kappa.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    f64::EPSILON * cur * kmax
}

/// Reusable transform data for one band `(n, m)`.
pub struct TransformPlan {
    system: EigenSystem,
    mode: Mode,
    ndct: NdctMode,
    fast: Vec<Option<FastBlock>>,
}

impl TransformPlan {
    /// Wraps an eigen system, checking every block's orthogonality with a
    /// random probe.
    pub fn new(system: EigenSystem, mode: Mode, ndct: NdctMode) -> Result<Self> {
        for block in system.blocks() {
            let r = probe_orthogonality(block);
            if r > 1e-12 * (block.size() as f64).sqrt().max(1.0) {
                return Err(Error::NumericContract(format!(
                    "block {} fails orthogonality probe: {r:e}",
                    block.alpha()
                )));
            }
        }
        let fast = match mode {
            Mode::Dense => Vec::new(),
            Mode::Fast => system
                .blocks()
                .par_iter()
                .map(|b| FastBlock::new(b, ndct))
                .collect(),
        };
        Ok(TransformPlan {
            system,
            mode,
            ndct,
            fast,
        })
    }

    pub fn build(params: BandParams, mode: Mode, ndct: NdctMode) -> Result<Self> {
        Self::new(EigenSystem::build(params)?, mode, ndct)
    }

    pub fn dense(system: EigenSystem) -> Result<Self> {
        Self::new(system, Mode::Dense, NdctMode::Direct)
    }

    pub fn params(&self) -> BandParams {
        self.system.params()
    }

    pub fn system(&self) -> &EigenSystem {
        &self.system
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn ndct_mode(&self) -> NdctMode {
        self.ndct
    }

    /// Orders `|k|` served by the fast path.
    pub fn fast_orders(&self) -> Vec<usize> {
        self.fast
            .iter()
            .enumerate()
            .filter_map(|(a, f)| f.as_ref().map(|_| a))
            .collect()
    }

    pub fn analyze(&self, c: &HarmonicCoeffs) -> Result<LocalizedCoeffs> {
        match self.mode {
            Mode::Dense => self.analyze_dense(c),
            Mode::Fast => self.analyze_fast(c),
        }
    }

    /// `d_k = V_kᵀ c_k` for every block.
    pub fn analyze_dense(&self, c: &HarmonicCoeffs) -> Result<LocalizedCoeffs> {
        self.check(c.params())?;
        self.per_block(|k, block| {
            let mut d = vec![Complex64::new(0.0, 0.0); block.size()];
            dense::apply_transpose(block, c.block(k), &mut d);
            d
        })
        .and_then(|data| LocalizedCoeffs::from_vec(self.params(), data))
    }

    /// `d_k = K_k F_k B_k c_k` on blocks admitted to the fast path, dense on
    /// the rest.
    pub fn analyze_fast(&self, c: &HarmonicCoeffs) -> Result<LocalizedCoeffs> {
        if self.mode != Mode::Fast {
            return Err(Error::InvalidParameter("plan was built in dense mode".into()));
        }
        self.check(c.params())?;
        self.per_block(|k, block| match &self.fast[k.unsigned_abs() as usize] {
            Some(fast) => fast.apply(c.block(k)),
            None => {
                let mut d = vec![Complex64::new(0.0, 0.0); block.size()];
                dense::apply_transpose(block, c.block(k), &mut d);
                d
            }
        })
        .and_then(|data| LocalizedCoeffs::from_vec(self.params(), data))
    }

    /// `c_k = V_k d_k` for every block.
    pub fn synthesize(&self, d: &LocalizedCoeffs) -> Result<HarmonicCoeffs> {
        self.check(d.params())?;
        self.per_block(|k, block| {
            let mut c = vec![Complex64::new(0.0, 0.0); block.size()];
            dense::apply(block, d.block(k), &mut c);
            c
        })
        .and_then(|data| HarmonicCoeffs::from_vec(self.params(), data))
    }

    /// Dense analysis with every scalar operation reported to `tally`.
    pub fn analyze_counted<T: OpTally>(
        &self,
        c: &HarmonicCoeffs,
        tally: &mut T,
    ) -> Result<LocalizedCoeffs> {
        self.check(c.params())?;
        let params = self.params();
        let mut out = LocalizedCoeffs::zeros(params);
        for k in params.orders() {
            let block = self.system.block(k)?;
            dense::apply_transpose_counted(block, c.block(k), out.block_mut(k), tally);
        }
        Ok(out)
    }

    fn check(&self, params: BandParams) -> Result<()> {
        self.params().ensure_same(&params)
    }

    fn per_block<F>(&self, f: F) -> Result<Vec<Complex64>>
    where
        F: Fn(i64, &EigenBlock) -> Vec<Complex64> + Sync,
    {
        let orders: Vec<i64> = self.params().orders().collect();
        let parts = orders
            .par_iter()
            .map(|&k| self.system.block(k).map(|b| f(k, b)))
            .collect::<Result<Vec<_>>>()?;
        Ok(parts.concat())
    }
}

/// Deterministic unit-norm complex vector.
fn probe_vector(n: usize, seed: u64) -> Vec<Complex64> {
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut v: Vec<Complex64> = (0..n).map(|_| Complex64::new(next(), next())).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// `‖VᵀV r - r‖_∞` for a fixed pseudo-random unit-scale `r`.
fn probe_orthogonality(block: &EigenBlock) -> f64 {
    let n = block.size();
    let r: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(((i as f64 + 1.0) * 0.618_033_988_749_895).fract() - 0.5, 0.0))
        .collect();
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    let mut back = vec![Complex64::new(0.0, 0.0); n];
    dense::apply_transpose(block, &r, &mut d);
    dense::apply(block, &d, &mut back);
    back.iter()
        .zip(&r)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// `Σ_k (2 N_k - 1) N_k`, the scalar operations of the dense analysis.
pub fn dense_op_count(params: BandParams) -> u64 {
    params
        .orders()
        .map(|k| {
            let n = params.block_len(k) as u64;
            (2 * n - 1) * n
        })
        .sum()
}

/// Closed form `(n - m + 1)(4n² + n(4m + 5) + 3 + m - 8m²) / 3`.
pub fn dense_op_count_formula(params: BandParams) -> u64 {
    let n = params.n() as i128;
    let m = params.m() as i128;
    let total = (n - m + 1) * (4 * n * n + n * (4 * m + 5) + 3 + m - 8 * m * m);
    (total / 3) as u64
}
