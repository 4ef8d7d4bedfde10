use rayon::prelude::*;

use crate::error::Result;
use crate::jacobi_blocks::{tridiagonal_eigenvalues, EigenSystem, JacobiBlock};
use crate::sphere_basis::BandParams;

/// One eigenvalue `x_{|k|,i}` tagged with its order and 0-based index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    pub k: i64,
    pub index: usize,
    pub x: f64,
}

/// All eigenvalues of a band, one entry per basis function.
#[derive(Debug, Clone)]
pub struct SpectralSummary {
    params: BandParams,
    pairs: Vec<SpectralPair>,
}

impl SpectralSummary {
    /// Eigenvalues only; no eigenvectors are formed.
    pub fn compute(params: BandParams) -> Result<Self> {
        let per_alpha = (0..=params.n())
            .into_par_iter()
            .map(|alpha| {
                let block = JacobiBlock::build(params, alpha as i64)?;
                tridiagonal_eigenvalues(block.offdiag())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_values(params, |k| &per_alpha[k.unsigned_abs() as usize]))
    }

    pub fn from_system(system: &EigenSystem) -> Self {
        Self::from_values(system.params(), |k| {
            system.block(k).expect("order inside band").eigenvalues()
        })
    }

    fn from_values<'a, F: Fn(i64) -> &'a [f64]>(params: BandParams, values: F) -> Self {
        let mut pairs = Vec::with_capacity(params.dimension());
        for k in params.orders() {
            pairs.extend(
                values(k)
                    .iter()
                    .enumerate()
                    .map(|(index, &x)| SpectralPair { k, index, x }),
            );
        }
        SpectralSummary { params, pairs }
    }

    pub fn params(&self) -> BandParams {
        self.params
    }

    pub fn pairs(&self) -> &[SpectralPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `#{x ∈ [a, b]} / N`.
    pub fn count_fraction(&self, a: f64, b: f64) -> f64 {
        let hits = self.pairs.iter().filter(|p| p.x >= a && p.x <= b).count();
        hits as f64 / self.pairs.len() as f64
    }

    /// `Σ x^j` over all pairs.
    pub fn moment(&self, j: u32) -> f64 {
        self.pairs.iter().map(|p| p.x.powi(j as i32)).sum()
    }

    /// Counts in `bins` equal cells over `[-1, 1]`; the last cell is closed.
    pub fn histogram(&self, bins: usize) -> Vec<usize> {
        let mut counts = vec![0; bins];
        if bins == 0 {
            return counts;
        }
        for p in &self.pairs {
            let cell = ((p.x + 1.0) / 2.0 * bins as f64).floor();
            let cell = (cell.max(0.0) as usize).min(bins - 1);
            counts[cell] += 1;
        }
        counts
    }
}

/// Closed-form weak-limit estimate `4((n+1)(j+2m-2) - (j²+1)/2 - m² + m) / N`.
/// Negative for `j = 2, m = 0`.
pub fn weak_limit_bound_literal(params: BandParams, j: u32) -> f64 {
    let (n, m, j) = (params.n() as f64, params.m() as f64, j as f64);
    4.0 * ((n + 1.0) * (j + 2.0 * m - 2.0) - (j * j + 1.0) / 2.0 - m * m + m) / params.dimension() as f64
}

/// `|Σ x^j / N - ½∫x^j|` bounded by twice the summed ranks of the
/// correction operators, which all have norm at most 2:
/// `rank A_j <= (2n+1-j)(j-1)` and `rank B_j, C_j <= max(0, (2m-1)(n+1) - m² + m)`.
pub fn weak_limit_bound_rank(params: BandParams, j: u32) -> f64 {
    let (n, m, j) = (params.n() as i64, params.m() as i64, j as i64);
    let rank_a = ((2 * n + 1 - j) * (j - 1)).max(0);
    let rank_bc = ((2 * m - 1) * (n + 1) - m * m + m).max(0);
    2.0 * (rank_a + 2 * rank_bc) as f64 / params.dimension() as f64
}
