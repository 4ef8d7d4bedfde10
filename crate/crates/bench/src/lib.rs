//! Inputs shared by the criterion benches.

use num_complex::Complex64;
use spherelok::jacobi_blocks::tridiagonal_eigenvalues;
use spherelok::{BandParams, HarmonicCoeffs, JacobiBlock};

/// Deterministic, dense, unit-norm coefficients.
pub fn coefficients(params: BandParams) -> HarmonicCoeffs {
    let data = (0..params.dimension())
        .map(|i| {
            let t = i as f64 * 0.618_033_988_749_895;
            Complex64::new(t.fract() - 0.5, (t * 1.7).fract() - 0.5)
        })
        .collect();
    let mut c = HarmonicCoeffs::from_vec(params, data).expect("length matches");
    let norm = c.norm();
    c.scale(Complex64::new(1.0 / norm, 0.0));
    c
}

/// Eigenvalues of the untruncated block `alpha` with `len` rows.
pub fn block_nodes(alpha: usize, len: usize) -> Vec<f64> {
    let block = JacobiBlock::new(alpha, 0, len).expect("positive size");
    tridiagonal_eigenvalues(block.offdiag()).expect("converges")
}

pub fn block_input(len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|i| Complex64::new(((i * 37) % 101) as f64 / 101.0 - 0.5, ((i * 53) % 97) as f64 / 97.0 - 0.5))
        .collect()
}
