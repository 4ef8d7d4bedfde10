use num_complex::Complex64;

use super::{BandParams, HarmonicCoeffs};
use crate::error::{Error, Result};
use crate::jacobi_blocks::EigenSystem;
use crate::ultraspherical::recurrence_coefficient;

/// `Y_l^alpha(θ, 0) = sin^alpha θ · p_{l-alpha}^{(alpha)}(cos θ)` for
/// `l = alpha ..= max_degree`, indexed from `l = alpha`.
///
/// The start value `sin^alpha θ / b_0` is accumulated as a product of factors
/// `sin θ · sqrt((j + 1/2) / j)`, one per unit of `alpha`, so that it never
/// overflows and only underflows where the harmonic itself does.
pub fn harmonic_column(alpha: usize, max_degree: usize, theta: f64) -> Vec<f64> {
    if max_degree < alpha {
        return Vec::new();
    }
    let (s, x) = theta.sin_cos();
    let s = s.abs();
    let mut start = 1.0;
    for j in 1..=alpha {
        let j = j as f64;
        start *= s * ((j + 0.5) / j).sqrt();
    }
    let len = max_degree - alpha + 1;
    let mut out = Vec::with_capacity(len);
    out.push(start);
    let mut prev = 0.0;
    let mut cur = start;
    let mut b_cur = recurrence_coefficient(alpha, 0);
    for j in 0..len - 1 {
        let b_next = recurrence_coefficient(alpha, j + 1);
        let next = (x * cur - b_cur * prev) / b_next;
        prev = cur;
        cur = next;
        b_cur = b_next;
        out.push(cur);
    }
    out
}

/// `Y_l^k(θ, φ)`.
pub fn eval_sph_harmonic(l: usize, k: i64, theta: f64, phi: f64) -> Result<Complex64> {
    let alpha = k.unsigned_abs() as usize;
    if alpha > l {
        return Err(Error::OrderOutOfRange { k, limit: l });
    }
    let radial = harmonic_column(alpha, l, theta)[l - alpha];
    Ok(radial * Complex64::from_polar(1.0, k as f64 * phi))
}

/// The mean value `ε(f) = <cos θ · f, f>`, evaluated as the block-tridiagonal
/// quadratic form `Σ_k c_kᴴ J_k c_k`.
pub fn epsilon(c: &HarmonicCoeffs) -> f64 {
    let params = c.params();
    let mut total = 0.0;
    for k in params.orders() {
        let block = c.block(k);
        let alpha = k.unsigned_abs() as usize;
        let offset = params.truncation_offset(k);
        for j in 0..block.len().saturating_sub(1) {
            let b = recurrence_coefficient(alpha, offset + j + 1);
            total += 2.0 * b * (block[j].conj() * block[j + 1]).re;
        }
    }
    total
}

/// Embeds `v` as row `k` of an otherwise zero coefficient vector.
pub fn transition_apply(params: BandParams, k: i64, v: &[f64]) -> Result<HarmonicCoeffs> {
    params.check_order(k)?;
    let len = params.block_len(k);
    if v.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            actual: v.len(),
        });
    }
    let mut c = HarmonicCoeffs::zeros(params);
    for (dst, &x) in c.block_mut(k).iter_mut().zip(v) {
        *dst = Complex64::new(x, 0.0);
    }
    Ok(c)
}

/// Harmonic coefficients of the localized basis function `ψ_{k,index}`
/// (zero-based index, decreasing eigenvalue).
pub fn psi_coefficients(system: &EigenSystem, k: i64, index: usize) -> Result<HarmonicCoeffs> {
    let block = system.block(k)?;
    if index >= block.size() {
        return Err(Error::IndexOutOfRange {
            index,
            limit: block.size(),
        });
    }
    transition_apply(system.params(), k, &block.vector(index))
}

/// `ψ_{k,index}(θ, φ)` through the sum `Σ_l V_k[l][index] · Y_l^k(θ, φ)`.
pub fn eval_psi(
    system: &EigenSystem,
    k: i64,
    index: usize,
    theta: f64,
    phi: f64,
) -> Result<Complex64> {
    let params = system.params();
    let block = system.block(k)?;
    if index >= block.size() {
        return Err(Error::IndexOutOfRange {
            index,
            limit: block.size(),
        });
    }
    let alpha = k.unsigned_abs() as usize;
    let column = harmonic_column(alpha, params.n(), theta);
    let first = params.first_degree(k);
    let radial: f64 = (0..block.size())
        .map(|l| block.entry(l, index) * column[first + l - alpha])
        .sum();
    Ok(radial * Complex64::from_polar(1.0, k as f64 * phi))
}
