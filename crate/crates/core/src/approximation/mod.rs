//! Eigenvalue-window filtering and the concentration bounds that go with it.

mod spectrum;
mod window;

pub use spectrum::{weak_limit_bound_literal, weak_limit_bound_rank, SpectralPair, SpectralSummary};
pub use window::{EigenvalueWindow, Interval, WindowKind, WindowSpec};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sphere_basis::{epsilon, HarmonicCoeffs, LocalizedCoeffs};
use crate::transform::TransformPlan;

/// Largest `|‖c‖² - 1|` accepted where a unit-norm input is required.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Lower,
    Upper,
}

/// Bound next to the energy it is supposed to control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub bound: f64,
    pub actual: f64,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.actual <= self.bound + 1e-12
    }
}

/// Localized coefficients together with the eigenvalue of every entry.
#[derive(Debug, Clone)]
pub struct Density {
    pub d: LocalizedCoeffs,
    pub x: Vec<f64>,
}

impl Density {
    pub fn compute(plan: &TransformPlan, c: &HarmonicCoeffs) -> Result<Self> {
        let d = plan.analyze(c)?;
        let system = plan.system();
        let mut x = Vec::with_capacity(d.len());
        for k in plan.params().orders() {
            x.extend_from_slice(system.block(k)?.eigenvalues());
        }
        Ok(Density { d, x })
    }

    /// `(x, |d|²)` over all pairs.
    pub fn weights(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.x.iter().zip(self.d.as_slice()).map(|(&x, d)| (x, d.norm_sqr()))
    }

    pub fn mass(&self) -> f64 {
        self.weights().map(|(_, w)| w).sum()
    }

    /// `Σ |d|² x`.
    pub fn mean(&self) -> f64 {
        self.weights().map(|(x, w)| w * x).sum()
    }

    /// `Σ |d|² (x - ε)²`.
    pub fn variance(&self) -> f64 {
        let eps = self.mean();
        self.weights().map(|(x, w)| w * (x - eps) * (x - eps)).sum()
    }

    /// `Σ |d|² (x² - ε²)`.
    pub fn variance_expanded(&self) -> f64 {
        let eps = self.mean();
        self.weights().map(|(x, w)| w * (x * x - eps * eps)).sum()
    }

    /// Energy of the entries whose eigenvalue lies outside `window`.
    pub fn energy_outside(&self, window: &EigenvalueWindow) -> f64 {
        self.weights()
            .filter(|(x, _)| !window.contains(*x))
            .map(|(_, w)| w)
            .sum()
    }

    fn split(&self, window: &EigenvalueWindow) -> (LocalizedCoeffs, LocalizedCoeffs) {
        let zero = Complex64::new(0.0, 0.0);
        let mut kept = self.d.clone();
        let mut removed = self.d.clone();
        for ((kv, rv), &x) in kept
            .as_mut_slice()
            .iter_mut()
            .zip(removed.as_mut_slice())
            .zip(&self.x)
        {
            if window.contains(x) {
                *rv = zero;
            } else {
                *kv = zero;
            }
        }
        (kept, removed)
    }
}

/// Splits `c` into its projections onto the localized functions with
/// eigenvalue inside `window` and outside it.
pub fn filter(
    plan: &TransformPlan,
    c: &HarmonicCoeffs,
    window: &EigenvalueWindow,
) -> Result<(HarmonicCoeffs, HarmonicCoeffs)> {
    let density = Density::compute(plan, c)?;
    let (kept, removed) = density.split(window);
    Ok((plan.synthesize(&kept)?, plan.synthesize(&removed)?))
}

/// Tail bound: `(1 + ε)/a` for the lower tail, `(1 - ε)/a` for the upper one,
/// against the energy left outside the tail window.
pub fn markov_bound(plan: &TransformPlan, c: &HarmonicCoeffs, a: f64, tail: Tail) -> Result<BoundCheck> {
    check_unit(c)?;
    let density = Density::compute(plan, c)?;
    let eps = density.mean();
    let (window, bound) = match tail {
        Tail::Lower => (EigenvalueWindow::lower_tail(a)?, (1.0 + eps) / a),
        Tail::Upper => (EigenvalueWindow::upper_tail(a)?, (1.0 - eps) / a),
    };
    Ok(BoundCheck {
        bound,
        actual: density.energy_outside(&window),
    })
}

/// `var_ρ / a²` against the energy outside `(ε - a, ε + a)`.
pub fn chebyshev_bound(plan: &TransformPlan, c: &HarmonicCoeffs, a: f64) -> Result<BoundCheck> {
    check_unit(c)?;
    let density = Density::compute(plan, c)?;
    let window = EigenvalueWindow::centered(density.mean().clamp(-1.0, 1.0), a)?;
    Ok(BoundCheck {
        bound: density.variance() / (a * a),
        actual: density.energy_outside(&window),
    })
}

/// Discrete variance of the eigenvalue distribution weighted by `|d|²`.
pub fn var_rho(plan: &TransformPlan, c: &HarmonicCoeffs) -> Result<f64> {
    Ok(Density::compute(plan, c)?.variance())
}

pub fn var_rho_expanded(plan: &TransformPlan, c: &HarmonicCoeffs) -> Result<f64> {
    Ok(Density::compute(plan, c)?.variance_expanded())
}

/// `(1 - ε²)/ε²`, or `+∞` when `|ε| < 1e-300`.
pub fn var_s(c: &HarmonicCoeffs) -> Result<f64> {
    check_unit(c)?;
    let eps = epsilon(c);
    if eps.abs() < 1e-300 {
        return Ok(f64::INFINITY);
    }
    Ok((1.0 - eps * eps) / (eps * eps))
}

fn check_unit(c: &HarmonicCoeffs) -> Result<()> {
    let norm = c.norm_sqr();
    if !((norm - 1.0).abs() <= UNIT_NORM_TOLERANCE) {
        return Err(Error::NotUnitNorm(norm));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_basis::{psi_coefficients, BandParams};
    use crate::transform::{Mode, NdctMode};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plan(n: usize, m: usize) -> TransformPlan {
        TransformPlan::build(BandParams::new(n, m).unwrap(), Mode::Dense, NdctMode::Direct).unwrap()
    }

    fn random_unit(params: BandParams, seed: u64) -> HarmonicCoeffs {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..params.dimension())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let mut c = HarmonicCoeffs::from_vec(params, data).unwrap();
        let norm = c.norm();
        c.scale(Complex64::new(1.0 / norm, 0.0));
        c
    }

    #[test]
    fn full_window_keeps_everything() {
        let p = plan(10, 2);
        let c = random_unit(p.params(), 1);
        let (kept, removed) = filter(&p, &c, &EigenvalueWindow::full()).unwrap();
        assert!(kept.max_abs_diff(&c) < 1e-13);
        assert!(removed.norm() < 1e-15);
    }

    #[test]
    fn filter_partitions_energy() {
        let p = plan(16, 0);
        let c = random_unit(p.params(), 2);
        let w = match WindowSpec::parse("[-1,-0.6]u[-0.2,0.2]u[0.6,1]").unwrap() {
            WindowSpec::Explicit(w) => w,
            _ => unreachable!(),
        };
        let (kept, removed) = filter(&p, &c, &w).unwrap();
        let mut sum = kept.clone();
        sum.axpy(Complex64::new(1.0, 0.0), &removed).unwrap();
        assert!(sum.max_abs_diff(&c) < 1e-13);
        assert!((kept.norm_sqr() + removed.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenfunction_survives_its_window() {
        let p = plan(12, 0);
        let psi = psi_coefficients(p.system(), 0, 0).unwrap();
        let x = p.system().eigenvalue(0, 0).unwrap();
        let w = EigenvalueWindow::centered(x, 1e-3).unwrap();
        let (kept, removed) = filter(&p, &psi, &w).unwrap();
        assert!(kept.max_abs_diff(&psi) < 1e-13);
        assert!(removed.norm() < 1e-13);

        let up = markov_bound(&p, &psi, 1.0 - x + 1e-6, Tail::Upper).unwrap();
        assert!(up.actual < 1e-26 && up.holds());
        let cheb = chebyshev_bound(&p, &psi, 0.1).unwrap();
        assert!(cheb.bound < 1e-24 && cheb.actual < 1e-26);
    }

    #[test]
    fn south_pole_function_has_small_lower_bound() {
        let p = plan(32, 0);
        let n0 = p.params().block_len(0);
        let psi = psi_coefficients(p.system(), 0, n0 - 1).unwrap();
        let check = markov_bound(&p, &psi, 0.01, Tail::Lower).unwrap();
        // ε = x_{0,N} ≈ -0.99742
        assert!(check.bound < 0.3, "{check:?}");
        assert!(check.actual < 1e-26);
    }

    #[test]
    fn two_point_variance() {
        let p = plan(12, 3);
        let (k, i, j) = (2i64, 1usize, 4usize);
        let mut c = psi_coefficients(p.system(), k, i).unwrap();
        c.axpy(Complex64::new(1.0, 0.0), &psi_coefficients(p.system(), k, j).unwrap())
            .unwrap();
        c.scale(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let x1 = p.system().eigenvalue(k, i).unwrap();
        let x2 = p.system().eigenvalue(k, j).unwrap();
        let v = var_rho(&p, &c).unwrap();
        assert!((v - (x1 - x2).powi(2) / 4.0).abs() < 1e-13);
    }

    #[test]
    fn variance_forms_agree() {
        let p = plan(20, 5);
        for seed in 0..5 {
            let c = random_unit(p.params(), seed);
            let a = var_rho(&p, &c).unwrap();
            let b = var_rho_expanded(&p, &c).unwrap();
            assert!((a - b).abs() < 1e-13, "{a} {b}");
            let eps = Density::compute(&p, &c).unwrap().mean();
            assert!((eps - epsilon(&c)).abs() < 1e-13);
        }
    }

    #[test]
    fn chebyshev_with_two_sigma() {
        let p = plan(16, 0);
        for seed in 0..20 {
            let c = random_unit(p.params(), 100 + seed);
            let a = 2.0 * var_rho(&p, &c).unwrap().sqrt();
            let check = chebyshev_bound(&p, &c, a).unwrap();
            assert!(check.holds() && check.actual <= 0.25 + 1e-12);
        }
    }

    #[test]
    fn var_s_values() {
        let p = plan(32, 0);
        let y = HarmonicCoeffs::unit(p.params(), 5, 2).unwrap();
        assert_eq!(var_s(&y).unwrap(), f64::INFINITY);
        let psi = psi_coefficients(p.system(), 0, 0).unwrap();
        let x = p.system().eigenvalue(0, 0).unwrap();
        let v = var_s(&psi).unwrap();
        assert!((v - (1.0 - x * x) / (x * x)).abs() < 1e-12);
        let rounded = 0.99742f64;
        assert!((v - (1.0 - rounded * rounded) / (rounded * rounded)).abs() < 1e-5, "{v}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = plan(6, 0);
        let mut c = random_unit(p.params(), 3);
        assert!(matches!(markov_bound(&p, &c, 0.0, Tail::Lower), Err(Error::WindowSpec(_))));
        c.scale(Complex64::new(2.0, 0.0));
        assert!(matches!(markov_bound(&p, &c, 0.5, Tail::Upper), Err(Error::NotUnitNorm(_))));
        assert!(matches!(chebyshev_bound(&p, &c, 0.5), Err(Error::NotUnitNorm(_))));
        let other = HarmonicCoeffs::zeros(BandParams::new(7, 0).unwrap());
        assert!(filter(&p, &other, &EigenvalueWindow::full()).is_err());
    }
}
