use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use proptest::prelude::*;
use spherelok::approximation::{chebyshev_bound, filter, markov_bound, var_rho, var_rho_expanded, EigenvalueWindow, Tail};
use spherelok::sphere_basis::{epsilon, eval_psi};
use spherelok::transform::{Mode, NdctMode};
use spherelok::ultraspherical::UltrasphericalFamily;
use spherelok::{BandParams, EigenSystem, HarmonicCoeffs, LocalizedCoeffs, TransformPlan};

fn plan(n: usize, m: usize) -> &'static TransformPlan {
    static PLANS: OnceLock<Mutex<HashMap<(usize, usize), &'static TransformPlan>>> = OnceLock::new();
    let mut plans = PLANS.get_or_init(Default::default).lock().unwrap();
    plans.entry((n, m)).or_insert_with(|| {
        let p = BandParams::new(n, m).unwrap();
        Box::leak(Box::new(TransformPlan::build(p, Mode::Dense, NdctMode::Direct).unwrap()))
    })
}

const BANDS: [(usize, usize); 3] = [(8, 0), (16, 5), (32, 0)];

fn unit_coeffs(params: BandParams, raw: &[(f64, f64)]) -> Option<HarmonicCoeffs> {
    let data: Vec<Complex64> = raw
        .iter()
        .cycle()
        .take(params.dimension())
        .enumerate()
        .map(|(i, &(re, im))| Complex64::new(re, im) * (1.0 + (i % 7) as f64))
        .collect();
    let mut c = HarmonicCoeffs::from_vec(params, data).ok()?;
    let norm = c.norm();
    if norm < 1e-3 {
        return None;
    }
    c.scale(Complex64::new(1.0 / norm, 0.0));
    Some(c)
}

fn raw_vector() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..1200)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tail_bounds_hold(band in 0usize..3, raw in raw_vector(), a in 0.01f64..2.0) {
        let (n, m) = BANDS[band];
        let p = plan(n, m);
        if let Some(c) = unit_coeffs(p.params(), &raw) {
            for tail in [Tail::Lower, Tail::Upper] {
                let check = markov_bound(p, &c, a, tail).unwrap();
                prop_assert!(check.holds(), "{tail:?} {check:?}");
            }
        }
    }

    #[test]
    fn centered_bound_holds(band in 0usize..3, raw in raw_vector(), a in 0.01f64..1.0) {
        let (n, m) = BANDS[band];
        let p = plan(n, m);
        if let Some(c) = unit_coeffs(p.params(), &raw) {
            let check = chebyshev_bound(p, &c, a).unwrap();
            prop_assert!(check.holds(), "{check:?}");
            let centered = var_rho(p, &c).unwrap();
            let expanded = var_rho_expanded(p, &c).unwrap();
            prop_assert!((centered - expanded).abs() < 1e-13);
        }
    }

    #[test]
    fn round_trip_and_parseval(band in 0usize..3, raw in raw_vector()) {
        let (n, m) = BANDS[band];
        let p = plan(n, m);
        if let Some(c) = unit_coeffs(p.params(), &raw) {
            let d = p.analyze(&c).unwrap();
            prop_assert!((d.norm() - 1.0).abs() < 1e-12);
            let back = p.synthesize(&d).unwrap();
            prop_assert!(back.max_abs_diff(&c) < 1e-12);
            // ε is the eigenvalue-weighted mean of |d|²
            let mean: f64 = p.params().orders().map(|k| {
                let x = p.system().block(k).unwrap().eigenvalues();
                d.block(k).iter().zip(x).map(|(z, x)| z.norm_sqr() * x).sum::<f64>()
            }).sum();
            prop_assert!((mean - epsilon(&c)).abs() < 1e-13);
        }
    }

    #[test]
    fn filter_is_an_orthogonal_split(
        band in 0usize..3,
        raw in raw_vector(),
        lo in -1.0f64..1.0,
        width in 0.0f64..2.0,
    ) {
        let (n, m) = BANDS[band];
        let p = plan(n, m);
        let hi = (lo + width).min(1.0);
        let window = EigenvalueWindow::union(vec![spherelok::approximation::Interval::closed(lo, hi)]).unwrap();
        if let Some(c) = unit_coeffs(p.params(), &raw) {
            let (kept, removed) = filter(p, &c, &window).unwrap();
            let mut sum = kept.clone();
            sum.axpy(Complex64::new(1.0, 0.0), &removed).unwrap();
            prop_assert!(sum.max_abs_diff(&c) < 1e-13);
            prop_assert!((kept.norm_sqr() + removed.norm_sqr() - 1.0).abs() < 1e-12);
            let cross: Complex64 = kept.as_slice().iter().zip(removed.as_slice()).map(|(a, b)| a * b.conj()).sum();
            prop_assert!(cross.norm() < 1e-13);
        }
    }

    #[test]
    fn synthesis_is_linear(band in 0usize..3, raw in raw_vector(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let (n, m) = BANDS[band];
        let p = plan(n, m);
        let params = p.params();
        let len = params.dimension();
        let d1: Vec<Complex64> = raw.iter().cycle().take(len).map(|&(a, b)| Complex64::new(a, b)).collect();
        let d2: Vec<Complex64> = raw.iter().rev().cycle().take(len).map(|&(a, b)| Complex64::new(b, -a)).collect();
        let combo: Vec<Complex64> = d1.iter().zip(&d2).map(|(x, y)| x * s + y * t).collect();
        let d1 = LocalizedCoeffs::from_vec(params, d1).unwrap();
        let d2 = LocalizedCoeffs::from_vec(params, d2).unwrap();
        let lhs = p.synthesize(&LocalizedCoeffs::from_vec(params, combo).unwrap()).unwrap();
        let mut rhs = p.synthesize(&d1).unwrap();
        rhs.scale(Complex64::new(s, 0.0));
        rhs.axpy(Complex64::new(t, 0.0), &p.synthesize(&d2).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13 * (1.0 + lhs.norm()));
    }
}

/// Closed quotient form of `ψ_{k,i}`, built only from recurrence values at
/// the eigenvalue and at `cos θ`.
fn psi_quotient(system: &EigenSystem, k: i64, index: usize, theta: f64, phi: f64) -> Complex64 {
    let params = system.params();
    let (n, m) = (params.n(), params.m());
    let alpha = k.unsigned_abs() as usize;
    let x = system.eigenvalue(k, index).unwrap();
    let family = UltrasphericalFamily::new(alpha, n + 2);
    let (shift, top) = if alpha <= m { (m - alpha, n - m) } else { (0, n - alpha) };
    let v = family.associated_values(top + 1, x, shift).unwrap();
    let kappa = 1.0 / v.iter().map(|y| y * y).sum::<f64>().sqrt();
    let t = theta.cos();
    let b = spherelok::ultraspherical::recurrence_coefficient(alpha, n - alpha + 1);
    let mut numer = b * v[top] * family.eval_poly(n - alpha + 1, t).unwrap();
    if alpha < m {
        numer += family.eval_poly(m - alpha - 1, t).unwrap();
    }
    let radial = kappa * theta.sin().powi(alpha as i32) * numer / (t - x);
    radial * Complex64::from_polar(1.0, k as f64 * phi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn psi_sum_matches_quotient(
        band in 0usize..3,
        k_frac in 0.0f64..1.0,
        i_frac in 0.0f64..1.0,
        theta in 0.0f64..std::f64::consts::PI,
        phi in 0.0f64..(2.0 * std::f64::consts::PI),
        negative in any::<bool>(),
    ) {
        let (n, m) = [(8usize, 0usize), (12, 4), (16, 3)][band];
        let system = plan(n, m).system();
        let alpha = ((n + 1) as f64 * k_frac) as usize;
        let k = if negative { -(alpha as i64) } else { alpha as i64 };
        let size = system.block(k).unwrap().size();
        let index = ((size as f64 * i_frac) as usize).min(size - 1);
        let x = system.eigenvalue(k, index).unwrap();
        prop_assume!((theta.cos() - x).abs() >= 1e-3);
        let sum = eval_psi(system, k, index, theta, phi).unwrap();
        let quotient = psi_quotient(system, k, index, theta, phi);
        prop_assert!((sum - quotient).norm() <= 1e-8 * (1.0 + sum.norm()), "{sum} {quotient}");
    }
}
