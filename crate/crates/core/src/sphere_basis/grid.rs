use std::f64::consts::PI;

use num_complex::Complex64;

use super::harmonics::harmonic_column;
use super::{BandParams, HarmonicCoeffs};
use crate::error::{Error, Result};

/// Gauss–Legendre nodes (descending) and weights on `[-1, 1]`, weights summing
/// to 2. Newton iteration on the Legendre three-term recurrence.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; count];
    let mut weights = vec![0.0; count];
    let nf = count as f64;
    for i in 0..count.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(count, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(count, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[count - 1 - i] = -x;
        weights[count - 1 - i] = w;
    }
    if count % 2 == 1 {
        nodes[count / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let j = j as f64;
        let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Tensor grid on the sphere: Gauss–Legendre in `cos θ`, equispaced in `φ`.
///
/// With `P` latitudes and `Q` longitudes the discrete inner product equals the
/// normalized surface integral for every product whose `cos θ`-degree is at most
/// `2P - 1` and whose azimuthal frequency is below `Q`.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    cos_theta: Vec<f64>,
    theta: Vec<f64>,
    weights: Vec<f64>,
    phi: Vec<f64>,
}

impl SphereGrid {
    pub fn new(latitudes: usize, longitudes: usize) -> Result<Self> {
        if latitudes == 0 || longitudes == 0 {
            return Err(Error::InvalidParameter("grid sizes must be positive".into()));
        }
        let (cos_theta, weights) = gauss_legendre(latitudes);
        let theta = cos_theta.iter().map(|x| x.acos()).collect();
        let phi = (0..longitudes)
            .map(|j| 2.0 * PI * j as f64 / longitudes as f64)
            .collect();
        Ok(SphereGrid {
            cos_theta,
            theta,
            weights,
            phi,
        })
    }

    /// Grid that integrates products of two degree-`d` polynomials exactly:
    /// `P = d + 1`, `Q = 2d + 2`.
    pub fn for_degree(degree: usize) -> Self {
        Self::new(degree + 1, 2 * degree + 2).expect("positive sizes")
    }

    pub fn latitudes(&self) -> usize {
        self.theta.len()
    }

    pub fn longitudes(&self) -> usize {
        self.phi.len()
    }

    pub fn len(&self) -> usize {
        self.latitudes() * self.longitudes()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn cos_theta(&self) -> &[f64] {
        &self.cos_theta
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Gauss–Legendre weights in `cos θ` (sum 2).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature weight of grid point `(i, j)`, normalized so that the weights
    /// sum to one (the `1/4π` surface measure).
    pub fn point_weight(&self, i: usize) -> f64 {
        self.weights[i] / (2.0 * self.longitudes() as f64)
    }

    /// Samples `f` row-major over `θ` then `φ`.
    pub fn sample<F: FnMut(f64, f64) -> Complex64>(&self, mut f: F) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.len());
        for &t in &self.theta {
            for &p in &self.phi {
                out.push(f(t, p));
            }
        }
        out
    }

    /// Samples the band-limited function with harmonic coefficients `c`.
    pub fn synthesize(&self, c: &HarmonicCoeffs) -> Vec<Complex64> {
        evaluate_on(c, &self.theta, &self.phi)
    }

    /// `<f, g> = 1/(4π) ∫ f conj(g) dω` on sampled values.
    pub fn inner_product(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        let q = self.longitudes();
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..self.latitudes() {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..q {
                row += f[i * q + j] * g[i * q + j].conj();
            }
            total += row * self.point_weight(i);
        }
        total
    }

    /// `<w(cos θ) f, g>` for a latitude weight `w`.
    pub fn weighted_inner_product<W: Fn(f64) -> f64>(
        &self,
        weight: W,
        f: &[Complex64],
        g: &[Complex64],
    ) -> Complex64 {
        let q = self.longitudes();
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..self.latitudes() {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..q {
                row += f[i * q + j] * g[i * q + j].conj();
            }
            total += row * self.point_weight(i) * weight(self.cos_theta[i]);
        }
        total
    }
}

/// Values of the function with coefficients `c` on the tensor grid
/// `theta × phi`, row-major over `θ` then `φ`.
pub fn evaluate_on(c: &HarmonicCoeffs, theta: &[f64], phi: &[f64]) -> Vec<Complex64> {
    let params = c.params();
    let q = phi.len();
    let mut out = vec![Complex64::new(0.0, 0.0); theta.len() * q];
    for (row, &t) in out.chunks_mut(q.max(1)).zip(theta) {
        for k in params.orders() {
            let radial = latitude_profile(params, c.block(k), k, t);
            if radial == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (v, &p) in row.iter_mut().zip(phi) {
                *v += radial * Complex64::from_polar(1.0, k as f64 * p);
            }
        }
    }
    out
}

/// `Σ_l c_{l,k} Y_l^k(θ, 0)` for one row of coefficients.
pub fn latitude_profile(
    params: BandParams,
    block: &[Complex64],
    k: i64,
    theta: f64,
) -> Complex64 {
    if block.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    let alpha = k.unsigned_abs() as usize;
    let column = harmonic_column(alpha, params.n(), theta);
    let first = params.first_degree(k);
    block
        .iter()
        .enumerate()
        .map(|(j, z)| z * column[first + j - alpha])
        .sum()
}
