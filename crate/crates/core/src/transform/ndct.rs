//! Evaluation of Chebyshev series `Σ_j a_j cos(j θ_i)` at arbitrary nodes.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

const OVERSAMPLING: f64 = 2.0;
const HALF_WIDTH: usize = 12;

/// How the cosine sums are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NdctMode {
    /// Clenshaw at every node, `O(N²)`.
    #[default]
    Direct,
    /// Kaiser–Bessel windowed FFT, `O(N log N)`.
    Window,
}

/// Evaluator bound to a fixed node set.
pub enum Ndct {
    Direct { nodes: Vec<f64> },
    Window(WindowNdct),
}

impl Ndct {
    /// `nodes` are the points `x_i = cos θ_i`; `len` is the series length.
    pub fn new(mode: NdctMode, nodes: &[f64], len: usize) -> Self {
        match mode {
            NdctMode::Direct => Ndct::Direct {
                nodes: nodes.to_vec(),
            },
            NdctMode::Window => Ndct::Window(WindowNdct::new(nodes, len)),
        }
    }

    pub fn mode(&self) -> NdctMode {
        match self {
            Ndct::Direct { .. } => NdctMode::Direct,
            Ndct::Window(_) => NdctMode::Window,
        }
    }

    pub fn eval(&self, a: &[Complex64]) -> Vec<Complex64> {
        match self {
            Ndct::Direct { nodes } => nodes.iter().map(|&x| clenshaw(a, x)).collect(),
            Ndct::Window(w) => w.eval(a),
        }
    }
}

fn clenshaw(a: &[Complex64], x: f64) -> Complex64 {
    let zero = Complex64::new(0.0, 0.0);
    let (mut b1, mut b2) = (zero, zero);
    for &c in a.iter().skip(1).rev() {
        let b0 = b1 * (2.0 * x) - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    match a.first() {
        Some(&a0) => b1 * x - b2 + a0,
        None => zero,
    }
}

/// Windowed evaluation of the `2π`-periodic series
/// `f(θ) = a_0 + Σ_{j≥1} a_j/2 (e^{ijθ} + e^{-ijθ})` on an oversampled grid.
pub struct WindowNdct {
    len: usize,
    grid: usize,
    fft: Arc<dyn Fft<f64>>,
    /// `1 / (G φ̂(j))` for `j = 0..len`.
    deconvolve: Vec<f64>,
    /// Per node: first grid index and window weights.
    stencils: Vec<(i64, Vec<f64>)>,
}

impl WindowNdct {
    pub fn new(nodes: &[f64], len: usize) -> Self {
        let len = len.max(1);
        let grid = ((2.0 * OVERSAMPLING * len as f64) as usize)
            .next_power_of_two()
            .max(4 * HALF_WIDTH);
        let g = grid as f64;
        let w = HALF_WIDTH as f64;
        let b = PI * (2.0 - 1.0 / OVERSAMPLING);

        let deconvolve = (0..len)
            .map(|j| {
                let s = 2.0 * PI * j as f64 / g;
                let phi_hat = bessel_i0(w * (b * b - s * s).sqrt()) / g;
                1.0 / (g * phi_hat)
            })
            .collect();

        let stencils = nodes
            .iter()
            .map(|&x| {
                let t = x.clamp(-1.0, 1.0).acos() / (2.0 * PI);
                let first = (g * t - w).ceil() as i64;
                let last = (g * t + w).floor() as i64;
                let weights = (first..=last)
                    .map(|l| kaiser_bessel(t - l as f64 / g, g, w, b))
                    .collect();
                (first, weights)
            })
            .collect();

        let fft = FftPlanner::new().plan_fft_inverse(grid);
        WindowNdct {
            len,
            grid,
            fft,
            deconvolve,
            stencils,
        }
    }

    pub fn eval(&self, a: &[Complex64]) -> Vec<Complex64> {
        assert!(a.len() <= self.len, "series longer than planned");
        let g = self.grid;
        let mut buf = vec![Complex64::new(0.0, 0.0); g];
        for (j, &c) in a.iter().enumerate() {
            if j == 0 {
                buf[0] = c * self.deconvolve[0];
            } else {
                let v = c * (0.5 * self.deconvolve[j]);
                buf[j] += v;
                buf[g - j] += v;
            }
        }
        self.fft.process(&mut buf);
        self.stencils
            .iter()
            .map(|(first, weights)| {
                weights
                    .iter()
                    .enumerate()
                    .map(|(o, &wt)| buf[(first + o as i64).rem_euclid(g as i64) as usize] * wt)
                    .sum()
            })
            .collect()
    }
}

fn kaiser_bessel(x: f64, g: f64, w: f64, b: f64) -> f64 {
    let arg = w * w - g * g * x * x;
    if arg < 0.0 {
        return 0.0;
    }
    let r = arg.sqrt();
    if r < 1e-12 {
        return b / PI;
    }
    (b * r).sinh() / (PI * r)
}

/// Modified Bessel function `I_0` by its power series (all terms positive).
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > sum * 1e-17 {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bessel_values() {
        assert_eq!(bessel_i0(0.0), 1.0);
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008_4).abs() < 1e-15);
        assert!((bessel_i0(10.0) / 2_815.716_628_466_254 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn window_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for len in [1usize, 5, 64, 300, 1024] {
            let a: Vec<Complex64> = (0..len)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let mut nodes: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
            nodes.extend([1.0, -1.0, 0.0]);
            let direct = Ndct::new(NdctMode::Direct, &nodes, len).eval(&a);
            let fast = Ndct::new(NdctMode::Window, &nodes, len).eval(&a);
            let l1: f64 = a.iter().map(|z| z.norm()).sum();
            for (d, f) in direct.iter().zip(&fast) {
                assert!((d - f).norm() < 1e-10 * l1.max(1.0), "len {len}: {d} vs {f}");
            }
        }
    }
}
