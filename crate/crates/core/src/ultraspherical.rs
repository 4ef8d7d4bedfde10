//! Orthonormal ultraspherical polynomials and their associated variants.
//!
//! For an integer weight exponent `alpha` the family `p_l` is orthonormal with
//! respect to `<f, g> = 1/2 ∫ f g (1 - x²)^alpha dx` on `[-1, 1]` and satisfies
//!
//! ```text
//! b_{l+1} p_{l+1}(x) = x p_l(x) - b_l p_{l-1}(x),   p_{-1} = 0,  p_0 = 1 / b_0
//! b_l² = l (l + 2 alpha) / ((2l + 2 alpha + 1)(2l + 2 alpha - 1)),   l >= 1
//! b_0² = (sqrt(pi) / 2) Γ(alpha + 1) / Γ(alpha + 3/2)
//! ```
//!
//! The associated polynomials `p_l(x, m)` run the same recurrence with every
//! coefficient index shifted by `m`. All evaluation is by forward recurrence.

use crate::error::{Error, Result};

/// Recurrence coefficient `b_l` of the orthonormal family with exponent `alpha`.
///
/// `b_0` uses the product form `b_0² = ∏_{j=1}^{alpha} j / (j + 1/2)`, which is
/// the gamma-function ratio above without ever evaluating a gamma function.
pub fn recurrence_coefficient(alpha: usize, l: usize) -> f64 {
    if l == 0 {
        let mut sq = 1.0;
        for j in 1..=alpha {
            let j = j as f64;
            sq *= j / (j + 0.5);
        }
        sq.sqrt()
    } else {
        let l = l as f64;
        let a = alpha as f64;
        (l * (l + 2.0 * a) / ((2.0 * l + 2.0 * a + 1.0) * (2.0 * l + 2.0 * a - 1.0))).sqrt()
    }
}

/// Recurrence coefficients `b_0, ..., b_{max_degree + 1}` for one exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct UltrasphericalFamily {
    alpha: usize,
    max_degree: usize,
    b: Vec<f64>,
}

/// Both sides of the Christoffel–Darboux type identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChristoffelDarboux {
    /// `Σ_{l=m}^{n} p_{l-α}(x) p_{l-m}(y, m-α)` summed term by term.
    pub direct: f64,
    /// The closed two-term right-hand side.
    pub closed: f64,
}

impl UltrasphericalFamily {
    pub fn new(alpha: usize, max_degree: usize) -> Self {
        let b = (0..=max_degree + 1)
            .map(|l| recurrence_coefficient(alpha, l))
            .collect();
        UltrasphericalFamily {
            alpha,
            max_degree,
            b,
        }
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// All stored coefficients `b_0 ..= b_{max_degree+1}`.
    pub fn coefficients(&self) -> &[f64] {
        &self.b
    }

    pub fn recurrence_coeff(&self, l: usize) -> Result<f64> {
        self.b.get(l).copied().ok_or(Error::IndexOutOfRange {
            index: l,
            limit: self.max_degree + 1,
        })
    }

    /// `p_l(x)` for `l <= max_degree` and `|x| <= 1`.
    pub fn eval_poly(&self, l: usize, x: f64) -> Result<f64> {
        self.eval_associated(l, x, 0)
    }

    /// `p_l(x, shift)`; requires `shift + l + 1 <= max_degree + 1`.
    pub fn eval_associated(&self, l: usize, x: f64, shift: usize) -> Result<f64> {
        check_domain(x)?;
        self.check_span(l, shift)?;
        let b = &self.b[shift..];
        let mut prev = 0.0;
        let mut cur = 1.0 / b[0];
        for j in 0..l {
            let next = (x * cur - b[j] * prev) / b[j + 1];
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// The vector `(p_0(x, shift), ..., p_{len-1}(x, shift))`.
    ///
    /// At a root of `p_len(·, shift)` this is an eigenvector of the truncated
    /// Jacobi matrix with off-diagonal `b_{shift+1}, ..., b_{shift+len-1}`.
    pub fn associated_values(&self, len: usize, x: f64, shift: usize) -> Result<Vec<f64>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        check_domain(x)?;
        self.check_span(len - 1, shift)?;
        let b = &self.b[shift..];
        let mut out = Vec::with_capacity(len);
        let mut prev = 0.0;
        let mut cur = 1.0 / b[0];
        out.push(cur);
        for j in 0..len - 1 {
            let next = (x * cur - b[j] * prev) / b[j + 1];
            prev = cur;
            cur = next;
            out.push(cur);
        }
        Ok(out)
    }

    /// Evaluates `Σ_{l=m}^{n} p_{l-α}(x) p_{l-m}(y, m-α)` directly and through
    /// the closed Christoffel–Darboux form. Requires `α <= m <= n`, `x != y`
    /// and coefficients up to `b_{n-α+1}`.
    pub fn christoffel_darboux_sum(
        &self,
        m: usize,
        n: usize,
        x: f64,
        y: f64,
    ) -> Result<ChristoffelDarboux> {
        let alpha = self.alpha;
        if m < alpha || n < m {
            return Err(Error::InvalidParameter(format!(
                "need alpha <= m <= n, got alpha = {alpha}, m = {m}, n = {n}"
            )));
        }
        if (x - y).abs() < 1e-12 {
            return Err(Error::CoincidentArguments(x));
        }
        let shift = m - alpha;
        let top = n - alpha + 1;
        let px = self.associated_values(top + 1, x, 0)?;
        let qy = self.associated_values(n - m + 2, y, shift)?;
        let direct = (m..=n).map(|l| px[l - alpha] * qy[l - m]).sum();
        let low = if m > alpha { px[m - alpha - 1] } else { 0.0 };
        let cross = px[top] * qy[n - m] - px[top - 1] * qy[n - m + 1];
        let closed = (low + self.b[top] * cross) / (x - y);
        Ok(ChristoffelDarboux { direct, closed })
    }

    /// Chebyshev expansion coefficients of `p_0, ..., p_{count-1}`.
    pub fn chebyshev_connection(&self, count: usize) -> Result<ConnectionMatrix> {
        if count > self.max_degree + 1 {
            return Err(Error::IndexOutOfRange {
                index: count,
                limit: self.max_degree + 1,
            });
        }
        let mut data = vec![0.0; count * count];
        if count == 0 {
            return Ok(ConnectionMatrix { size: 0, data });
        }
        let mut prev = vec![0.0; count + 1];
        let mut cur = vec![0.0; count + 1];
        cur[0] = 1.0 / self.b[0];
        for j in 0..count {
            for i in 0..=j {
                data[i * count + j] = cur[i];
            }
            if j + 1 == count {
                break;
            }
            // p_{j+1} = (x p_j - b_j p_{j-1}) / b_{j+1}, with x T_0 = T_1 and
            // x T_i = (T_{i-1} + T_{i+1}) / 2.
            let mut next = vec![0.0; count + 1];
            for i in 0..=j {
                let c = cur[i];
                if i == 0 {
                    next[1] += c;
                } else {
                    next[i - 1] += 0.5 * c;
                    next[i + 1] += 0.5 * c;
                }
            }
            let inv = 1.0 / self.b[j + 1];
            for i in 0..=j + 1 {
                next[i] = (next[i] - self.b[j] * prev[i]) * inv;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(ConnectionMatrix { size: count, data })
    }

    fn check_span(&self, l: usize, shift: usize) -> Result<()> {
        if shift + l + 1 > self.max_degree + 1 {
            return Err(Error::IndexOutOfRange {
                index: shift + l,
                limit: self.max_degree,
            });
        }
        Ok(())
    }
}

fn check_domain(x: f64) -> Result<()> {
    if x.is_nan() || x.abs() > 1.0 {
        return Err(Error::OutOfDomain(x));
    }
    Ok(())
}

/// Upper-triangular matrix `B` with `p_j(x) = Σ_i B[i][j] T_i(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionMatrix {
    size: usize,
    data: Vec<f64>,
}

impl ConnectionMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    /// Chebyshev coefficients of `p_j`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.size).map(|i| self.get(i, j)).collect()
    }

    /// `B c`: Chebyshev coefficients of `Σ_j c_j p_j`.
    pub fn apply(&self, c: &[f64]) -> Vec<f64> {
        assert_eq!(c.len(), self.size);
        let n = self.size;
        (0..n)
            .map(|i| (i..n).map(|j| self.data[i * n + j] * c[j]).sum())
            .collect()
    }
}

/// Evaluates `Σ_i a_i T_i(x)` by Clenshaw's recurrence.
pub fn chebyshev_eval(a: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in a.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    match a.first() {
        Some(&a0) => x * b1 - b2 + a0,
        None => 0.0,
    }
}
