//! Jacobi blocks of `P M P` and their eigendecompositions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sphere_basis::BandParams;
use crate::ultraspherical::recurrence_coefficient;

/// Symmetric tridiagonal block with zero diagonal and off-diagonal
/// `b_{offset+1}^{(alpha)}, ..., b_{offset+size-1}^{(alpha)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiBlock {
    alpha: usize,
    offset: usize,
    offdiag: Vec<f64>,
}

impl JacobiBlock {
    pub fn new(alpha: usize, offset: usize, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter("Jacobi block size must be positive".into()));
        }
        let offdiag = (1..size)
            .map(|j| recurrence_coefficient(alpha, offset + j))
            .collect();
        Ok(JacobiBlock {
            alpha,
            offset,
            offdiag,
        })
    }

    /// Block of row `k`: truncated at `m - |k|` with size `n - m + 1` when
    /// `|k| <= m`, the plain `J(|k|)` of size `n - |k| + 1` otherwise.
    pub fn build(params: BandParams, k: i64) -> Result<Self> {
        params.check_order(k)?;
        Self::new(
            k.unsigned_abs() as usize,
            params.truncation_offset(k),
            params.block_len(k),
        )
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn truncation_offset(&self) -> usize {
        self.offset
    }

    pub fn size(&self) -> usize {
        self.offdiag.len() + 1
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `J v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        assert_eq!(v.len(), n, "vector length must match block size");
        let mut out = vec![0.0; n];
        for (j, &b) in self.offdiag.iter().enumerate() {
            out[j] += b * v[j + 1];
            out[j + 1] += b * v[j];
        }
        out
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.size();
        let mut a = vec![0.0; n * n];
        for (j, &b) in self.offdiag.iter().enumerate() {
            a[j * n + j + 1] = b;
            a[(j + 1) * n + j] = b;
        }
        a
    }

    pub fn eigendecompose(&self) -> Result<EigenBlock> {
        let values = tridiagonal_eigenvalues(&self.offdiag)?;
        let vectors = inverse_iteration(&self.offdiag, &values);
        let block = EigenBlock {
            alpha: self.alpha,
            offset: self.offset,
            eigenvalues: values,
            vectors,
        };
        block.check_simple()?;
        Ok(block)
    }
}

/// Eigenvalues and orthonormal eigenvectors of one Jacobi block, in strictly
/// decreasing eigenvalue order. Shared by the rows `k` and `-k`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBlock {
    alpha: usize,
    offset: usize,
    eigenvalues: Vec<f64>,
    vectors: Vec<f64>,
}

impl EigenBlock {
    /// Assembles a block from stored data (row-major `V`, columns are
    /// eigenvectors).
    pub fn from_parts(
        alpha: usize,
        offset: usize,
        eigenvalues: Vec<f64>,
        vectors: Vec<f64>,
    ) -> Result<Self> {
        let n = eigenvalues.len();
        if vectors.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: vectors.len(),
            });
        }
        Ok(EigenBlock {
            alpha,
            offset,
            eigenvalues,
            vectors,
        })
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn truncation_offset(&self) -> usize {
        self.offset
    }

    pub fn size(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Row-major `V`.
    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.vectors[row * self.size() + col]
    }

    /// Column `index` of `V`.
    pub fn vector(&self, index: usize) -> Vec<f64> {
        let n = self.size();
        (0..n).map(|r| self.vectors[r * n + index]).collect()
    }

    /// `max |VᵀV - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.size();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let dot: f64 = (0..n)
                    .map(|r| self.vectors[r * n + i] * self.vectors[r * n + j])
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max_i ‖J v_i - x_i v_i‖_∞`.
    pub fn eigen_residual(&self, block: &JacobiBlock) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, &x) in self.eigenvalues.iter().enumerate() {
            let v = self.vector(i);
            let jv = block.apply(&v);
            for (a, b) in jv.iter().zip(&v) {
                worst = worst.max((a - x * b).abs());
            }
        }
        worst
    }

    fn check_simple(&self) -> Result<()> {
        for w in self.eigenvalues.windows(2) {
            if w[0] - w[1] <= 1e-13 {
                return Err(Error::NumericContract(format!(
                    "eigenvalue gap {:e} at alpha {} is not simple",
                    w[0] - w[1],
                    self.alpha
                )));
            }
        }
        Ok(())
    }
}

/// All Jacobi eigendecompositions for a band, one per `|k|`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    params: BandParams,
    blocks: Vec<EigenBlock>,
}

impl EigenSystem {
    pub fn build(params: BandParams) -> Result<Self> {
        let blocks = (0..=params.n())
            .into_par_iter()
            .map(|a| JacobiBlock::build(params, a as i64)?.eigendecompose())
            .collect::<Result<Vec<_>>>()?;
        Ok(EigenSystem { params, blocks })
    }

    /// Wraps precomputed blocks indexed by `|k| = 0..=n`.
    pub fn from_blocks(params: BandParams, blocks: Vec<EigenBlock>) -> Result<Self> {
        if blocks.len() != params.n() + 1 {
            return Err(Error::DimensionMismatch {
                expected: params.n() + 1,
                actual: blocks.len(),
            });
        }
        for (a, b) in blocks.iter().enumerate() {
            let k = a as i64;
            if b.alpha() != a
                || b.size() != params.block_len(k)
                || b.truncation_offset() != params.truncation_offset(k)
            {
                return Err(Error::InvalidParameter(format!(
                    "block {a} does not match band n={} m={}",
                    params.n(),
                    params.m()
                )));
            }
        }
        Ok(EigenSystem { params, blocks })
    }

    pub fn params(&self) -> BandParams {
        self.params
    }

    pub fn block(&self, k: i64) -> Result<&EigenBlock> {
        self.params.check_order(k)?;
        Ok(&self.blocks[k.unsigned_abs() as usize])
    }

    pub fn blocks(&self) -> &[EigenBlock] {
        &self.blocks
    }

    /// `x_{|k|, index}` with a zero-based index.
    pub fn eigenvalue(&self, k: i64, index: usize) -> Result<f64> {
        let b = self.block(k)?;
        b.eigenvalues()
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                limit: b.size(),
            })
    }
}

/// Eigenvalues of the zero-diagonal symmetric tridiagonal matrix with the given
/// off-diagonal, in decreasing order. Implicit QL with Wilkinson shifts.
pub fn tridiagonal_eigenvalues(offdiag: &[f64]) -> Result<Vec<f64>> {
    let n = offdiag.len() + 1;
    let mut d = vec![0.0; n];
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let anorm = (0..n)
        .map(|i| {
            let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
            let right = offdiag.get(i).map_or(0.0, |v| v.abs());
            left + right
        })
        .fold(0.0, f64::max);
    let tol = f64::EPSILON * anorm;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n && e[m].abs() > tol {
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NumericContract(
                    "tridiagonal QL failed to converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| b.total_cmp(a));
    Ok(d)
}

/// Eigenvectors for known eigenvalues by inverse iteration on a pivoted
/// tridiagonal LU, reorthogonalizing inside clusters. Returns row-major `V`.
fn inverse_iteration(offdiag: &[f64], values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n == 1 {
        return vec![1.0];
    }
    let onenrm = (0..n)
        .map(|i| {
            let left = if i > 0 { offdiag[i - 1].abs() } else { 0.0 };
            left + offdiag.get(i).map_or(0.0, |v| v.abs())
        })
        .fold(0.0, f64::max);
    let ortol = 1e-3 * onenrm;
    let pivmin = f64::EPSILON * onenrm.max(f64::MIN_POSITIVE);

    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut cluster_start = 0;
    let mut seed = 0x9e37_79b9_7f4a_7c15_u64;
    let mut lu = TridiagonalLu::new(n);

    for (j, &x) in values.iter().enumerate() {
        if j > 0 && (values[j - 1] - x).abs() > ortol {
            cluster_start = j;
        }
        lu.factor(offdiag, x, pivmin);
        let mut v: Vec<f64> = (0..n)
            .map(|_| {
                seed ^= seed << 13;
                seed ^= seed >> 7;
                seed ^= seed << 17;
                (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        for _ in 0..3 {
            lu.solve(&mut v);
            for prev in &columns[cluster_start..j] {
                let dot: f64 = prev.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (vi, pi) in v.iter_mut().zip(prev) {
                    *vi -= dot * pi;
                }
            }
            normalize(&mut v);
        }
        fix_sign(&mut v);
        columns.push(v);
    }

    let mut out = vec![0.0; n * n];
    for (c, col) in columns.iter().enumerate() {
        for (r, &val) in col.iter().enumerate() {
            out[r * n + c] = val;
        }
    }
    out
}

fn normalize(v: &mut [f64]) {
    let scale = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return;
    }
    for x in v.iter_mut() {
        *x /= scale;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

fn fix_sign(v: &mut [f64]) {
    let lead = v
        .iter()
        .copied()
        .find(|x| x.abs() >= 1e-14)
        .unwrap_or(v[0]);
    if lead < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// LU factorization with partial pivoting of `T - shift I`.
struct TridiagonalLu {
    d: Vec<f64>,
    dl: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn new(n: usize) -> Self {
        TridiagonalLu {
            d: vec![0.0; n],
            dl: vec![0.0; n - 1],
            du: vec![0.0; n - 1],
            du2: vec![0.0; n.saturating_sub(2)],
            swapped: vec![false; n - 1],
        }
    }

    fn factor(&mut self, offdiag: &[f64], shift: f64, pivmin: f64) {
        let n = self.d.len();
        self.d.iter_mut().for_each(|x| *x = -shift);
        self.dl.copy_from_slice(offdiag);
        self.du.copy_from_slice(offdiag);
        self.du2.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..n - 1 {
            if self.d[i].abs() >= self.dl[i].abs() {
                self.swapped[i] = false;
                if self.d[i].abs() < pivmin {
                    self.d[i] = pivmin;
                }
                let fact = self.dl[i] / self.d[i];
                self.dl[i] = fact;
                self.d[i + 1] -= fact * self.du[i];
            } else {
                self.swapped[i] = true;
                let fact = self.d[i] / self.dl[i];
                self.d[i] = self.dl[i];
                self.dl[i] = fact;
                let temp = self.du[i];
                self.du[i] = self.d[i + 1];
                self.d[i + 1] = temp - fact * self.d[i + 1];
                if i + 2 < n {
                    self.du2[i] = self.du[i + 1];
                    self.du[i + 1] *= -fact;
                }
            }
        }
        if self.d[n - 1].abs() < pivmin {
            self.d[n - 1] = pivmin;
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
        let scale = b.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        if !scale.is_finite() || scale > 1e150 {
            let s = if scale.is_finite() { scale } else { f64::MAX };
            for x in b.iter_mut() {
                *x = if x.is_finite() { *x / s } else { x.signum() };
            }
        }
    }
}
