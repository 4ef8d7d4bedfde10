use num_complex::Complex64;

use super::params::BandParams;
use crate::error::{Error, Result};

macro_rules! block_coeffs {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name {
            params: BandParams,
            data: Vec<Complex64>,
        }

        impl $name {
            pub fn zeros(params: BandParams) -> Self {
                $name {
                    params,
                    data: vec![Complex64::new(0.0, 0.0); params.dimension()],
                }
            }

            /// Wraps a vector already in canonical block order.
            pub fn from_vec(params: BandParams, data: Vec<Complex64>) -> Result<Self> {
                if data.len() != params.dimension() {
                    return Err(Error::DimensionMismatch {
                        expected: params.dimension(),
                        actual: data.len(),
                    });
                }
                Ok($name { params, data })
            }

            pub fn params(&self) -> BandParams {
                self.params
            }

            pub fn as_slice(&self) -> &[Complex64] {
                &self.data
            }

            pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
                &mut self.data
            }

            pub fn into_vec(self) -> Vec<Complex64> {
                self.data
            }

            pub fn len(&self) -> usize {
                self.data.len()
            }

            pub fn is_empty(&self) -> bool {
                self.data.is_empty()
            }

            pub fn block(&self, k: i64) -> &[Complex64] {
                let start = self.params.block_offset(k);
                &self.data[start..start + self.params.block_len(k)]
            }

            pub fn block_mut(&mut self, k: i64) -> &mut [Complex64] {
                let start = self.params.block_offset(k);
                let len = self.params.block_len(k);
                &mut self.data[start..start + len]
            }

            pub fn norm_sqr(&self) -> f64 {
                self.data.iter().map(|z| z.norm_sqr()).sum()
            }

            pub fn norm(&self) -> f64 {
                self.norm_sqr().sqrt()
            }

            pub fn scale(&mut self, factor: Complex64) {
                for z in &mut self.data {
                    *z *= factor;
                }
            }

            /// `self + factor * other`.
            pub fn axpy(&mut self, factor: Complex64, other: &Self) -> Result<()> {
                self.params.ensure_same(&other.params)?;
                for (a, b) in self.data.iter_mut().zip(&other.data) {
                    *a += factor * b;
                }
                Ok(())
            }

            /// Largest entrywise modulus of `self - other`.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.data
                    .iter()
                    .zip(&other.data)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            }
        }
    };
}

block_coeffs!(
    /// Spherical-harmonic coefficients `c = (c_n, c_{n-1}, ..., c_{-n})`; inside
    /// block `k` the degree `l` runs upward from `max(|k|, m)` to `n`.
    HarmonicCoeffs
);

block_coeffs!(
    /// Coefficients `d_{k,i}` in the localized basis, blocks in the same order as
    /// [`HarmonicCoeffs`]; inside block `k` the index follows decreasing
    /// eigenvalue.
    LocalizedCoeffs
);

impl HarmonicCoeffs {
    /// Coefficient of `Y_l^k`, if it belongs to the band.
    pub fn get(&self, l: usize, k: i64) -> Option<Complex64> {
        self.position(l, k).map(|p| self.data[p])
    }

    pub fn set(&mut self, l: usize, k: i64, value: Complex64) -> Result<()> {
        let p = self.position(l, k).ok_or_else(|| {
            Error::InvalidParameter(format!("Y_{l}^{k} is not part of the band"))
        })?;
        self.data[p] = value;
        Ok(())
    }

    /// Unit coefficient vector of a single spherical harmonic.
    pub fn unit(params: BandParams, l: usize, k: i64) -> Result<Self> {
        let mut c = Self::zeros(params);
        c.set(l, k, Complex64::new(1.0, 0.0))?;
        Ok(c)
    }

    fn position(&self, l: usize, k: i64) -> Option<usize> {
        let p = &self.params;
        if k.unsigned_abs() as usize > p.n() || l > p.n() || l < p.first_degree(k) {
            return None;
        }
        Some(p.block_offset(k) + (l - p.first_degree(k)))
    }
}

impl LocalizedCoeffs {
    /// `d_{k,index}` with a zero-based index.
    pub fn get(&self, k: i64, index: usize) -> Option<Complex64> {
        let p = &self.params;
        if k.unsigned_abs() as usize > p.n() || index >= p.block_len(k) {
            return None;
        }
        Some(self.data[p.block_offset(k) + index])
    }

    /// Unit vector selecting the basis function `(k, index)`.
    pub fn unit(params: BandParams, k: i64, index: usize) -> Result<Self> {
        params.check_order(k)?;
        let len = params.block_len(k);
        if index >= len {
            return Err(Error::IndexOutOfRange { index, limit: len });
        }
        let mut d = Self::zeros(params);
        d.data[params.block_offset(k) + index] = Complex64::new(1.0, 0.0);
        Ok(d)
    }
}
