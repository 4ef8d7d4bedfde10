use crate::error::{Error, Result};

/// Band limits `0 <= m <= n` of the space `Π_n^m = Harm_m ⊕ ... ⊕ Harm_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BandParams {
    n: usize,
    m: usize,
}

impl BandParams {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m > n {
            return Err(Error::InvalidBand { n, m });
        }
        Ok(BandParams { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `N_n^m = (n + 1)² - m²`.
    pub fn dimension(&self) -> usize {
        (self.n + 1) * (self.n + 1) - self.m * self.m
    }

    /// Orders in canonical layout order: `n, n - 1, ..., -n`.
    pub fn orders(&self) -> impl DoubleEndedIterator<Item = i64> + Clone {
        let n = self.n as i64;
        (-n..=n).rev()
    }

    pub fn check_order(&self, k: i64) -> Result<()> {
        if k.unsigned_abs() as usize > self.n {
            return Err(Error::OrderOutOfRange { k, limit: self.n });
        }
        Ok(())
    }

    /// Lowest degree present in row `k`: `max(|k|, m)`.
    pub fn first_degree(&self, k: i64) -> usize {
        (k.unsigned_abs() as usize).max(self.m)
    }

    /// `N_k = n - max(|k|, m) + 1`.
    pub fn block_len(&self, k: i64) -> usize {
        self.n - self.first_degree(k) + 1
    }

    /// Position of block `k` inside the concatenated coefficient vector.
    pub fn block_offset(&self, k: i64) -> usize {
        let n = self.n as i64;
        (k + 1..=n).map(|j| self.block_len(j)).sum()
    }

    /// Whether row `k` is a truncated Jacobi block (`|k| <= m`).
    pub fn is_truncated(&self, k: i64) -> bool {
        (k.unsigned_abs() as usize) <= self.m
    }

    /// Truncation offset `m - |k|` of the Jacobi block for row `k` (zero when
    /// `|k| >= m`).
    pub fn truncation_offset(&self, k: i64) -> usize {
        self.m.saturating_sub(k.unsigned_abs() as usize)
    }

    pub fn ensure_same(&self, other: &BandParams) -> Result<()> {
        if self != other {
            return Err(Error::BandMismatch {
                expected_n: self.n,
                expected_m: self.m,
                n: other.n,
                m: other.m,
            });
        }
        Ok(())
    }
}
