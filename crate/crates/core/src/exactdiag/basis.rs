use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Product basis of the maximal-spin sectors of each block.
///
/// Block `k` of `n_k` spins has `n_k + 1` states, labelled by the number of
/// up spins `j_k` (so `2 m_k = 2 j_k - n_k`). The flat index is
/// `sum_k j_k * stride_k` with the last block varying fastest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricBasis {
    counts: Vec<usize>,
    strides: Vec<usize>,
    dim: usize,
}

impl SymmetricBasis {
    pub fn new(counts: &[usize], max_dim: usize) -> Result<Self> {
        let mut dim: u128 = 1;
        for &c in counts {
            dim *= c as u128 + 1;
            if dim > max_dim as u128 {
                return Err(Error::TooLarge {
                    what: "sector dimension",
                    size: dim,
                    limit: max_dim as u128,
                });
            }
        }
        let counts: Vec<usize> = counts.iter().copied().filter(|&c| c > 0).collect();
        let mut strides = vec![1; counts.len()];
        for k in (0..counts.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * (counts[k + 1] + 1);
        }
        Ok(Self {
            counts,
            strides,
            dim: dim as usize,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Total number of spins.
    pub fn spins(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        self.counts
            .iter()
            .zip(&self.strides)
            .map(|(&c, &stride)| (index / stride) % (c + 1))
            .collect()
    }

    pub fn encode(&self, ups: &[usize]) -> usize {
        ups.iter().zip(&self.strides).map(|(j, s)| j * s).sum()
    }

    /// `2 m_k` of block `k` with `j` up spins.
    pub fn two_m(&self, k: usize, j: usize) -> i64 {
        2 * j as i64 - self.counts[k] as i64
    }

    /// `sum_k 2 m_k`, the eigenvalue of `sum_i sigma^z_i`.
    pub fn total_two_m(&self, index: usize) -> i64 {
        self.decode(index)
            .iter()
            .enumerate()
            .map(|(k, &j)| self.two_m(k, j))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_map_is_bijective() {
        let b = SymmetricBasis::new(&[2, 0, 3, 1], usize::MAX).unwrap();
        assert_eq!(b.dim(), 3 * 4 * 2);
        assert_eq!(b.counts(), &[2, 3, 1]);
        for i in 0..b.dim() {
            assert_eq!(b.encode(&b.decode(i)), i);
        }
        assert_eq!(b.total_two_m(0), -6);
        assert_eq!(b.total_two_m(b.dim() - 1), 6);
    }

    #[test]
    fn dimension_cap() {
        assert!(matches!(
            SymmetricBasis::new(&[99, 99], 1000),
            Err(Error::TooLarge { size: 10_000, .. })
        ));
    }
}
