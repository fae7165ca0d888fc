use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SymmetricBasis;
use crate::error::{Error, Result};
use crate::model::{Block, BlockDecomposition, Driving, ModelSpec, SchedulePoint};
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonianOptions {
    /// Largest number of stored nonzeros.
    pub nnz_budget: usize,
}

impl Default for HamiltonianOptions {
    fn default() -> Self {
        Self {
            nnz_budget: 2_000_000,
        }
    }
}

/// Real symmetric matrix in compressed-row form, both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHamiltonian<T> {
    basis: SymmetricBasis,
    blocks: Vec<Block<T>>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<T>,
}

/// Rows below this count are multiplied serially.
const PARALLEL_ROWS: usize = 4096;

impl<T: Real> SparseHamiltonian<T> {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn basis(&self) -> &SymmetricBasis {
        &self.basis
    }

    pub fn blocks(&self) -> &[Block<T>] {
        &self.blocks
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.row(i).find(|&(c, _)| c == j).map_or(T::zero(), |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    /// `y = H x`.
    pub fn apply(&self, x: &[T], y: &mut [T]) {
        let row = |i: usize| self.row(i).fold(T::zero(), |acc, (c, v)| acc + v * x[c]);
        if self.dim() >= PARALLEL_ROWS {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = row(i));
        } else {
            y.iter_mut().enumerate().for_each(|(i, yi)| *yi = row(i));
        }
    }

    /// `x^T H y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        let mut hy = vec![T::zero(); self.dim()];
        self.apply(y, &mut hy);
        x.iter().zip(&hy).fold(T::zero(), |acc, (&a, &b)| acc + a * b)
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> T {
        (0..self.dim())
            .map(|i| self.row(i).fold(T::zero(), |acc, (_, v)| acc + v.abs()))
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim()).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<T> {
        let d = self.dim();
        let mut out = vec![T::zero(); d * d];
        for i in 0..d {
            for (j, v) in self.row(i) {
                out[i * d + j] = v;
            }
        }
        out
    }
}

/// `-N^(1-p) t^p` for every `t = sum_i sigma^z_i` in `-N..=N`, evaluated in
/// exact rational arithmetic and rounded once.
pub(crate) fn cost_table<T: Real>(n: usize, p: u32) -> Vec<T> {
    let denom = BigInt::from(n).pow(p - 1);
    (-(n as i64)..=n as i64)
        .map(|t| {
            let q = BigRational::new(-BigInt::from(t).pow(p), denom.clone());
            T::lit(q.to_f64().expect("finite ratio"))
        })
        .collect()
}

/// Assembles `s_coeff (H0 - sum_k h_k S^z_k) - sum_k gammas[k] (S^+_k + S^-_k)`
/// on the maximal-spin sectors of `blocks`.
pub(crate) fn assemble<T: Real>(
    p: u32,
    blocks: &[Block<T>],
    s_coeff: T,
    gammas: &[T],
    opts: &HamiltonianOptions,
) -> Result<SparseHamiltonian<T>> {
    let counts: Vec<usize> = blocks.iter().map(|b| b.count).collect();
    let basis = SymmetricBasis::new(&counts, opts.nnz_budget)?;
    let d = basis.dim();
    let nnz: u128 = d as u128
        + 2 * counts
            .iter()
            .map(|&c| d as u128 / (c as u128 + 1) * c as u128)
            .sum::<u128>();
    if nnz > opts.nnz_budget as u128 {
        return Err(Error::TooLarge {
            what: "nonzeros",
            size: nnz,
            limit: opts.nnz_budget as u128,
        });
    }
    let n = basis.spins();
    let table = cost_table::<T>(n, p);
    let strides = basis.strides().to_vec();

    let rows: Vec<Vec<(usize, T)>> = (0..d)
        .into_par_iter()
        .map(|i| {
            let ups = basis.decode(i);
            let mut total = 0i64;
            let mut field = T::zero();
            for (k, &j) in ups.iter().enumerate() {
                let tm = basis.two_m(k, j);
                total += tm;
                field = field + blocks[k].h * T::from_i64(tm).unwrap();
            }
            let diag = s_coeff * (table[(total + n as i64) as usize] - field);
            let mut entries = Vec::with_capacity(1 + 2 * ups.len());
            entries.push((i, diag));
            for (k, &j) in ups.iter().enumerate() {
                let g = gammas[k];
                if g == T::zero() {
                    continue;
                }
                let c = blocks[k].count;
                // <j+1| S^+ |j> = sqrt((c - j)(j + 1))
                if j < c {
                    let amp = T::from_usize_lossy((c - j) * (j + 1)).sqrt();
                    entries.push((i + strides[k], -g * amp));
                }
                if j > 0 {
                    let amp = T::from_usize_lossy((c - j + 1) * j).sqrt();
                    entries.push((i - strides[k], -g * amp));
                }
            }
            entries.sort_by_key(|e| e.0);
            entries
        })
        .collect();

    let mut row_ptr = Vec::with_capacity(d + 1);
    row_ptr.push(0);
    let mut cols = Vec::with_capacity(nnz as usize);
    let mut values = Vec::with_capacity(nnz as usize);
    for row in rows {
        for (c, v) in row {
            cols.push(c);
            values.push(v);
        }
        row_ptr.push(cols.len());
    }
    Ok(SparseHamiltonian {
        basis,
        blocks: blocks.to_vec(),
        row_ptr,
        cols,
        values,
    })
}

/// Hamiltonian of `model` at `point` in the maximal-spin sector of every
/// block.
///
/// `H = -sN (sum sigma^z / N)^p - s sum_i h_i sigma^z_i - sum_i Gamma_i sigma^x_i`
/// with `Gamma_i` set by the driving mode.
pub fn build_hamiltonian<T: Real>(
    model: &ModelSpec<T>,
    point: SchedulePoint<T>,
    opts: &HamiltonianOptions,
) -> Result<SparseHamiltonian<T>> {
    let decomposition = model.decompose(point)?;
    let gammas: Vec<T> = decomposition.blocks.iter().map(|b| b.gamma).collect();
    assemble(model.p, &decomposition.blocks, point.s, &gammas, opts)
}

/// `dH/ds` at `s` on the same basis as [`build_hamiltonian`].
pub fn hamiltonian_derivative<T: Real>(
    model: &ModelSpec<T>,
    s: T,
    opts: &HamiltonianOptions,
) -> Result<SparseHamiltonian<T>> {
    let point = model.point_at(s)?;
    let decomposition = model.decompose(point)?;
    let slopes = block_slopes(model, s, &decomposition)?;
    assemble(model.p, &decomposition.blocks, T::one(), &slopes, opts)
}

/// `d Gamma / ds` of every block.
fn block_slopes<T: Real>(model: &ModelSpec<T>, s: T, decomposition: &BlockDecomposition<T>) -> Result<Vec<T>> {
    match model.driving {
        Driving::Uniform => Ok(vec![-T::one(); decomposition.blocks.len()]),
        Driving::Discrete => Err(Error::Unsupported(
            "discrete driving has no derivative in s between breakpoints".into(),
        )),
        Driving::Continuous => {
            let schedule = model.schedule()?;
            if let Some(site) = schedule.breakpoint_index(s) {
                return Err(Error::AtBreakpoint { s: s.as_f64(), site });
            }
            let fields = model.disorder.site_fields(model.n)?;
            let mut slopes = vec![T::zero(); decomposition.blocks.len()];
            for (i, h) in (1..=model.n).zip(fields) {
                let gamma = schedule.gamma(i, s)?;
                let slope = schedule.gamma_derivative(i, s)?.value;
                if slope == T::zero() {
                    continue;
                }
                let k = decomposition
                    .blocks
                    .iter()
                    .position(|b| b.gamma == gamma && b.h == h)
                    .expect("site belongs to a block");
                debug_assert_eq!(decomposition.blocks[k].count, 1);
                slopes[k] = slope;
            }
            Ok(slopes)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FieldDisorder, PathSpec};

    fn spec(p: u32, n: usize, driving: Driving) -> ModelSpec<f64> {
        ModelSpec::new(p, n, driving).unwrap().with_path(PathSpec::new(1.0).unwrap())
    }

    #[test]
    fn cost_table_exact_values() {
        let t: Vec<f64> = cost_table(4, 3);
        // -4 (t/4)^3 for t = -4..4
        assert_eq!(t[0], 4.0);
        assert_eq!(t[2], 0.5);
        assert_eq!(t[4], 0.0);
        assert_eq!(t[6], -0.5);
        assert_eq!(t[8], -4.0);
    }

    #[test]
    fn classical_end_is_diagonal() {
        let m = spec(3, 4, Driving::Discrete);
        let h = build_hamiltonian(&m, SchedulePoint::new(1.0, 1.0).unwrap(), &Default::default()).unwrap();
        assert_eq!(h.dim(), 5);
        assert_eq!(h.nnz(), 5);
        assert_eq!(h.diagonal(), vec![4.0, 0.5, 0.0, -0.5, -4.0]);
    }

    #[test]
    fn transverse_ladder() {
        let m = spec(2, 2, Driving::Discrete);
        let h = build_hamiltonian(&m, SchedulePoint::new(0.0, 0.0).unwrap(), &Default::default()).unwrap();
        let s2 = 2.0_f64.sqrt();
        assert_eq!(h.to_dense(), vec![0.0, -s2, 0.0, -s2, 0.0, -s2, 0.0, -s2, 0.0]);
        assert!(h.is_symmetric());
    }

    #[test]
    fn nonzero_bound_and_symmetry_with_disorder() {
        let m = spec(3, 11, Driving::Continuous).with_disorder(FieldDisorder::binary(0.4, 3).unwrap());
        let h = build_hamiltonian(&m, m.point_at(0.37).unwrap(), &Default::default()).unwrap();
        let k = h.blocks().len();
        assert!(h.nnz() <= h.dim() * (1 + 2 * k));
        assert!(h.is_symmetric());
    }

    #[test]
    fn budget_enforced() {
        let m = spec(3, 100, Driving::Discrete).with_disorder(FieldDisorder::binary(0.5, 0).unwrap());
        let opts = HamiltonianOptions { nnz_budget: 10_000 };
        assert!(matches!(
            build_hamiltonian(&m, SchedulePoint::new(0.5, 0.5).unwrap(), &opts),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn derivative_errors() {
        let m = spec(3, 4, Driving::Discrete);
        assert!(matches!(hamiltonian_derivative(&m, 0.3, &Default::default()), Err(Error::Unsupported(_))));
        let c = spec(3, 4, Driving::Continuous);
        assert!(matches!(
            hamiltonian_derivative(&c, 0.5, &Default::default()),
            Err(Error::AtBreakpoint { .. })
        ));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for driving in [Driving::Uniform, Driving::Continuous] {
            let m = spec(3, 9, driving).with_disorder(FieldDisorder::binary(0.3, 1).unwrap());
            let s = 0.41;
            let d = 1e-6;
            let o = HamiltonianOptions::default();
            let dh = hamiltonian_derivative(&m, s, &o).unwrap();
            let hp = build_hamiltonian(&m, m.point_at(s + d).unwrap(), &o).unwrap().to_dense();
            let hm = build_hamiltonian(&m, m.point_at(s - d).unwrap(), &o).unwrap().to_dense();
            for ((a, b), c) in hp.iter().zip(&hm).zip(dh.to_dense()) {
                assert!(((a - b) / (2.0 * d) - c).abs() < 1e-7);
            }
        }
    }
}
