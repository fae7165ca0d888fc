use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SparseHamiltonian;
use crate::error::{Error, Result};
use crate::model::Block;
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    /// Residual target relative to the Gershgorin norm of `H`.
    pub tol: f64,
    /// Dimensions up to this are diagonalized densely.
    pub dense_threshold: usize,
    /// Krylov subspace size per restart cycle.
    pub max_krylov: usize,
    pub max_restarts: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            dense_threshold: 512,
            max_krylov: 80,
            max_restarts: 300,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult<T> {
    /// Ascending.
    pub eigenvalues: Vec<T>,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<T>>,
    /// `E_1 - E_0` when at least two levels were requested.
    pub gap: Option<T>,
    /// `<sum_i sigma^z_i> / N` in the ground state.
    pub ground_magnetization: Option<T>,
    /// `||H v - E v||` per pair.
    pub residuals: Vec<T>,
    pub dim: usize,
    pub blocks: Vec<Block<T>>,
    pub solver: Solver,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    y.iter_mut().zip(x).for_each(|(yi, &xi)| *yi = *yi + alpha * xi);
}

fn normalize<T: Real>(v: &mut [T]) -> T {
    let n = dot(v, v).sqrt();
    if n > T::zero() {
        v.iter_mut().for_each(|x| *x = *x / n);
    }
    n
}

/// Two passes of Gram-Schmidt against `basis`.
fn orthogonalize<T: Real>(v: &mut [T], basis: &[&[T]]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            axpy(-c, q, v);
        }
    }
}

/// `1 + 0.5 u_j` with `u_j` uniform in `[-1, 1)`: close to the symmetric
/// all-ones vector but with weight in every symmetry sector.
fn start_vector<T: Real>(dim: usize, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<T> = (0..dim)
        .map(|_| T::lit(1.0 + 0.5 * rng.gen_range(-1.0..1.0)))
        .collect();
    normalize(&mut v);
    v
}

fn residual<T: Real>(h: &SparseHamiltonian<T>, value: T, v: &[T]) -> T {
    let mut hv = vec![T::zero(); v.len()];
    h.apply(v, &mut hv);
    axpy(-value, v, &mut hv);
    dot(&hv, &hv).sqrt()
}

fn finish<T: Real>(
    h: &SparseHamiltonian<T>,
    mut pairs: Vec<(T, Vec<T>)>,
    solver: Solver,
) -> SpectrumResult<T> {
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let residuals = pairs.iter().map(|(e, v)| residual(h, *e, v)).collect();
    let basis = h.basis();
    let spins = T::from_usize_lossy(basis.spins());
    let ground_magnetization = pairs.first().map(|(_, v)| {
        v.iter().enumerate().fold(T::zero(), |acc, (i, &c)| {
            acc + c * c * T::from_i64(basis.total_two_m(i)).unwrap()
        }) / spins
    });
    let (eigenvalues, eigenvectors): (Vec<T>, Vec<Vec<T>>) = pairs.into_iter().unzip();
    let gap = (eigenvalues.len() >= 2).then(|| eigenvalues[1] - eigenvalues[0]);
    SpectrumResult {
        eigenvalues,
        eigenvectors,
        gap,
        ground_magnetization,
        residuals,
        dim: h.dim(),
        blocks: h.blocks().to_vec(),
        solver,
    }
}

fn dense_eigs<T: Real>(h: &SparseHamiltonian<T>, k: usize) -> Vec<(T, Vec<T>)> {
    let d = h.dim();
    let dense = DMatrix::from_row_slice(d, d, &h.to_dense().iter().map(|x| x.as_f64()).collect::<Vec<_>>());
    let eig = SymmetricEigen::new(dense);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    order
        .into_iter()
        .take(k)
        .map(|j| {
            let v = eig.eigenvectors.column(j).iter().map(|&x| T::lit(x)).collect();
            (T::lit(eig.eigenvalues[j]), v)
        })
        .collect()
}

/// The `k` lowest eigenpairs of `h`.
///
/// Small problems are solved densely. Otherwise a thick-restart Lanczos
/// iteration with full reorthogonalization is used: the projected matrix is
/// formed explicitly, so restarting from the lowest Ritz vectors keeps the
/// Rayleigh-Ritz step exact. Converged pairs are locked and the iteration
/// continues in their orthogonal complement; fresh directions injected at
/// each lock let it find exactly degenerate partners.
pub fn lowest_eigs<T: Real>(h: &SparseHamiltonian<T>, k: usize, opts: &EigenOptions) -> Result<SpectrumResult<T>> {
    let d = h.dim();
    if k == 0 || k >= d {
        return Err(Error::invalid("k", format!("{k} must be in 1..{d}")));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::invalid("tol", "must be > 0"));
    }
    if d <= opts.dense_threshold {
        return Ok(finish(h, dense_eigs(h, k), Solver::Dense));
    }

    let norm = h.norm_bound().max(T::min_positive_value());
    let target = T::lit(opts.tol) * norm;
    let m_max = opts.max_krylov.max(k + 20).min(d);
    let mut locked: Vec<(T, Vec<T>)> = Vec::new();
    let mut basis: Vec<Vec<T>> = vec![start_vector(d, 0)];
    // projected matrix in f64; entry (i, j) with i <= j is proj[j][i]
    let mut proj: Vec<Vec<f64>> = Vec::new();
    let mut seed = 1;
    let mut best = T::infinity();
    let mut w = vec![T::zero(); d];

    for _ in 0..opts.max_restarts {
        // expand until the subspace is full or invariant
        let mut next: usize = proj.len();
        while next < basis.len() {
            h.apply(&basis[next], &mut w);
            proj.push(basis[..=next].iter().map(|v| dot(v, &w).as_f64()).collect());
            next += 1;
            if basis.len() < m_max && next == basis.len() {
                let refs: Vec<&[T]> = locked
                    .iter()
                    .map(|(_, v)| v.as_slice())
                    .chain(basis.iter().map(|v| v.as_slice()))
                    .collect();
                orthogonalize(&mut w, &refs);
                if normalize(&mut w) > T::lit(1e-10) * norm {
                    basis.push(w.clone());
                }
            }
        }

        let m = basis.len();
        let t = DMatrix::from_fn(m, m, |i, j| if i <= j { proj[j][i] } else { proj[i][j] });
        let eig = SymmetricEigen::new(t);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

        let ritz_vector = |col: usize| {
            let mut y = vec![T::zero(); d];
            for (i, q) in basis.iter().enumerate() {
                axpy(T::lit(eig.eigenvectors[(i, col)]), q, &mut y);
            }
            normalize(&mut y);
            y
        };

        let want = k - locked.len();
        let keep = (want + 5).max(m_max / 2).min(m.saturating_sub(1)).max(1);
        let mut kept: Vec<(T, Vec<T>)> = Vec::new();
        let mut restart_residual: Option<Vec<T>> = None;
        let mut newly_locked = false;
        let mut locking = true;
        for &col in order.iter().take(keep) {
            let value = T::lit(eig.eigenvalues[col]);
            let y = ritz_vector(col);
            if locking && locked.len() < k {
                let mut r = vec![T::zero(); d];
                h.apply(&y, &mut r);
                axpy(-value, &y, &mut r);
                let rn = dot(&r, &r).sqrt();
                if rn <= target {
                    locked.push((value, y));
                    newly_locked = true;
                    continue;
                }
                best = best.min(rn);
                locking = false;
                restart_residual = Some(r);
            }
            kept.push((value, y));
        }
        if locked.len() >= k {
            locked.truncate(k);
            return Ok(finish(h, locked, Solver::Lanczos));
        }

        // thick restart: Ritz vectors span the new subspace, with the
        // projected matrix diagonal in them
        basis = kept.iter().map(|(_, y)| y.clone()).collect();
        proj = (0..basis.len())
            .map(|i| {
                let mut row = vec![0.0; i + 1];
                row[i] = kept[i].0.as_f64();
                row
            })
            .collect();
        let mut extend = restart_residual.unwrap_or_else(|| start_vector(d, seed));
        if newly_locked {
            normalize(&mut extend);
            axpy(T::lit(0.5), &start_vector(d, seed), &mut extend);
        }
        seed += 1;
        let refs: Vec<&[T]> = locked
            .iter()
            .map(|(_, v)| v.as_slice())
            .chain(basis.iter().map(|v| v.as_slice()))
            .collect();
        orthogonalize(&mut extend, &refs);
        if normalize(&mut extend) > T::lit(1e-12) {
            basis.push(extend);
        } else if basis.is_empty() {
            basis.push(start_vector(d, seed));
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_restarts,
        residual: best.as_f64(),
    })
}
