use nalgebra::DMatrix;

use super::{Solver, SpectrumResult};
use crate::error::{Error, Result};
use crate::model::{ModelSpec, SchedulePoint};
use crate::num::Real;

pub const ORACLE_MAX_SPINS: usize = 12;

/// Lowest `k` levels of the model in the full `2^N` Hilbert space, by dense
/// diagonalization of the site-resolved Hamiltonian. Eigenvalues only.
pub fn brute_force_oracle<T: Real>(model: &ModelSpec<T>, point: SchedulePoint<T>, k: usize) -> Result<SpectrumResult<T>> {
    let n = model.n;
    if n > ORACLE_MAX_SPINS {
        return Err(Error::TooLarge {
            what: "oracle spins",
            size: n as u128,
            limit: ORACLE_MAX_SPINS as u128,
        });
    }
    let gammas: Vec<f64> = model.site_gammas(point)?.iter().map(|g| g.as_f64()).collect();
    let fields: Vec<f64> = model.disorder.site_fields(n)?.iter().map(|h| h.as_f64()).collect();
    let s = point.s.as_f64();
    let nf = n as f64;
    let d = 1usize << n;
    if k == 0 || k > d {
        return Err(Error::invalid("k", format!("{k} must be in 1..={d}")));
    }
    let mut h = DMatrix::<f64>::zeros(d, d);
    for state in 0..d {
        let spin = |i: usize| if state >> i & 1 == 1 { 1.0 } else { -1.0 };
        let total: f64 = (0..n).map(spin).sum();
        let field: f64 = (0..n).map(|i| fields[i] * spin(i)).sum();
        h[(state, state)] = -s * nf * (total / nf).powi(model.p as i32) - s * field;
        for (i, &g) in gammas.iter().enumerate() {
            h[(state ^ (1 << i), state)] -= g;
        }
    }
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let eigenvalues: Vec<T> = values.into_iter().take(k).map(T::lit).collect();
    let gap = (k >= 2).then(|| eigenvalues[1] - eigenvalues[0]);
    Ok(SpectrumResult {
        residuals: Vec::new(),
        eigenvectors: Vec::new(),
        gap,
        ground_magnetization: None,
        dim: d,
        blocks: Vec::new(),
        solver: Solver::Dense,
        eigenvalues,
    })
}
