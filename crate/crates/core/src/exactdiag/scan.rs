use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_hamiltonian, hamiltonian_derivative, lowest_eigs, EigenOptions, HamiltonianOptions, SpectrumResult};
use crate::error::{Error, Result};
use crate::model::{Driving, ModelSpec};
use crate::num::Real;
use crate::optimize::golden_section;

/// Spectrum at one value of `s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint<T> {
    pub s: T,
    pub tau: T,
    pub spectrum: SpectrumResult<T>,
}

/// Values of `s` at which discrete driving has an integer number
/// `N(1 - s^r) = i` of transverse sites, for `i = N, N-1, ..., 0`.
pub fn discrete_grid<T: Real>(model: &ModelSpec<T>) -> Result<Vec<T>> {
    Ok(model.schedule()?.breakpoints())
}

fn check_discrete_point<T: Real>(model: &ModelSpec<T>, s: T) -> Result<()> {
    let tau = model.point_at(s)?.tau;
    let x = T::from_usize_lossy(model.n) * (T::one() - tau);
    let tol = T::lit(1e-9) * T::from_usize_lossy(model.n).max(T::one());
    if (x - x.round()).abs() > tol {
        return Err(Error::invalid(
            "s",
            format!("{s}: N(1 - s^r) = {x} is not an integer under discrete driving"),
        ));
    }
    Ok(())
}

/// Lowest `k` levels along the model's path (or the uniform schedule).
pub fn gap_scan_ed<T: Real>(
    model: &ModelSpec<T>,
    s_grid: &[T],
    k: usize,
    hopts: &HamiltonianOptions,
    eopts: &EigenOptions,
) -> Result<Vec<ScanPoint<T>>> {
    model.validate()?;
    if model.driving == Driving::Discrete {
        for &s in s_grid {
            check_discrete_point(model, s)?;
        }
    }
    s_grid
        .par_iter()
        .map(|&s| {
            let point = model.point_at(s)?;
            let h = build_hamiltonian(model, point, hopts)?;
            Ok(ScanPoint {
                s,
                tau: point.tau,
                spectrum: lowest_eigs(&h, k, eopts)?,
            })
        })
        .collect()
}

fn gap_at<T: Real>(model: &ModelSpec<T>, s: T, hopts: &HamiltonianOptions, eopts: &EigenOptions) -> Result<T> {
    let h = build_hamiltonian(model, model.point_at(s)?, hopts)?;
    Ok(lowest_eigs(&h, 2, eopts)?.gap.expect("two levels"))
}

/// Location and value of the smallest gap on `[lo, hi]`: a scan of
/// `coarse_points` values followed by golden-section refinement.
pub fn minimize_gap<T: Real>(
    model: &ModelSpec<T>,
    lo: T,
    hi: T,
    coarse_points: usize,
    hopts: &HamiltonianOptions,
    eopts: &EigenOptions,
) -> Result<(T, T)> {
    if model.driving == Driving::Discrete {
        return Err(Error::Unsupported(
            "discrete driving is only defined on its breakpoints; scan those instead".into(),
        ));
    }
    let n = coarse_points.max(3);
    let step = (hi - lo) / T::from_usize_lossy(n - 1);
    let grid: Vec<T> = (0..n).map(|j| lo + T::from_usize_lossy(j) * step).collect();
    let gaps = gap_scan_ed(model, &grid, 2, hopts, eopts)?;
    let j = (0..n)
        .min_by(|&a, &b| {
            let ga = gaps[a].spectrum.gap.unwrap();
            let gb = gaps[b].spectrum.gap.unwrap();
            ga.partial_cmp(&gb).unwrap()
        })
        .unwrap();
    let a = grid[j.saturating_sub(1)];
    let b = grid[(j + 1).min(n - 1)];
    let mut failure = None;
    let (s, g) = golden_section(
        |s| match gap_at(model, s, hopts, eopts) {
            Ok(g) => g,
            Err(e) => {
                failure.get_or_insert(e);
                T::infinity()
            }
        },
        a,
        b,
        T::lit(1e-6),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let coarse = gaps[j].spectrum.gap.unwrap();
    Ok(if g <= coarse { (s, g) } else { (grid[j], coarse) })
}

/// Terms of the adiabatic condition `t0 >> |<1| dH/ds |0>| / gap^2` for a
/// linear schedule `s = t / t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticEstimate<T> {
    pub s: T,
    /// `|<1| dH/ds |0>|` with `dH/ds` assembled analytically.
    pub numerator: T,
    pub gap: T,
    /// `numerator / gap^2`.
    pub t0_scale: T,
    /// The same matrix element from `(H(s + ds) - H(s - ds)) / 2 ds`.
    pub fd_numerator: T,
    pub delta_s: T,
}

pub fn adiabatic_numerator<T: Real>(
    model: &ModelSpec<T>,
    s: T,
    delta_s: T,
    hopts: &HamiltonianOptions,
    eopts: &EigenOptions,
) -> Result<AdiabaticEstimate<T>> {
    model.validate()?;
    let dh = hamiltonian_derivative(model, s, hopts)?;
    if !(delta_s > T::zero()) || s - delta_s < T::zero() || s + delta_s > T::one() {
        return Err(Error::invalid("delta_s", format!("{delta_s} must keep s +- ds inside [0, 1]")));
    }
    if model.driving == Driving::Continuous {
        let schedule = model.schedule()?;
        let (a, b) = (schedule.field_sum(s - delta_s), schedule.field_sum(s + delta_s));
        if a.floor() != b.floor() && b.ceil() != a.ceil() || a.floor() - b.floor() > T::one() {
            return Err(Error::invalid("delta_s", "the difference stencil straddles a breakpoint"));
        }
    }
    let h = build_hamiltonian(model, model.point_at(s)?, hopts)?;
    let spectrum = lowest_eigs(&h, 2, eopts)?;
    let (v0, v1) = (&spectrum.eigenvectors[0], &spectrum.eigenvectors[1]);
    let gap = spectrum.gap.expect("two levels");
    let numerator = dh.bilinear(v1, v0).abs();

    let hp = build_hamiltonian(model, model.point_at(s + delta_s)?, hopts)?;
    let hm = build_hamiltonian(model, model.point_at(s - delta_s)?, hopts)?;
    if hp.basis() != h.basis() || hm.basis() != h.basis() {
        return Err(Error::invalid("delta_s", "block structure changes within the stencil"));
    }
    let fd_numerator = ((hp.bilinear(v1, v0) - hm.bilinear(v1, v0)) / (T::lit(2.0) * delta_s)).abs();
    Ok(AdiabaticEstimate {
        s,
        numerator,
        gap,
        t0_scale: numerator / (gap * gap),
        fd_numerator,
        delta_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PathSpec;

    fn model(driving: Driving, n: usize) -> ModelSpec<f64> {
        ModelSpec::new(3, n, driving).unwrap().with_path(PathSpec::new(1.0).unwrap())
    }

    #[test]
    fn discrete_grid_has_n_plus_one_points() {
        let m = model(Driving::Discrete, 10);
        let grid = discrete_grid(&m).unwrap();
        assert_eq!(grid.len(), 11);
        let pts = gap_scan_ed(&m, &grid, 2, &Default::default(), &Default::default()).unwrap();
        assert_eq!(pts.len(), 11);
    }

    #[test]
    fn discrete_rejects_off_grid() {
        let m = model(Driving::Discrete, 10);
        assert!(gap_scan_ed(&m, &[0.55], 2, &Default::default(), &Default::default()).is_err());
    }

    #[test]
    fn adiabatic_analytic_matches_difference() {
        for driving in [Driving::Uniform, Driving::Continuous] {
            let m = model(driving, 20);
            let est = adiabatic_numerator(&m, 0.4321, 1e-5, &Default::default(), &Default::default()).unwrap();
            assert!(est.numerator > 0.0);
            assert!((est.numerator - est.fd_numerator).abs() < 1e-6 * est.numerator.max(1.0));
            assert!((est.t0_scale - est.numerator / est.gap.powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn adiabatic_rejects_discrete_and_breakpoints() {
        let m = model(Driving::Discrete, 20);
        assert!(adiabatic_numerator(&m, 0.43, 1e-5, &Default::default(), &Default::default()).is_err());
        let c = model(Driving::Continuous, 20);
        assert!(matches!(
            adiabatic_numerator(&c, 0.5, 1e-5, &Default::default(), &Default::default()),
            Err(Error::AtBreakpoint { .. })
        ));
    }
}
