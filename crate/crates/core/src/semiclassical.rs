//! Large-N semiclassical analysis along `tau = s^r`: the classical spin
//! configuration and the quadratic (Holstein-Primakoff) fluctuation gaps
//! around it.
//!
//! Block 1 holds the `N(1 - s^r)` spins that still feel the transverse field
//! and is tilted by `theta0`; block 2 is polarized along `z`.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::model::PathSpec;
use crate::num::{powu, Real};
use crate::optimize::scan_then_golden;

/// Points of the coarse angle scan before golden-section refinement.
pub const THETA_SCAN_POINTS: usize = 10_000;

/// Classical energy per spin at tilt angle `theta` of block 1.
pub fn classical_energy<T: Real>(theta: T, s: T, r: T, p: u32) -> Result<T> {
    check_unit("theta", theta, T::zero(), T::lit(FRAC_PI_2))?;
    check_unit("s", s, T::zero(), T::one())?;
    PathSpec::new(r)?;
    if p < 2 {
        return Err(Error::invalid("p", format!("{p} must be >= 2")));
    }
    Ok(energy(theta, s, s.powf(r), p))
}

fn energy<T: Real>(theta: T, s: T, sr: T, p: u32) -> T {
    let m = sr + (T::one() - sr) * theta.cos();
    -s * powu(m, p) - (T::one() - sr) * theta.sin()
}

/// Angle in `[0, pi/2]` minimizing the classical energy. Returns `pi/2` at
/// `s = 0` and `0` when block 1 is empty.
pub fn minimize_theta<T: Real>(s: T, r: T, p: u32) -> Result<T> {
    classical_energy(T::zero(), s, r, p)?;
    Ok(theta_unchecked(s, s.powf(r), p))
}

fn theta_unchecked<T: Real>(s: T, sr: T, p: u32) -> T {
    let half_pi = T::lit(FRAC_PI_2);
    if s == T::zero() {
        return half_pi;
    }
    if sr >= T::one() {
        return T::zero();
    }
    scan_then_golden(|t| energy(t, s, sr, p), T::zero(), half_pi, THETA_SCAN_POINTS, T::lit(1e-12)).0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expansion {
    Valid,
    /// `epsilon > 1`: the quadratic Hamiltonian is not bounded below.
    EpsilonAboveOne,
    NonPositiveDelta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalPoint<T> {
    pub s: T,
    pub theta0: T,
    pub e: T,
    /// Classical magnetization `s^r + (1 - s^r) cos(theta0)`.
    pub m: T,
    pub gamma: T,
    pub delta: T,
    pub epsilon: T,
    /// Block-1 gap; `None` when the expansion is invalid.
    pub delta1: Option<T>,
    pub delta2: T,
    /// Minimum over the gaps of non-empty blocks.
    pub gap: Option<T>,
    pub expansion: Expansion,
}

fn evaluate<T: Real>(s: T, sr: T, p: u32) -> SemiclassicalPoint<T> {
    let one = T::one();
    let two = T::lit(2.0);
    let pf = T::from_u32(p).unwrap();
    let theta0 = theta_unchecked(s, sr, p);
    let (sin, cos) = theta0.sin_cos();
    let m = sr + (one - sr) * cos;
    let e = energy(theta0, s, sr, p);
    let delta2 = two * s * pf * powu(m, p - 1);
    let gamma = -T::lit(0.5) * s * pf * (pf - one) * powu(m, p - 2) * (one - sr) * sin * sin;
    let delta = delta2 * cos + two * sin + two * gamma;
    let epsilon = -two * gamma / delta;
    let expansion = if !(delta > T::zero()) {
        Expansion::NonPositiveDelta
    } else if epsilon > one {
        Expansion::EpsilonAboveOne
    } else {
        Expansion::Valid
    };
    let delta1 = (expansion == Expansion::Valid).then(|| delta * (one - epsilon * epsilon).sqrt());
    let mut gap: Option<T> = None;
    if sr < one {
        gap = delta1;
    }
    if sr > T::zero() {
        gap = Some(gap.map_or(delta2, |g| g.min(delta2)));
    }
    SemiclassicalPoint {
        s,
        theta0,
        e,
        m,
        gamma,
        delta,
        epsilon,
        delta1,
        delta2,
        gap,
        expansion,
    }
}

/// Classical state and fluctuation gaps at one point of the path.
pub fn fluctuation_gaps<T: Real>(s: T, r: T, p: u32) -> Result<SemiclassicalPoint<T>> {
    classical_energy(T::zero(), s, r, p)?;
    let pt = evaluate(s, s.powf(r), p);
    match pt.expansion {
        Expansion::Valid => Ok(pt),
        _ => Err(Error::ExpansionBreakdown {
            s: s.as_f64(),
            epsilon: pt.epsilon.as_f64(),
            delta: pt.delta.as_f64(),
        }),
    }
}

/// Evaluates every grid point; invalid expansions are flagged in
/// [`SemiclassicalPoint::expansion`] instead of failing the scan.
pub fn gap_scan<T: Real>(path: &PathSpec<T>, p: u32, s_grid: &[T]) -> Result<Vec<SemiclassicalPoint<T>>> {
    for &s in s_grid {
        classical_energy(T::zero(), s, path.r(), p)?;
    }
    Ok(s_grid
        .par_iter()
        .map(|&s| evaluate(s, s.powf(path.r()), p))
        .collect())
}
