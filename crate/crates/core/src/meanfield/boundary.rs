//! Tracing of the first-order transition line in the `(s, tau)` plane.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{minimize_m, FreeEnergy, MinimizeOptions};
use crate::error::{Error, Result};
use crate::model::PathSpec;
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryOptions {
    /// Cells per axis; rows sit at `tau = j / grid`, columns at `s = k / grid`.
    pub grid: usize,
    /// Smallest magnetization jump reported as first order.
    pub jump_threshold: f64,
    /// Magnetization points of the coarse per-cell scan.
    pub m_grid: usize,
    /// Bisection steps in `s` used to pin each jump.
    pub bisection_steps: usize,
}

impl Default for BoundaryOptions {
    fn default() -> Self {
        Self {
            grid: 400,
            jump_threshold: 0.05,
            m_grid: 2001,
            bisection_steps: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint<T> {
    pub s: T,
    pub tau: T,
    /// Jump of the global minimizer across the line.
    pub delta_m: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseBoundary<T> {
    pub p: u32,
    /// Ordered by increasing `tau`.
    pub points: Vec<BoundaryPoint<T>>,
    /// Last point of the line before the jump falls below threshold.
    pub endpoint: Option<BoundaryPoint<T>>,
    pub grid: usize,
}

impl<T: Real> PhaseBoundary<T> {
    /// Points where the path `tau = s^r` crosses the line.
    pub fn crossings(&self, path: &PathSpec<T>) -> Vec<BoundaryPoint<T>> {
        let inv = path.r().recip();
        let side = |pt: &BoundaryPoint<T>| pt.tau.powf(inv) > pt.s;
        let mut out = Vec::new();
        // the path leaves the origin to the left of the line
        let mut prev = false;
        for pt in &self.points {
            let now = side(pt);
            if now != prev {
                out.push(*pt);
            }
            prev = now;
        }
        out
    }
}

/// Scans the `(s, tau)` plane for jumps of the global minimizer of the
/// ground-state free energy.
///
/// The free energy is affine in `tau`, `f = A(m) + tau (B(m) - A(m))`, so each
/// column needs only the two profiles `A`, `B`. Jumps between neighbouring
/// columns of a row are then located by bisection in `s` with the full
/// minimizer, and kept when the jump exceeds the threshold.
pub fn trace_phase_boundary<T: Real>(p: u32, opts: &BoundaryOptions) -> Result<PhaseBoundary<T>> {
    if p < 2 {
        return Err(Error::invalid("p", format!("{p} must be >= 2")));
    }
    if opts.grid < 2 || opts.m_grid < 3 {
        return Err(Error::invalid("grid", "at least 2 cells per axis and 3 m points"));
    }
    let n = opts.grid;
    let cell = T::one() / T::from_usize_lossy(n);
    let mg = opts.m_grid;
    let ms: Vec<T> = (0..mg)
        .map(|j| T::from_usize_lossy(j) / T::from_usize_lossy(mg - 1))
        .collect();
    let threshold = T::lit(opts.jump_threshold);

    // argmin index per (column, row); column k holds s = (k + 1) / n
    let table: Vec<Vec<usize>> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let s = T::from_usize_lossy(k) * cell;
            let a = FreeEnergy::ground(p, s, T::zero()).expect("valid column");
            let b = FreeEnergy::ground(p, s, T::one()).expect("valid column");
            let fa: Vec<T> = ms.iter().map(|&m| a.value(m)).collect();
            let fb: Vec<T> = ms.iter().map(|&m| b.value(m)).collect();
            (0..=n)
                .map(|j| {
                    let tau = T::from_usize_lossy(j) * cell;
                    let mut best = (0, T::infinity());
                    for i in 0..mg {
                        let v = fa[i] + tau * (fb[i] - fa[i]);
                        if v < best.1 {
                            best = (i, v);
                        }
                    }
                    best.0
                })
                .collect()
        })
        .collect();

    let min_opts = MinimizeOptions::default();
    let m_at = |s: T, tau: T| minimize_m(&FreeEnergy::ground(p, s, tau).expect("valid"), &min_opts).m;

    let rows: Vec<Vec<BoundaryPoint<T>>> = (0..=n)
        .into_par_iter()
        .map(|j| {
            let tau = T::from_usize_lossy(j) * cell;
            let mut found = Vec::new();
            for k in 0..n - 1 {
                let (i0, i1) = (table[k][j], table[k + 1][j]);
                if i0.abs_diff(i1) as f64 / (mg - 1) as f64 <= opts.jump_threshold * 0.5 {
                    continue;
                }
                let mut lo = T::from_usize_lossy(k + 1) * cell;
                let mut hi = lo + cell;
                let (mut m_lo, mut m_hi) = (m_at(lo, tau), m_at(hi, tau));
                for _ in 0..opts.bisection_steps {
                    let mid = T::lit(0.5) * (lo + hi);
                    let mm = m_at(mid, tau);
                    if (mm - m_lo).abs() < (m_hi - mm).abs() {
                        lo = mid;
                        m_lo = mm;
                    } else {
                        hi = mid;
                        m_hi = mm;
                    }
                }
                let delta_m = (m_hi - m_lo).abs();
                if delta_m > threshold {
                    found.push(BoundaryPoint {
                        s: T::lit(0.5) * (lo + hi),
                        tau,
                        delta_m,
                    });
                }
            }
            found
        })
        .collect();

    let mut points = Vec::new();
    let mut last_row: Option<usize> = None;
    for (j, row) in rows.into_iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        if let Some(prev) = last_row {
            if j != prev + 1 {
                return Err(Error::GridTooCoarse(format!(
                    "boundary rows {prev} and {j} are not adjacent"
                )));
            }
        }
        last_row = Some(j);
        points.extend(row);
    }
    let endpoint = points.last().copied();
    Ok(PhaseBoundary {
        p,
        points,
        endpoint,
        grid: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meanfield::critical_point;

    fn coarse() -> BoundaryOptions {
        BoundaryOptions {
            grid: 100,
            ..BoundaryOptions::default()
        }
    }

    #[test]
    fn p2_has_no_line() {
        let b: PhaseBoundary<f64> = trace_phase_boundary(2, &coarse()).unwrap();
        assert!(b.points.is_empty());
        assert!(b.endpoint.is_none());
    }

    #[test]
    fn p3_line_spans_axis_to_endpoint() {
        let b: PhaseBoundary<f64> = trace_phase_boundary(3, &coarse()).unwrap();
        assert_eq!(b.points[0].tau, 0.0);
        let e = b.endpoint.unwrap();
        let c = critical_point::<f64>(3).unwrap();
        assert!((e.s - c.s_c).abs() <= 2.0 / 100.0, "{e:?}");
        assert!((e.tau - c.tau_c).abs() <= 2.0 / 100.0, "{e:?}");
        // s* decreases as tau grows
        assert!(b.points.windows(2).all(|w| w[1].s <= w[0].s + 1e-9));
    }

    #[test]
    fn crossings_by_path_exponent() {
        let b: PhaseBoundary<f64> = trace_phase_boundary(3, &coarse()).unwrap();
        assert!(b.crossings(&PathSpec::new(1.0).unwrap()).is_empty());
        assert_eq!(b.crossings(&PathSpec::new(3.0).unwrap()).len(), 1);
    }
}
