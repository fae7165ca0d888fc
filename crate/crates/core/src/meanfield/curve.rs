//! Magnetization along an annealing path.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{minimize_m, FieldAverage, FreeEnergy, MeanFieldPoint, MinimizeOptions};
use crate::error::Result;
use crate::model::PathSpec;
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "drive", rename_all = "lowercase")]
pub enum CurveDrive<T> {
    /// Inhomogeneous driving along `tau = s^r`.
    Path(PathSpec<T>),
    /// Transverse coefficient `1 - s` on every site.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint<T> {
    pub s: T,
    /// Zero for uniform driving.
    pub tau: T,
    pub point: MeanFieldPoint<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnetizationCurve<T> {
    pub points: Vec<CurvePoint<T>>,
    /// Largest `|m(s_{j+1}) - m(s_j)|` over the grid.
    pub max_jump: T,
    /// Left grid point of the largest step.
    pub jump_at: Option<T>,
}

pub fn magnetization_curve<T: Real>(
    p: u32,
    drive: &CurveDrive<T>,
    average: &FieldAverage<T>,
    s_grid: &[T],
    opts: &MinimizeOptions,
) -> Result<MagnetizationCurve<T>> {
    let points = s_grid
        .par_iter()
        .map(|&s| {
            let (tau, fe) = match drive {
                CurveDrive::Path(path) => {
                    let pt = path.eval(s)?;
                    (pt.tau, FreeEnergy::disordered(p, s, pt.tau, average)?)
                }
                CurveDrive::Uniform => (T::zero(), FreeEnergy::uniform(p, s, average)?),
            };
            Ok(CurvePoint { s, tau, point: minimize_m(&fe, opts) })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut max_jump = T::zero();
    let mut jump_at = None;
    for w in points.windows(2) {
        let d = (w[1].point.m - w[0].point.m).abs();
        if d > max_jump {
            max_jump = d;
            jump_at = Some(w[0].s);
        }
    }
    Ok(MagnetizationCurve { points, max_jump, jump_at })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FieldDisorder, SiteOrder};

    fn grid(n: usize) -> Vec<f64> {
        (0..=n).map(|k| k as f64 / n as f64).collect()
    }

    #[test]
    fn clean_r1_is_smooth_and_uniform_jumps() {
        let avg = FieldAverage::none();
        let opts = MinimizeOptions { grid_points: 2000 };
        let r1 = magnetization_curve(3, &CurveDrive::Path(PathSpec::new(1.0).unwrap()), &avg, &grid(200), &opts)
            .unwrap();
        assert!(r1.max_jump < 0.05, "{}", r1.max_jump);
        let uni = magnetization_curve(3, &CurveDrive::Uniform, &avg, &grid(200), &opts).unwrap();
        assert!(uni.max_jump > 0.5);
        let at = uni.jump_at.unwrap();
        assert!((0.42..0.44).contains(&at), "{at}");
    }

    #[test]
    fn interleaved_binary_keeps_a_jump_at_r1() {
        // independent field and turn-off order: the r = 1 jump survives
        let avg = FieldAverage::new(FieldDisorder::binary(0.5, 0).unwrap(), 0).unwrap();
        let opts = MinimizeOptions { grid_points: 2000 };
        let c = magnetization_curve(3, &CurveDrive::Path(PathSpec::new(1.0).unwrap()), &avg, &grid(400), &opts)
            .unwrap();
        assert!(c.max_jump > 0.5);
        let aligned = FieldAverage::new(
            FieldDisorder::binary(0.5, 0).unwrap().with_order(SiteOrder::AlignedFirst),
            0,
        )
        .unwrap();
        let c = magnetization_curve(3, &CurveDrive::Path(PathSpec::new(1.0).unwrap()), &aligned, &grid(400), &opts)
            .unwrap();
        assert!(c.max_jump < 0.02, "{}", c.max_jump);
    }
}
