//! Landau critical endpoint of the first-order line.

use serde::{Deserialize, Serialize};

use super::FreeEnergy;
use crate::error::{Error, Result};
use crate::num::{powu, Real};

/// Critical endpoint where the first three `m`-derivatives of the ground-state
/// free energy vanish simultaneously.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint<T> {
    pub p: u32,
    pub tau_c: T,
    pub s_c: T,
    /// Magnetization of the transverse-field sites.
    pub m1c: T,
    pub mc: T,
}

/// Closed-form critical point for `p >= 3`.
pub fn critical_point<T: Real>(p: u32) -> Result<CriticalPoint<T>> {
    if p < 2 {
        return Err(Error::invalid("p", format!("{p} must be >= 3")));
    }
    if p == 2 {
        return Err(Error::Unsupported(
            "p = 2 has a second-order transition and no critical endpoint".into(),
        ));
    }
    let pf = T::from_u32(p).unwrap();
    let one = T::one();
    let pm2 = pf - T::lit(2.0);
    let pm1 = pf - one;
    let tau_c = one / (one + (T::lit(27.0) * pm1 / (T::lit(4.0) * pm2 * pm2 * pm2)).sqrt());
    let m1c = (pm2 / (T::lit(3.0) * pm1)).sqrt();
    let mc = tau_c + (one - tau_c) * m1c;
    let s_c = m1c / (pf * powu(mc, p - 1) * (one - m1c * m1c).sqrt());
    Ok(CriticalPoint { p, tau_c, s_c, m1c, mc })
}

/// First three `m`-derivatives of the ground-state free energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandauDerivatives<T> {
    pub d1: T,
    pub d2: T,
    pub d3: T,
}

impl<T: Real> LandauDerivatives<T> {
    pub fn max_abs(&self) -> T {
        self.d1.abs().max(self.d2.abs()).max(self.d3.abs())
    }
}

/// Base step of the finite-difference stencils for exponent `p`.
///
/// The third-derivative stencil divides by `h^3`, so steps much below `1e-3`
/// drown in rounding, while the truncation error grows with the size of the
/// higher derivatives of `m^p`. `0.03 / p` balances the two for `p <= 11`.
pub fn landau_step(p: u32) -> f64 {
    0.03 / f64::from(p.max(1))
}

/// Central finite differences of `f(m)` at `(s, tau)`, each refined by two
/// levels of Richardson extrapolation (error `O(h^6)`).
pub fn landau_derivatives<T: Real>(p: u32, s: T, tau: T, m: T, step: T) -> Result<LandauDerivatives<T>> {
    let fe = FreeEnergy::ground(p, s, tau)?;
    let f = |x: T| fe.value(x);
    let two = T::lit(2.0);
    let d1 = |h: T| (f(m + h) - f(m - h)) / (two * h);
    let d2 = |h: T| (f(m + h) - two * f(m) + f(m - h)) / (h * h);
    let d3 = |h: T| (f(m + two * h) - two * f(m + h) + two * f(m - h) - f(m - two * h)) / (two * h * h * h);
    let rich = |d: &dyn Fn(T) -> T| {
        let (a, b, c) = (d(step), d(step / two), d(step / T::lit(4.0)));
        let r1 = (T::lit(4.0) * b - a) / T::lit(3.0);
        let r2 = (T::lit(4.0) * c - b) / T::lit(3.0);
        (T::lit(16.0) * r2 - r1) / T::lit(15.0)
    };
    Ok(LandauDerivatives {
        d1: rich(&d1),
        d2: rich(&d2),
        d3: rich(&d3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn p3_values() {
        let c: CriticalPoint<f64> = critical_point(3).unwrap();
        assert_abs_diff_eq!(c.tau_c, 0.21394, epsilon = 1e-5);
        assert_abs_diff_eq!(c.m1c, 0.40825, epsilon = 1e-5);
        assert_abs_diff_eq!(c.mc, 0.53485, epsilon = 1e-5);
        assert_abs_diff_eq!(c.s_c, 0.52112, epsilon = 1e-5);
    }

    #[test]
    fn p5_tau_is_one_half() {
        let c: CriticalPoint<f64> = critical_point(5).unwrap();
        assert_abs_diff_eq!(c.tau_c, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn p2_rejected() {
        assert!(matches!(critical_point::<f64>(2), Err(Error::Unsupported(_))));
        assert!(critical_point::<f64>(1).is_err());
    }

    #[test]
    fn tau_c_increases_toward_one() {
        let mut prev = 0.0;
        for p in 3..=20 {
            let c: CriticalPoint<f64> = critical_point(p).unwrap();
            assert!(c.tau_c > prev && c.tau_c < 1.0);
            assert!(c.s_c > 0.0 && c.s_c < 1.0);
            prev = c.tau_c;
        }
        let big: CriticalPoint<f64> = critical_point(2000).unwrap();
        assert!(big.tau_c > 0.99);
    }

    #[test]
    fn landau_conditions_hold() {
        for p in [3, 4, 5, 7, 11] {
            let c: CriticalPoint<f64> = critical_point(p).unwrap();
            let d = landau_derivatives(p, c.s_c, c.tau_c, c.mc, landau_step(p)).unwrap();
            assert!(d.max_abs() < 1e-6, "p={p}: {d:?}");
        }
    }

    #[test]
    fn derivatives_nonzero_off_critical() {
        let d = landau_derivatives(3, 0.5, 0.3, 0.5, landau_step(3)).unwrap();
        assert!(d.max_abs() > 1e-2);
    }
}
