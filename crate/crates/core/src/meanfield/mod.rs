//! Mean-field (static approximation) free energies of the p-spin model under
//! inhomogeneous or uniform transverse driving, and their global minimization
//! over the magnetization `m in [0, 1]`.
//!
//! Every functional has the form
//!
//! ```text
//! f(m) = (p-1) s m^p - sum_c w_c * L(sqrt(s^2 (p m^(p-1) + h_c)^2 + gamma_c^2))
//! ```
//!
//! where the sum runs over classes of sites with weight `w_c`, longitudinal
//! field `h_c` and transverse field `gamma_c`, and `L(x) = x` at zero
//! temperature or `T log(2 cosh(x / T))` at temperature `T`. Its stationarity
//! condition factors as `f'(m) = s p (p-1) m^(p-2) * (m - rhs(m))`, so the
//! self-consistency `m = rhs(m)` is what the minimizer solves.

mod boundary;
mod critical;
mod curve;
mod disorder;

pub use boundary::{trace_phase_boundary, BoundaryOptions, BoundaryPoint, PhaseBoundary};
pub use critical::{critical_point, landau_derivatives, CriticalPoint, landau_step, LandauDerivatives};
pub use curve::{magnetization_curve, CurveDrive, CurvePoint, MagnetizationCurve};
pub use disorder::{FieldAverage, DEFAULT_QUADRATURE_ORDER};

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::model::{DisorderKind, SiteOrder};
use crate::num::{erf, log_2cosh, powu, Real};

/// A minimum of one of the free-energy functionals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldPoint<T> {
    pub m: T,
    /// Free energy per spin.
    pub f: T,
    /// Zero for the ground-state functionals.
    pub temperature: T,
    /// `|m - rhs(m)|`; zero on the flat landscape at `s = 0`.
    pub stationarity_residual: T,
}

fn check_p(p: u32) -> Result<()> {
    if p < 2 {
        return Err(Error::invalid("p", format!("{p} must be >= 2")));
    }
    Ok(())
}

fn check_args<T: Real>(m: T, s: T, tau: T, p: u32) -> Result<()> {
    check_p(p)?;
    check_unit("m", m, T::zero(), T::one())?;
    check_unit("s", s, T::zero(), T::one())?;
    check_unit("tau", tau, T::zero(), T::one())
}

/// Zero-temperature free energy per spin of the inhomogeneously driven model.
pub fn free_energy_t0<T: Real>(m: T, s: T, tau: T, p: u32) -> Result<T> {
    check_args(m, s, tau, p)?;
    let pf = T::from_u32(p).unwrap();
    let classical = (pf - T::one()) * s * powu(m, p);
    let x = s * pf * powu(m, p - 1);
    Ok((T::one() - tau) * (classical - (x * x + T::one()).sqrt()) + tau * (classical - x))
}

/// Finite-temperature free energy per spin; `log(2 cosh)` is evaluated in an
/// overflow-free form so large inverse temperatures are fine.
pub fn free_energy_finite_t<T: Real>(m: T, s: T, tau: T, p: u32, temperature: T) -> Result<T> {
    check_args(m, s, tau, p)?;
    if !(temperature > T::zero()) || !temperature.is_finite() {
        return Err(Error::invalid("T", format!("{temperature} must be > 0")));
    }
    let pf = T::from_u32(p).unwrap();
    let beta = temperature.recip();
    let classical = (pf - T::one()) * s * powu(m, p);
    let x = s * pf * powu(m, p - 1);
    let on = log_2cosh(beta * (x * x + T::one()).sqrt());
    let off = log_2cosh(beta * x);
    Ok((T::one() - tau) * (classical - temperature * on) + tau * (classical - temperature * off))
}

/// Zero-temperature free energy averaged over the random field.
pub fn free_energy_t0_disorder<T: Real>(
    m: T,
    s: T,
    tau: T,
    p: u32,
    average: &FieldAverage<T>,
) -> Result<T> {
    check_args(m, s, tau, p)?;
    Ok(FreeEnergy::disordered(p, s, tau, average)?.value(m))
}

/// Zero-temperature free energy of conventional uniform driving, transverse
/// coefficient `1 - s` on every site.
pub fn free_energy_t0_uniform<T: Real>(m: T, s: T, p: u32, average: &FieldAverage<T>) -> Result<T> {
    check_args(m, s, T::zero(), p)?;
    Ok(FreeEnergy::uniform(p, s, average)?.value(m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SiteClass<T> {
    Atom { weight: T, h: T, gamma: T },
    /// Field-free sites with a Gaussian longitudinal field, averaged in
    /// closed form because `|p m^(p-1) + h|` has a kink.
    GaussianFree { weight: T, sigma: T },
}

/// Which functional a [`FreeEnergy`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Functional {
    Ground,
    Thermal,
    Disordered,
    Uniform,
}

/// A free-energy landscape `m -> f(m)` at fixed schedule parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeEnergy<T> {
    p: u32,
    s: T,
    temperature: T,
    classes: Vec<SiteClass<T>>,
    functional: Functional,
}

impl<T: Real> FreeEnergy<T> {
    fn build(p: u32, s: T, tau: T, classes: Vec<SiteClass<T>>, functional: Functional) -> Result<Self> {
        check_p(p)?;
        check_unit("s", s, T::zero(), T::one())?;
        check_unit("tau", tau, T::zero(), T::one())?;
        Ok(Self {
            p,
            s,
            temperature: T::zero(),
            classes,
            functional,
        })
    }

    fn clean_classes(tau: T) -> Vec<SiteClass<T>> {
        vec![
            SiteClass::Atom { weight: T::one() - tau, h: T::zero(), gamma: T::one() },
            SiteClass::Atom { weight: tau, h: T::zero(), gamma: T::zero() },
        ]
    }

    /// Zero-temperature landscape without disorder.
    pub fn ground(p: u32, s: T, tau: T) -> Result<Self> {
        Self::build(p, s, tau, Self::clean_classes(tau), Functional::Ground)
    }

    pub fn thermal(p: u32, s: T, tau: T, temperature: T) -> Result<Self> {
        if !(temperature > T::zero()) || !temperature.is_finite() {
            return Err(Error::invalid("T", format!("{temperature} must be > 0")));
        }
        let mut fe = Self::build(p, s, tau, Self::clean_classes(tau), Functional::Thermal)?;
        fe.temperature = temperature;
        Ok(fe)
    }

    /// Zero-temperature landscape of the random-field model under
    /// inhomogeneous driving. A fraction `tau` of the sites is field-free;
    /// which sites those are follows the disorder's [`SiteOrder`].
    pub fn disordered(p: u32, s: T, tau: T, average: &FieldAverage<T>) -> Result<Self> {
        let disorder = average.disorder();
        let half = T::lit(0.5);
        let classes = match (disorder.kind, disorder.order) {
            (DisorderKind::None, _) => Self::clean_classes(tau),
            (DisorderKind::Binary { .. }, SiteOrder::Interleaved) => average
                .atoms()
                .iter()
                .flat_map(|&(h, w)| {
                    [
                        SiteClass::Atom { weight: (T::one() - tau) * w, h, gamma: T::one() },
                        SiteClass::Atom { weight: tau * w, h, gamma: T::zero() },
                    ]
                })
                .collect(),
            (DisorderKind::Binary { h0 }, SiteOrder::AlignedFirst) => {
                let plus_off = tau.min(half);
                let minus_off = (tau - half).max(T::zero());
                vec![
                    SiteClass::Atom { weight: half - plus_off, h: h0, gamma: T::one() },
                    SiteClass::Atom { weight: plus_off, h: h0, gamma: T::zero() },
                    SiteClass::Atom { weight: half - minus_off, h: -h0, gamma: T::one() },
                    SiteClass::Atom { weight: minus_off, h: -h0, gamma: T::zero() },
                ]
            }
            (DisorderKind::Gaussian { sigma }, SiteOrder::Interleaved) => {
                let mut classes: Vec<_> = average
                    .atoms()
                    .iter()
                    .map(|&(h, w)| SiteClass::Atom {
                        weight: (T::one() - tau) * w,
                        h,
                        gamma: T::one(),
                    })
                    .collect();
                classes.push(SiteClass::GaussianFree { weight: tau, sigma });
                classes
            }
            (DisorderKind::Gaussian { .. }, SiteOrder::AlignedFirst) => {
                return Err(Error::Unsupported(
                    "aligned-first turn-off order is only defined for binary fields".into(),
                ))
            }
        };
        Self::build(p, s, tau, classes, Functional::Disordered)
    }

    /// Conventional driving: transverse field `1 - s` on every site.
    pub fn uniform(p: u32, s: T, average: &FieldAverage<T>) -> Result<Self> {
        let gamma = T::one() - s;
        let classes = average
            .atoms()
            .iter()
            .map(|&(h, weight)| SiteClass::Atom { weight, h, gamma })
            .collect();
        Self::build(p, s, T::zero(), classes, Functional::Uniform)
    }

    pub fn functional(&self) -> Functional {
        self.functional
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn temperature(&self) -> T {
        self.temperature
    }

    fn pf(&self) -> T {
        T::from_u32(self.p).unwrap()
    }

    /// Effective longitudinal drive `p m^(p-1)` shared by all classes.
    fn drive(&self, m: T) -> T {
        self.pf() * powu(m, self.p - 1)
    }

    fn level_energy(&self, lambda: T) -> T {
        if self.temperature > T::zero() {
            self.temperature * log_2cosh(lambda / self.temperature)
        } else {
            lambda
        }
    }

    pub fn value(&self, m: T) -> T {
        let s = self.s;
        let mu = self.drive(m);
        let classical = (self.pf() - T::one()) * s * powu(m, self.p);
        let quantum = self.classes.iter().fold(T::zero(), |acc, class| {
            acc + match *class {
                SiteClass::Atom { weight, h, gamma } => {
                    let z = s * (mu + h);
                    weight * self.level_energy(z.hypot(gamma))
                }
                SiteClass::GaussianFree { weight, sigma } => {
                    weight * s * gaussian_abs_mean(mu, sigma)
                }
            }
        });
        classical - quantum
    }

    /// Right-hand side of the self-consistency `m = rhs(m)`.
    pub fn self_consistency(&self, m: T) -> T {
        let s = self.s;
        let mu = self.drive(m);
        self.classes.iter().fold(T::zero(), |acc, class| {
            acc + match *class {
                SiteClass::Atom { weight, h, gamma } => {
                    let z = s * (mu + h);
                    let lambda = z.hypot(gamma);
                    if lambda == T::zero() {
                        T::zero()
                    } else if self.temperature > T::zero() {
                        weight * z / lambda * (lambda / self.temperature).tanh()
                    } else {
                        weight * z / lambda
                    }
                }
                SiteClass::GaussianFree { weight, sigma } => {
                    weight * erf(mu / (sigma * T::SQRT_2()))
                }
            }
        })
    }

    /// `df/dm`.
    pub fn derivative(&self, m: T) -> T {
        let pf = self.pf();
        self.s * pf * (pf - T::one()) * powu(m, self.p - 2) * (m - self.self_consistency(m))
    }

    pub fn residual(&self, m: T) -> T {
        if self.s == T::zero() {
            T::zero()
        } else {
            (m - self.self_consistency(m)).abs()
        }
    }

    fn point(&self, m: T) -> MeanFieldPoint<T> {
        MeanFieldPoint {
            m,
            f: self.value(m),
            temperature: self.temperature,
            stationarity_residual: self.residual(m),
        }
    }
}

/// `E|mu + sigma Z|` for standard normal `Z`.
fn gaussian_abs_mean<T: Real>(mu: T, sigma: T) -> T {
    let two = T::lit(2.0);
    sigma * (two / T::PI()).sqrt() * (-(mu * mu) / (two * sigma * sigma)).exp()
        + mu * erf(mu / (sigma * T::SQRT_2()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    /// Points of the uniform scan over `[0, 1]`.
    pub grid_points: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { grid_points: 10_000 }
    }
}

/// Largest bisection count; the bracket hits machine resolution long before.
const MAX_BISECTIONS: usize = 200;

/// Root of `m - rhs(m)` in `[lo, hi]` given `g(lo) < 0 < g(hi)`.
fn bisect_stationary<T: Real>(fe: &FreeEnergy<T>, mut lo: T, mut hi: T) -> T {
    let g = |m: T| m - fe.self_consistency(m);
    let floor = T::lit(4.0) * T::epsilon();
    for _ in 0..MAX_BISECTIONS {
        let mid = T::lit(0.5) * (lo + hi);
        if hi - lo <= floor * mid.max(T::one()) {
            return mid;
        }
        let gm = g(mid);
        if gm == T::zero() {
            return mid;
        }
        if gm < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    T::lit(0.5) * (lo + hi)
}

/// All local minima of the landscape, refined, in increasing `m`.
pub fn local_minima<T: Real>(fe: &FreeEnergy<T>, opts: &MinimizeOptions) -> Vec<MeanFieldPoint<T>> {
    if fe.s == T::zero() {
        // every m is stationary; the paramagnetic end represents the plateau
        return vec![fe.point(T::zero())];
    }
    let n = opts.grid_points.max(3);
    let step = T::one() / T::from_usize_lossy(n - 1);
    let grid: Vec<T> = (0..n).map(|j| T::from_usize_lossy(j) * step).collect();
    let values: Vec<T> = grid.iter().map(|&m| fe.value(m)).collect();
    let g = |m: T| m - fe.self_consistency(m);

    let mut minima = Vec::new();
    for j in 0..n {
        let left_ok = j == 0 || values[j] < values[j - 1];
        let right_ok = j == n - 1 || values[j] <= values[j + 1];
        if !(left_ok && right_ok) {
            continue;
        }
        let lo = grid[j.saturating_sub(1)];
        let hi = grid[(j + 1).min(n - 1)];
        let (glo, ghi) = (g(lo), g(hi));
        let m = if glo < T::zero() && ghi > T::zero() {
            bisect_stationary(fe, lo, hi)
        } else if glo == T::zero() {
            lo
        } else if ghi == T::zero() {
            hi
        } else if j == 0 {
            T::zero()
        } else if j == n - 1 {
            T::one()
        } else {
            crate::optimize::golden_section(|m| fe.value(m), lo, hi, T::lit(1e-12)).0
        };
        minima.push(fe.point(m));
    }
    minima.sort_by(|a, b| a.m.partial_cmp(&b.m).unwrap());
    minima.dedup_by(|a, b| (a.m - b.m).abs() <= T::lit(1e-12));
    minima
}

/// Global minimizer of `fe` over `m in [0, 1]`: dense scan, refinement of
/// every local minimum, then selection with ties going to the smaller `m`.
pub fn minimize_m<T: Real>(fe: &FreeEnergy<T>, opts: &MinimizeOptions) -> MeanFieldPoint<T> {
    let minima = local_minima(fe, opts);
    let best = minima
        .iter()
        .map(|p| p.f)
        .fold(T::infinity(), |a, b| a.min(b));
    let tie = T::lit(1e-13) * (T::one() + best.abs());
    *minima
        .iter()
        .find(|p| p.f <= best + tie)
        .expect("at least one grid minimum")
}
