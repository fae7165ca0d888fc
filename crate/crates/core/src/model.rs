//! Problem definition: the p-spin cost function, how the transverse field is
//! driven, the optional random longitudinal field, and the decomposition of
//! the spins into permutation-symmetric blocks.
//!
//! Sites are numbered `1..=N`. Under inhomogeneous driving the transverse
//! field is removed starting from site `N`, so at any point of the anneal the
//! sites still carrying a field form the prefix `1..=k`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, Error, Result};
use crate::num::Real;

/// How the transverse field is switched off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Driving {
    /// Conventional annealing: every site carries a field of strength `1 - s`.
    Uniform,
    /// Sites lose their unit field abruptly, `round(N(1 - tau))` remain on.
    Discrete,
    /// Each site's field is ramped down linearly in `s^r` over its own window.
    Continuous,
}

/// Order in which binary random fields are laid out along the turn-off order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SiteOrder {
    /// Alternating `+h0, -h0, ...` along the site index, so every prefix and
    /// suffix is balanced up to parity.
    #[default]
    Interleaved,
    /// Sites whose field is aligned with the final ferromagnetic state
    /// (`+h0`) are switched off first, i.e. occupy the highest indices.
    AlignedFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DisorderKind<T> {
    #[default]
    None,
    /// `h_i = +h0` or `-h0` with equal weight.
    Binary { h0: T },
    /// `h_i ~ Normal(0, sigma^2)`. Mean-field only.
    Gaussian { sigma: T },
}

/// Random longitudinal field of the random-field p-spin model.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldDisorder<T> {
    pub kind: DisorderKind<T>,
    /// Seeds the parity choices of the finite-N site assignment.
    pub seed: u64,
    pub order: SiteOrder,
}

impl<T: Real> FieldDisorder<T> {
    pub fn none() -> Self {
        Self {
            kind: DisorderKind::None,
            seed: 0,
            order: SiteOrder::Interleaved,
        }
    }

    pub fn binary(h0: T, seed: u64) -> Result<Self> {
        if !h0.is_finite() || h0 < T::zero() {
            return Err(Error::invalid("h0", format!("{h0} must be finite and >= 0")));
        }
        Ok(Self {
            kind: DisorderKind::Binary { h0 },
            seed,
            order: SiteOrder::Interleaved,
        })
    }

    pub fn gaussian(sigma: T, seed: u64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= T::zero() {
            return Err(Error::invalid("sigma", format!("{sigma} must be finite and > 0")));
        }
        Ok(Self {
            kind: DisorderKind::Gaussian { sigma },
            seed,
            order: SiteOrder::Interleaved,
        })
    }

    pub fn with_order(mut self, order: SiteOrder) -> Self {
        self.order = order;
        self
    }

    pub fn is_none(&self) -> bool {
        matches!(self.kind, DisorderKind::None)
    }

    /// Longitudinal field on each site `1..=n` (returned zero-based).
    ///
    /// Binary fields are balanced: `n/2` sites of each sign, the odd site's
    /// sign drawn from the seed.
    pub fn site_fields(&self, n: usize) -> Result<Vec<T>> {
        match self.kind {
            DisorderKind::None => Ok(vec![T::zero(); n]),
            DisorderKind::Gaussian { .. } => Err(Error::Unsupported(
                "gaussian disorder has no finite block structure; use the mean-field functionals"
                    .into(),
            )),
            DisorderKind::Binary { h0 } => {
                let coin: bool = ChaCha8Rng::seed_from_u64(self.seed).gen();
                let fields = match self.order {
                    SiteOrder::Interleaved => (0..n)
                        .map(|k| if (k % 2 == 0) == coin { h0 } else { -h0 })
                        .collect(),
                    SiteOrder::AlignedFirst => {
                        let plus = n / 2 + usize::from(n % 2 == 1 && coin);
                        (0..n)
                            .map(|k| if k >= n - plus { h0 } else { -h0 })
                            .collect()
                    }
                };
                Ok(fields)
            }
        }
    }
}

/// The path family `tau = s^r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSpec<T> {
    r: T,
}

impl<T: Real> PathSpec<T> {
    pub fn new(r: T) -> Result<Self> {
        if !r.is_finite() || r <= T::zero() {
            return Err(Error::invalid("r", format!("{r} must be finite and > 0")));
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn eval(&self, s: T) -> Result<SchedulePoint<T>> {
        check_unit("s", s, T::zero(), T::one())?;
        Ok(SchedulePoint { s, tau: s.powf(self.r) })
    }
}

/// Annealing coordinates `(s, tau)` in the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchedulePoint<T> {
    pub s: T,
    pub tau: T,
}

impl<T: Real> SchedulePoint<T> {
    pub fn new(s: T, tau: T) -> Result<Self> {
        check_unit("s", s, T::zero(), T::one())?;
        check_unit("tau", tau, T::zero(), T::one())?;
        Ok(Self { s, tau })
    }
}

/// Breakpoints `s_i = (1 - i/N)^(1/r)` of the continuous drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSchedule<T> {
    n: usize,
    r: T,
}

/// One-sided flag attached to a transverse-field slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slope<T> {
    pub value: T,
    /// `true` when `s` is a breakpoint of this site; `value` is then the
    /// derivative for increasing `s` (the annealing direction).
    pub one_sided: bool,
}

impl<T: Real> DriveSchedule<T> {
    pub fn new(n: usize, path: PathSpec<T>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("N", "must be >= 1"));
        }
        Ok(Self { n, r: path.r() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> T {
        self.r
    }

    /// `s_i` for `i = 0..=N`.
    pub fn breakpoint(&self, i: usize) -> T {
        assert!(i <= self.n, "breakpoint index {i} > N = {}", self.n);
        let frac = T::one() - T::from_usize_lossy(i) / T::from_usize_lossy(self.n);
        frac.max(T::zero()).powf(T::one() / self.r)
    }

    /// All breakpoints in increasing `s` (`s_N = 0, ..., s_0 = 1`).
    pub fn breakpoints(&self) -> Vec<T> {
        (0..=self.n).rev().map(|i| self.breakpoint(i)).collect()
    }

    /// Total transverse field `N(1 - s^r)`, snapped to the nearest integer
    /// when it is within rounding of one so that breakpoints are exact.
    ///
    /// Evaluating `x = N(1 - tau)` at a breakpoint carries a rounding error of
    /// about `eps x` from the arithmetic plus `(r + 2) eps N tau` from the
    /// round trip `tau -> tau^(1/r) -> tau`; the window covers a few times
    /// that and nothing more.
    pub fn field_sum(&self, s: T) -> T {
        let tau = s.powf(self.r);
        let n = T::from_usize_lossy(self.n);
        let x = n * (T::one() - tau);
        let nearest = x.round();
        let tol = T::lit(4.0) * T::epsilon() * (x + (self.r + T::one()) * n * tau);
        if (x - nearest).abs() <= tol {
            nearest
        } else {
            x
        }
    }

    /// `Some(i)` when `s` coincides with breakpoint `s_i`.
    pub fn breakpoint_index(&self, s: T) -> Option<usize> {
        let x = self.field_sum(s);
        (x == x.round()).then(|| x.to_usize().expect("field sum within [0, N]"))
    }

    fn check_site(&self, i: usize, s: T) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::invalid("site", format!("{i} outside 1..={}", self.n)));
        }
        check_unit("s", s, T::zero(), T::one())
    }

    /// Transverse-field strength `Gamma_i(s)` of site `i`.
    ///
    /// Equals 1 before the site's window `[s_i, s_{i-1}]`, `N(1 - s^r) + 1 - i`
    /// inside it and 0 after it, which is `clamp(N(1 - s^r) + 1 - i, 0, 1)`.
    pub fn gamma(&self, i: usize, s: T) -> Result<T> {
        self.check_site(i, s)?;
        let x = self.field_sum(s);
        Ok((x + T::one() - T::from_usize_lossy(i)).max(T::zero()).min(T::one()))
    }

    /// `d Gamma_i / ds`: `-N r s^(r-1)` inside the window, zero outside.
    pub fn gamma_derivative(&self, i: usize, s: T) -> Result<Slope<T>> {
        self.check_site(i, s)?;
        let x = self.field_sum(s);
        let lo = T::from_usize_lossy(i - 1);
        let hi = T::from_usize_lossy(i);
        let inside = -T::from_usize_lossy(self.n) * self.r * s.powf(self.r - T::one());
        let slope = if x > lo && x < hi {
            Slope { value: inside, one_sided: false }
        } else if x == hi {
            // entering the window as s grows
            Slope { value: inside, one_sided: true }
        } else if x == lo {
            Slope { value: T::zero(), one_sided: true }
        } else {
            Slope { value: T::zero(), one_sided: false }
        };
        Ok(slope)
    }
}

/// A group of `count` equivalent spins sharing transverse field `gamma` and
/// longitudinal field `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block<T> {
    pub count: usize,
    pub gamma: T,
    pub h: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDecomposition<T> {
    pub blocks: Vec<Block<T>>,
    pub total: usize,
}

impl<T: Real> BlockDecomposition<T> {
    /// Groups per-site `(gamma, h)` pairs, ordered by decreasing `gamma`
    /// then decreasing `h`.
    pub fn from_sites(sites: impl IntoIterator<Item = (T, T)>) -> Self {
        let mut blocks: Vec<Block<T>> = Vec::new();
        let mut total = 0;
        for (gamma, h) in sites {
            total += 1;
            match blocks.iter_mut().find(|b| b.gamma == gamma && b.h == h) {
                Some(b) => b.count += 1,
                None => blocks.push(Block { count: 1, gamma, h }),
            }
        }
        blocks.sort_by(|a, b| {
            b.gamma
                .partial_cmp(&a.gamma)
                .unwrap()
                .then(b.h.partial_cmp(&a.h).unwrap())
        });
        Self { blocks, total }
    }

    /// `sum_k count_k * gamma_k`.
    pub fn field_sum(&self) -> T {
        self.blocks
            .iter()
            .fold(T::zero(), |acc, b| acc + T::from_usize_lossy(b.count) * b.gamma)
    }
}

/// Full problem definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec<T> {
    pub p: u32,
    pub n: usize,
    pub disorder: FieldDisorder<T>,
    pub driving: Driving,
    /// Required for continuous driving; used by path scans otherwise.
    pub path: Option<PathSpec<T>>,
}

impl<T: Real> ModelSpec<T> {
    pub fn new(p: u32, n: usize, driving: Driving) -> Result<Self> {
        if p < 2 {
            return Err(Error::invalid("p", format!("{p} must be >= 2")));
        }
        if n == 0 {
            return Err(Error::invalid("N", "must be >= 1"));
        }
        Ok(Self {
            p,
            n,
            disorder: FieldDisorder::none(),
            driving,
            path: None,
        })
    }

    pub fn with_path(mut self, path: PathSpec<T>) -> Self {
        self.path = Some(path);
        self
    }

    pub fn with_disorder(mut self, disorder: FieldDisorder<T>) -> Self {
        self.disorder = disorder;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 {
            return Err(Error::invalid("p", format!("{} must be >= 2", self.p)));
        }
        if self.n == 0 {
            return Err(Error::invalid("N", "must be >= 1"));
        }
        if self.driving == Driving::Continuous && self.path.is_none() {
            return Err(Error::invalid("path", "continuous driving requires a path exponent r"));
        }
        Ok(())
    }

    fn require_path(&self) -> Result<PathSpec<T>> {
        self.path
            .ok_or_else(|| Error::invalid("path", "this operation needs a path exponent r"))
    }

    pub fn schedule(&self) -> Result<DriveSchedule<T>> {
        DriveSchedule::new(self.n, self.require_path()?)
    }

    /// Point of the annealing path at `s`. Uniform driving has no `tau`
    /// coordinate and reports `tau = 0`.
    pub fn point_at(&self, s: T) -> Result<SchedulePoint<T>> {
        match self.driving {
            Driving::Uniform => SchedulePoint::new(s, T::zero()),
            Driving::Discrete | Driving::Continuous => self.require_path()?.eval(s),
        }
    }

    /// Number of sites that keep their unit field under discrete driving.
    /// Ties round toward the larger transverse block.
    pub fn discrete_on_count(&self, tau: T) -> usize {
        let x = T::from_usize_lossy(self.n) * (T::one() - tau);
        x.round().to_usize().unwrap_or(0).min(self.n)
    }

    /// Transverse field on each site at `point` (zero-based).
    pub fn site_gammas(&self, point: SchedulePoint<T>) -> Result<Vec<T>> {
        self.validate()?;
        check_unit("s", point.s, T::zero(), T::one())?;
        check_unit("tau", point.tau, T::zero(), T::one())?;
        let n = self.n;
        Ok(match self.driving {
            Driving::Uniform => vec![T::one() - point.s; n],
            Driving::Discrete => {
                let on = self.discrete_on_count(point.tau);
                (1..=n)
                    .map(|i| if i <= on { T::one() } else { T::zero() })
                    .collect()
            }
            Driving::Continuous => {
                let schedule = self.schedule()?;
                (1..=n)
                    .map(|i| schedule.gamma(i, point.s))
                    .collect::<Result<_>>()?
            }
        })
    }

    /// Groups the spins into blocks of identical `(gamma, h)`.
    ///
    /// Discrete driving reads `point.tau`; continuous and uniform driving
    /// read `point.s` only.
    pub fn decompose(&self, point: SchedulePoint<T>) -> Result<BlockDecomposition<T>> {
        let gammas = self.site_gammas(point)?;
        let fields = self.disorder.site_fields(self.n)?;
        Ok(BlockDecomposition::from_sites(gammas.into_iter().zip(fields)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sched(n: usize, r: f64) -> DriveSchedule<f64> {
        DriveSchedule::new(n, PathSpec::new(r).unwrap()).unwrap()
    }

    #[test]
    fn gamma_hand_values() {
        let s = sched(4, 1.0);
        assert_abs_diff_eq!(s.gamma(4, 0.1).unwrap(), 0.6, epsilon = 1e-12);
        assert_eq!(s.gamma(4, 0.25).unwrap(), 0.0);
        assert_abs_diff_eq!(s.gamma(1, 0.8).unwrap(), 0.8, epsilon = 1e-12);
        assert_eq!(s.gamma(1, 0.0).unwrap(), 1.0);
        assert_eq!(s.gamma(1, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn gamma_rejects_bad_arguments() {
        let s = sched(4, 1.0);
        assert!(s.gamma(0, 0.5).is_err());
        assert!(s.gamma(5, 0.5).is_err());
        assert!(s.gamma(1, 1.5).is_err());
        assert!(s.gamma(1, -0.1).is_err());
        assert!(s.gamma(1, f64::NAN).is_err());
    }

    #[test]
    fn gamma_derivative_values() {
        let s = sched(4, 1.0);
        assert_eq!(s.gamma_derivative(4, 0.1).unwrap(), Slope { value: -4.0, one_sided: false });
        assert_eq!(s.gamma_derivative(1, 0.5).unwrap().value, 0.0);
        let s2 = sched(4, 2.0);
        // s = 0.6 lies in site 3's window [s_3, s_2] = [0.5, 0.707]
        assert_abs_diff_eq!(s2.gamma_derivative(3, 0.6).unwrap().value, -4.8, epsilon = 1e-12);
        assert_eq!(s2.gamma_derivative(2, 0.6).unwrap().value, 0.0);
    }

    #[test]
    fn gamma_derivative_flags_breakpoints() {
        let s = sched(4, 1.0);
        // site 4's window is [s_4, s_3] = [0, 0.25]
        let at_open = s.gamma_derivative(4, 0.0).unwrap();
        assert!(at_open.one_sided);
        assert_eq!(at_open.value, -4.0);
        let at_close = s.gamma_derivative(4, 0.25).unwrap();
        assert!(at_close.one_sided);
        assert_eq!(at_close.value, 0.0);
    }

    #[test]
    fn breakpoints_are_ordered_and_exact() {
        let s = sched(7, 2.5);
        let b = s.breakpoints();
        assert_eq!(b.len(), 8);
        assert_eq!(b[0], 0.0);
        assert_eq!(*b.last().unwrap(), 1.0);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        for i in 0..=7 {
            assert_eq!(s.breakpoint_index(s.breakpoint(i)), Some(i));
        }
        assert_eq!(s.breakpoint_index(0.5 * (b[2] + b[3])), None);
    }

    #[test]
    fn path_eval() {
        let p = PathSpec::new(1.0).unwrap();
        assert_eq!(p.eval(0.3).unwrap(), SchedulePoint { s: 0.3, tau: 0.3 });
        let p3 = PathSpec::new(3.0).unwrap();
        assert_abs_diff_eq!(p3.eval(0.5).unwrap().tau, 0.125, epsilon = 1e-15);
        assert_eq!(PathSpec::new(2.0).unwrap().eval(1.0).unwrap().tau, 1.0);
        assert!(p.eval(1.01).is_err());
        assert!(PathSpec::new(0.0).is_err());
        assert!(PathSpec::new(-1.0).is_err());
    }

    #[test]
    fn discrete_decomposition() {
        let m = ModelSpec::<f64>::new(3, 100, Driving::Discrete).unwrap();
        let d = m.decompose(SchedulePoint::new(0.4, 0.25).unwrap()).unwrap();
        assert_eq!(
            d.blocks,
            vec![
                Block { count: 75, gamma: 1.0, h: 0.0 },
                Block { count: 25, gamma: 0.0, h: 0.0 }
            ]
        );
        assert_eq!(d.total, 100);
    }

    #[test]
    fn discrete_rounding_ties_toward_transverse_block() {
        let m = ModelSpec::<f64>::new(3, 2, Driving::Discrete).unwrap();
        // N(1 - tau) = 1.5 rounds up
        assert_eq!(m.discrete_on_count(0.25), 2);
        let m = ModelSpec::<f64>::new(3, 10, Driving::Discrete).unwrap();
        assert_eq!(m.discrete_on_count(0.35), 7);
    }

    #[test]
    fn continuous_decomposition_has_one_fractional_site() {
        let m = ModelSpec::<f64>::new(3, 4, Driving::Continuous)
            .unwrap()
            .with_path(PathSpec::new(1.0).unwrap());
        let d = m.decompose(SchedulePoint::new(0.1, 0.1).unwrap()).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert_eq!((d.blocks[0].count, d.blocks[0].gamma), (3, 1.0));
        assert_eq!(d.blocks[1].count, 1);
        assert_abs_diff_eq!(d.blocks[1].gamma, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(d.field_sum(), 3.6, epsilon = 1e-12);
    }

    #[test]
    fn continuous_requires_path() {
        let m = ModelSpec::<f64>::new(3, 4, Driving::Continuous).unwrap();
        assert!(m.validate().is_err());
        assert!(m.decompose(SchedulePoint::new(0.1, 0.1).unwrap()).is_err());
    }

    #[test]
    fn binary_disorder_balanced_split() {
        let m = ModelSpec::<f64>::new(3, 8, Driving::Discrete)
            .unwrap()
            .with_disorder(FieldDisorder::binary(0.5, 7).unwrap());
        let d = m.decompose(SchedulePoint::new(0.5, 0.5).unwrap()).unwrap();
        assert_eq!(
            d.blocks,
            vec![
                Block { count: 2, gamma: 1.0, h: 0.5 },
                Block { count: 2, gamma: 1.0, h: -0.5 },
                Block { count: 2, gamma: 0.0, h: 0.5 },
                Block { count: 2, gamma: 0.0, h: -0.5 },
            ]
        );
    }

    #[test]
    fn binary_fields_are_balanced_and_seeded() {
        for n in 1..20 {
            for seed in 0..6 {
                for order in [SiteOrder::Interleaved, SiteOrder::AlignedFirst] {
                    let d = FieldDisorder::binary(0.5, seed).unwrap().with_order(order);
                    let h = d.site_fields(n).unwrap();
                    let plus = h.iter().filter(|&&x| x > 0.0).count();
                    assert!(plus == n / 2 || plus == n / 2 + 1, "n={n} plus={plus}");
                    assert_eq!(h, d.site_fields(n).unwrap());
                }
            }
        }
        // odd counts: both parities occur across seeds
        let plus_counts: Vec<usize> = (0..16)
            .map(|seed| {
                FieldDisorder::binary(1.0, seed)
                    .unwrap()
                    .site_fields(5)
                    .unwrap()
                    .iter()
                    .filter(|&&x| x > 0.0)
                    .count()
            })
            .collect();
        assert!(plus_counts.contains(&2) && plus_counts.contains(&3));
    }

    #[test]
    fn aligned_first_switches_off_plus_sites_first() {
        let d = FieldDisorder::binary(0.5, 0).unwrap().with_order(SiteOrder::AlignedFirst);
        assert_eq!(d.site_fields(6).unwrap(), vec![-0.5, -0.5, -0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn gaussian_disorder_has_no_blocks() {
        let m = ModelSpec::<f64>::new(3, 8, Driving::Discrete)
            .unwrap()
            .with_disorder(FieldDisorder::gaussian(0.5, 1).unwrap());
        assert!(matches!(
            m.decompose(SchedulePoint::new(0.5, 0.5).unwrap()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn uniform_blocks_carry_one_minus_s() {
        let m = ModelSpec::<f64>::new(3, 5, Driving::Uniform).unwrap();
        let d = m.decompose(SchedulePoint::new(0.3, 0.0).unwrap()).unwrap();
        assert_eq!(d.blocks, vec![Block { count: 5, gamma: 0.7, h: 0.0 }]);
    }

    #[test]
    fn model_validation() {
        assert!(ModelSpec::<f64>::new(1, 4, Driving::Uniform).is_err());
        assert!(ModelSpec::<f64>::new(2, 0, Driving::Uniform).is_err());
        assert!(FieldDisorder::binary(-0.1_f64, 0).is_err());
        assert!(FieldDisorder::gaussian(0.0_f64, 0).is_err());
    }

    #[test]
    fn single_precision_schedule() {
        let s = DriveSchedule::new(4, PathSpec::new(1.0_f32).unwrap()).unwrap();
        assert!((s.gamma(4, 0.1).unwrap() - 0.6).abs() < 1e-5);
    }
}
