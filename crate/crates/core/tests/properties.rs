//! Randomized invariants of the drive schedule, the functionals and the
//! Hamiltonian builder.

use inhomqa::exactdiag::{build_hamiltonian, HamiltonianOptions};
use inhomqa::meanfield::{free_energy_finite_t, free_energy_t0, minimize_m, FreeEnergy, MinimizeOptions};
use inhomqa::semiclassical::{classical_energy, minimize_theta};
use inhomqa::{DriveSchedule, Driving, FieldDisorder, ModelSpec, PathSpec, SchedulePoint};
use proptest::prelude::*;

fn schedule(n: usize, r: f64) -> DriveSchedule<f64> {
    DriveSchedule::new(n, PathSpec::new(r).unwrap()).unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn field_sum_identity(n in 1usize..1000, r in 0.2f64..8.0, s in 0.0f64..=1.0) {
        let sch = schedule(n, r);
        let total: f64 = (1..=n).map(|i| sch.gamma(i, s).unwrap()).sum();
        let expected = n as f64 * (1.0 - s.powf(r));
        prop_assert!((total - expected).abs() <= 1e-12 * n as f64, "{total} vs {expected}");
    }

    #[test]
    fn field_sum_identity_at_breakpoints(n in 1usize..1000, r in 0.2f64..8.0, frac in 0.0f64..=1.0) {
        let sch = schedule(n, r);
        let i = ((n as f64) * frac) as usize;
        let s = sch.breakpoint(i.min(n));
        let total: f64 = (1..=n).map(|k| sch.gamma(k, s).unwrap()).sum();
        prop_assert!((total - i.min(n) as f64).abs() <= 1e-12 * n as f64);
    }

    #[test]
    fn gamma_is_monotone_and_bounded(n in 1usize..200, r in 0.2f64..8.0, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let sch = schedule(n, r);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for i in 1..=n {
            let g_lo = sch.gamma(i, lo).unwrap();
            let g_hi = sch.gamma(i, hi).unwrap();
            prop_assert!((0.0..=1.0).contains(&g_lo));
            prop_assert!(g_hi <= g_lo + 1e-12);
        }
    }

    #[test]
    fn gamma_is_continuous(n in 1usize..200, r in 0.5f64..4.0, s in 0.01f64..0.99) {
        let sch = schedule(n, r);
        let ds = 1e-9;
        // Lipschitz bound from the slope inside a window
        let bound = n as f64 * r * (s + ds).max(s - ds).powf(r - 1.0).max((s - ds).powf(r - 1.0)) * ds;
        for i in 1..=n {
            let jump = (sch.gamma(i, s + ds).unwrap() - sch.gamma(i, s - ds).unwrap()).abs();
            prop_assert!(jump <= 2.0 * bound + 1e-12, "site {i}: {jump}");
        }
    }

    #[test]
    fn continuous_matches_discrete_at_breakpoints(n in 1usize..60, r in 0.3f64..6.0, frac in 0.0f64..=1.0) {
        let path = PathSpec::new(r).unwrap();
        let cont = ModelSpec::<f64>::new(3, n, Driving::Continuous).unwrap().with_path(path);
        let disc = ModelSpec::<f64>::new(3, n, Driving::Discrete).unwrap().with_path(path);
        let i = (((n as f64) * frac) as usize).min(n);
        let s = cont.schedule().unwrap().breakpoint(i);
        let point = path.eval(s).unwrap();
        prop_assert_eq!(cont.decompose(point).unwrap(), disc.decompose(point).unwrap());
    }

    #[test]
    fn blocks_partition_the_spins(n in 1usize..80, r in 0.3f64..6.0, s in 0.0f64..=1.0, seed in 0u64..1000, h0 in 0.1f64..2.0) {
        let path = PathSpec::new(r).unwrap();
        let m = ModelSpec::<f64>::new(3, n, Driving::Continuous)
            .unwrap()
            .with_path(path)
            .with_disorder(FieldDisorder::binary(h0, seed).unwrap());
        let dec = m.decompose(path.eval(s).unwrap()).unwrap();
        prop_assert_eq!(dec.blocks.iter().map(|b| b.count).sum::<usize>(), n);
        prop_assert_eq!(dec.total, n);
        for b in &dec.blocks {
            prop_assert!(b.count > 0);
            prop_assert!((0.0..=1.0).contains(&b.gamma));
        }
    }

    #[test]
    fn finite_temperature_lies_below_ground_functional(
        p in 2u32..8, m in 0.0f64..=1.0, s in 0.0f64..=1.0, tau in 0.0f64..=1.0, t in 1e-4f64..2.0,
    ) {
        let f0 = free_energy_t0(m, s, tau, p).unwrap();
        let ft = free_energy_finite_t(m, s, tau, p, t).unwrap();
        prop_assert!(ft <= f0 + 1e-12);
        // each site contributes at most T ln 2
        prop_assert!(f0 - ft <= t * std::f64::consts::LN_2 + 1e-12);
    }

    #[test]
    fn minimizer_is_stationary(p in 3u32..8, s in 0.05f64..=1.0, tau in 0.0f64..=1.0) {
        let fe = FreeEnergy::ground(p, s, tau).unwrap();
        let pt = minimize_m(&fe, &MinimizeOptions::default());
        prop_assert!(pt.stationarity_residual <= 1e-8, "{}", pt.stationarity_residual);
        prop_assert!((0.0..=1.0).contains(&pt.m));
    }

    #[test]
    fn semiclassical_minimum_is_global(p in 2u32..8, r in 0.5f64..6.0, s in 0.0f64..=1.0, theta in 0.0f64..=std::f64::consts::FRAC_PI_2) {
        let theta0 = minimize_theta(s, r, p).unwrap();
        let e0 = classical_energy(theta0, s, r, p).unwrap();
        let e = classical_energy(theta, s, r, p).unwrap();
        prop_assert!(e0 <= e + 1e-12, "e({theta0}) = {e0} > e({theta}) = {e}");
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn hamiltonian_is_symmetric(
        p in 2u32..6, n in 2usize..16, r in 0.3f64..4.0, s in 0.0f64..=1.0, seed in 0u64..1000, continuous in any::<bool>(),
    ) {
        let driving = if continuous { Driving::Continuous } else { Driving::Discrete };
        let path = PathSpec::new(r).unwrap();
        let m = ModelSpec::<f64>::new(p, n, driving)
            .unwrap()
            .with_path(path)
            .with_disorder(FieldDisorder::binary(0.7, seed).unwrap());
        let point: SchedulePoint<f64> = path.eval(s).unwrap();
        let h = build_hamiltonian(&m, point, &HamiltonianOptions::default()).unwrap();
        prop_assert!(h.is_symmetric());
    }
}
