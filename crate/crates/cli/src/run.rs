//! Executes one command into an ordered table.

use inhomqa::exactdiag::{adiabatic_numerator, discrete_grid, gap_scan_ed, EigenOptions, HamiltonianOptions};
use inhomqa::meanfield::{
    critical_point, magnetization_curve, trace_phase_boundary, BoundaryOptions, CurveDrive, FieldAverage,
    FreeEnergy, MinimizeOptions,
};
use inhomqa::semiclassical::{gap_scan, Expansion};
use inhomqa::{DisorderKind, DriveSchedule, Error, FieldDisorder, ModelSpec, PathSpec};

use crate::cli::{
    AdiabaticArgs, Command, CriticalPointArgs, DisorderArgs, DrivingArg, ExactArgs, FreeEnergyArgs, GapCommand,
    MagnetizationArgs, PhaseDiagramArgs, ScheduleArgs, SemiclassicalArgs,
};
use crate::error::{CliError, CliResult};
use crate::output::{num, Plot, Series, Table};

pub fn execute(command: &Command) -> CliResult<Table> {
    match command {
        Command::PhaseDiagram(args) => phase_diagram(args),
        Command::CriticalPoint(args) => critical(args),
        Command::FreeEnergy(args) => free_energy(args),
        Command::Magnetization(args) => magnetization(args),
        Command::Gap(GapCommand::Semiclassical(args)) => gap_semiclassical(args),
        Command::Gap(GapCommand::Exact(args)) => gap_exact(args),
        Command::Schedule(args) => schedule(args),
        Command::Adiabatic(args) => adiabatic(args),
    }
}

fn field_disorder(args: &DisorderArgs) -> CliResult<FieldDisorder<f64>> {
    let disorder = match (args.h0, args.sigma) {
        (None, None) => FieldDisorder::none(),
        (Some(h0), None) => FieldDisorder::binary(h0, args.seed)?,
        (None, Some(sigma)) => FieldDisorder::gaussian(sigma, args.seed)?,
        (Some(_), Some(_)) => return Err(CliError::Usage("--h0 and --sigma are mutually exclusive".into())),
    };
    Ok(disorder.with_order(args.order.into()))
}

fn block_model(p: u32, n: usize, r: f64, driving: DrivingArg, disorder: &DisorderArgs) -> CliResult<ModelSpec<f64>> {
    if disorder.sigma.is_some() {
        return Err(CliError::Usage(
            "--sigma: Gaussian fields leave no equivalent spins, so exact diagonalization accepts only --h0".into(),
        ));
    }
    Ok(ModelSpec::new(p, n, driving.into())?
        .with_path(PathSpec::new(r)?)
        .with_disorder(field_disorder(disorder)?))
}

fn phase_diagram(args: &PhaseDiagramArgs) -> CliResult<Table> {
    let opts = BoundaryOptions {
        grid: args.grid,
        jump_threshold: args.jump_threshold,
        ..BoundaryOptions::default()
    };
    let mut table = Table::new(&["p", "s", "tau", "delta_m"]);
    let mut series = Vec::new();
    for &p in &args.p {
        let boundary = trace_phase_boundary::<f64>(p, &opts)?;
        for pt in &boundary.points {
            table.push(vec![p.to_string(), num(pt.s), num(pt.tau), num(pt.delta_m)]);
        }
        table.note(format!("p={p}: {} boundary points", boundary.points.len()));
        // the closed-form endpoint closes each line with a vanishing jump
        match critical_point::<f64>(p) {
            Ok(c) => table.push(vec![p.to_string(), num(c.s_c), num(c.tau_c), num(0.0)]),
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e.into()),
        }
        series.push(Series::new(format!("($1=={p}?$2:NaN):3"), format!("p={p}"), "linespoints"));
    }
    table.plot = Some(Plot::new("s", "tau", series));
    Ok(table)
}

fn critical(args: &CriticalPointArgs) -> CliResult<Table> {
    let c = critical_point::<f64>(args.p)?;
    let mut table = Table::new(&["p", "tau_c", "s_c", "m1c", "mc"]);
    table.push(vec![c.p.to_string(), num(c.tau_c), num(c.s_c), num(c.m1c), num(c.mc)]);
    table.stdout = Some(format!(
        "p={} tau_c={:.5} s_c={:.5} m1c={:.5} mc={:.5}",
        c.p, c.tau_c, c.s_c, c.m1c, c.mc
    ));
    Ok(table)
}

fn free_energy(args: &FreeEnergyArgs) -> CliResult<Table> {
    let disorder = field_disorder(&args.disorder)?;
    let fe = match args.temperature {
        Some(t) if disorder.kind != DisorderKind::None => {
            return Err(Error::Unsupported(format!("--T {t} together with a random field")).into());
        }
        Some(t) => FreeEnergy::thermal(args.p, args.s, args.tau, t)?,
        None => {
            let average = FieldAverage::new(disorder, args.disorder.quadrature)?;
            FreeEnergy::disordered(args.p, args.s, args.tau, &average)?
        }
    };
    let mut table = Table::new(&["m", "f [J]", "df/dm [J]"]);
    for m in args.m_grid.values() {
        if !(0.0..=1.0).contains(&m) {
            return Err(CliError::Usage(format!("--m-grid value {m} outside [0, 1]")));
        }
        table.push(vec![num(m), num(fe.value(m)), num(fe.derivative(m))]);
    }
    table.plot = Some(Plot::new("m", "f [J]", vec![Series::new("1:2", "f", "lines")]));
    Ok(table)
}

fn magnetization(args: &MagnetizationArgs) -> CliResult<Table> {
    let average = FieldAverage::new(field_disorder(&args.disorder)?, args.disorder.quadrature)?;
    let mut drives = Vec::new();
    if args.uniform {
        drives.push(("uniform".to_string(), CurveDrive::Uniform));
    }
    for &r in &args.r {
        drives.push((format!("r={r}"), CurveDrive::Path(PathSpec::new(r)?)));
    }
    if drives.is_empty() {
        return Err(CliError::Usage("give --r, --uniform or both".into()));
    }
    let grid = args.s_grid.values();
    let mut table = Table::new(&["drive", "s", "tau", "m", "f [J]"]);
    let mut series = Vec::new();
    for (label, drive) in &drives {
        let curve = magnetization_curve(args.p, drive, &average, &grid, &MinimizeOptions::default())?;
        for pt in &curve.points {
            table.push(vec![label.clone(), num(pt.s), num(pt.tau), num(pt.point.m), num(pt.point.f)]);
        }
        match curve.jump_at {
            Some(s) => table.note(format!("{label}: largest step {:.4} after s={}", curve.max_jump, num(s))),
            None => table.note(format!("{label}: magnetization is constant on the grid")),
        }
        series.push(Series::new(format!("(strcol(1) eq '{label}' ? $2 : NaN):4"), label.clone(), "lines"));
    }
    table.plot = Some(Plot::new("s", "m", series));
    Ok(table)
}

fn expansion_label(e: Expansion) -> &'static str {
    match e {
        Expansion::Valid => "valid",
        Expansion::EpsilonAboveOne => "epsilon-above-one",
        Expansion::NonPositiveDelta => "non-positive-delta",
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn gap_semiclassical(args: &SemiclassicalArgs) -> CliResult<Table> {
    let points = gap_scan(&PathSpec::new(args.r)?, args.p, &args.s_grid.values())?;
    let mut table = Table::new(&["s", "theta0", "m", "delta1 [J]", "delta2 [J]", "gap [J]", "expansion"]);
    let mut invalid = 0;
    for pt in &points {
        if pt.expansion != Expansion::Valid {
            invalid += 1;
        }
        table.push(vec![
            num(pt.s),
            num(pt.theta0),
            num(pt.m),
            opt(pt.delta1),
            num(pt.delta2),
            opt(pt.gap),
            expansion_label(pt.expansion).to_string(),
        ]);
    }
    if invalid > 0 {
        table.note(format!("{invalid} grid points outside the validity of the expansion"));
    }
    table.plot = Some(Plot::new(
        "s",
        "gap [J]",
        vec![Series::new("1:4", "Delta_1", "lines"), Series::new("1:5", "Delta_2", "lines")],
    ));
    Ok(table)
}

fn driving_label(d: DrivingArg) -> &'static str {
    match d {
        DrivingArg::Discrete => "discrete",
        DrivingArg::Continuous => "continuous",
        DrivingArg::Uniform => "uniform",
    }
}

fn gap_exact(args: &ExactArgs) -> CliResult<Table> {
    let hopts = HamiltonianOptions { nnz_budget: args.nnz_budget };
    let eopts = EigenOptions { tol: args.tol, ..EigenOptions::default() };
    let mut headers: Vec<String> = ["driving", "N", "s", "tau", "dim"].map(String::from).to_vec();
    headers.extend((0..args.k).map(|i| format!("e{i} [J]")));
    headers.extend(["gap [J]".to_string(), "m0".to_string()]);
    let gap_column = headers.len() - 1;
    let mut table = Table::with_headers(headers);
    let mut series = Vec::new();

    for &driving in &args.driving {
        for &n in &args.n {
            let model = block_model(args.p, n, args.r, driving, &args.disorder)?;
            let grid = match (&args.s_grid, driving) {
                (Some(g), _) => g.values(),
                (None, DrivingArg::Discrete) => discrete_grid(&model)?,
                (None, _) => inhomqa::grid::Grid::new(0.0, 1.0, 0.01)?.values(),
            };
            let label = driving_label(driving);
            for pt in gap_scan_ed(&model, &grid, args.k, &hopts, &eopts)? {
                let spec = &pt.spectrum;
                let mut row = vec![label.to_string(), n.to_string(), num(pt.s), num(pt.tau), spec.dim.to_string()];
                row.extend(spec.eigenvalues.iter().map(|&e| num(e)));
                row.push(opt(spec.gap));
                row.push(opt(spec.ground_magnetization));
                table.push(row);
            }
            let style = if driving == DrivingArg::Discrete { "points" } else { "lines" };
            series.push(Series::new(
                format!("(strcol(1) eq '{label}' && $2 == {n} ? $3 : NaN):{gap_column}"),
                format!("{label} N={n}"),
                style,
            ));
        }
    }
    table.plot = Some(Plot::new("s", "gap [J]", series));
    Ok(table)
}

fn schedule(args: &ScheduleArgs) -> CliResult<Table> {
    let schedule = DriveSchedule::new(args.n, PathSpec::new(args.r)?)?;
    let sites: Vec<usize> = match args.site {
        Some(i) => vec![i],
        None => (1..=args.n).collect(),
    };
    let mut headers = vec!["s".to_string()];
    headers.extend(sites.iter().map(|i| format!("gamma_{i}")));
    let mut table = Table::with_headers(headers);
    for s in args.s_grid.values() {
        let mut row = vec![num(s)];
        for &i in &sites {
            row.push(num(schedule.gamma(i, s)?));
        }
        table.push(row);
    }
    let series = sites
        .iter()
        .enumerate()
        .map(|(k, i)| Series::new(format!("1:{}", k + 2), format!("site {i}"), "lines"))
        .collect();
    table.plot = Some(Plot::new("s", "Gamma_i", series));
    Ok(table)
}

fn adiabatic(args: &AdiabaticArgs) -> CliResult<Table> {
    let model = block_model(args.p, args.n, args.r, args.driving, &args.disorder)?;
    let hopts = HamiltonianOptions::default();
    let eopts = EigenOptions::default();
    let mut table = Table::new(&["s", "numerator [J]", "gap [J]", "t0_scale [1/J]", "fd_numerator [J]"]);
    for &s in &args.s {
        let est = adiabatic_numerator(&model, s, args.delta_s, &hopts, &eopts)?;
        table.push(vec![
            num(est.s),
            num(est.numerator),
            num(est.gap),
            num(est.t0_scale),
            num(est.fd_numerator),
        ]);
    }
    table.plot = Some(Plot::new("s", "t0 scale [1/J]", vec![Series::new("1:4", "t0", "linespoints")]));
    Ok(table)
}
