mod cli;
mod error;
mod output;
mod run;

use std::io;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use cli::{Cli, TopLevel};
use error::{CliError, CliResult};
use output::{gnuplot_path, sidecar_path, write_file, RunConfig, Sidecar};

const THREADS_VAR: &str = "INHOMQA_THREADS";

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR}={value} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_VAR}: {e}")))
}

fn config_from(cli: Cli) -> CliResult<RunConfig> {
    match cli.command {
        TopLevel::Run(run) => Ok(RunConfig {
            run,
            out: cli.out,
            gnuplot: cli.gnuplot,
        }),
        TopLevel::Rerun { sidecar } => {
            let mut config = Sidecar::read(&sidecar)?.config;
            if cli.out.is_some() {
                config.out = cli.out;
            }
            config.gnuplot |= cli.gnuplot;
            Ok(config)
        }
    }
}

fn execute(config: RunConfig) -> CliResult<()> {
    if config.gnuplot && config.out.is_none() {
        return Err(CliError::Usage("--gnuplot needs --out".into()));
    }
    let start = Instant::now();
    let table = run::execute(&config.run)?;
    let wall_time_s = start.elapsed().as_secs_f64();

    for line in &table.notes {
        eprintln!("{line}");
    }
    let Some(csv) = config.out.clone() else {
        match &table.stdout {
            Some(text) => println!("{text}"),
            None => table.write_csv(io::stdout().lock())?,
        }
        return Ok(());
    };
    if csv.extension().is_some_and(|e| e == "json" || e == "gp") {
        return Err(CliError::Usage(format!(
            "--out {}: the sidecar and script extensions are reserved",
            csv.display()
        )));
    }
    if let Some(text) = &table.stdout {
        println!("{text}");
    }

    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    write_file(&csv, &buf)?;
    if config.gnuplot {
        match &table.plot {
            Some(plot) => write_file(&gnuplot_path(&csv), plot.script(&csv).as_bytes())?,
            None => eprintln!("no plot for this command; --gnuplot ignored"),
        }
    }
    let sidecar = Sidecar {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        rows: table.rows.len(),
        threads: rayon::current_num_threads(),
        wall_time_s,
        config,
    };
    let json = serde_json::to_string_pretty(&sidecar).map_err(|source| CliError::Json {
        path: sidecar_path(&csv),
        source,
    })?;
    write_file(&sidecar_path(&csv), json.as_bytes())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = configure_threads()
        .and_then(|()| config_from(cli))
        .and_then(execute);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
