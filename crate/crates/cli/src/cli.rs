//! Command-line grammar. The parsed commands double as the serialized run
//! configuration, so a sidecar can be replayed without the original argv.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use inhomqa::grid::Grid;
use inhomqa::{Driving, SiteOrder};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "inhomqa", version, about = "Mean-field, semiclassical and exact-diagonalization scans of inhomogeneously driven p-spin annealing")]
pub struct Cli {
    /// CSV output path; a JSON sidecar is written next to it. Without it the
    /// table goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Also write a gnuplot script next to the CSV (requires --out).
    #[arg(long, global = true)]
    pub gnuplot: bool,

    #[command(subcommand)]
    pub command: TopLevel,
}

#[derive(Debug, Subcommand)]
pub enum TopLevel {
    #[command(flatten)]
    Run(Command),
    /// Re-run the configuration stored in a JSON sidecar.
    Rerun {
        sidecar: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "args", rename_all = "kebab-case")]
pub enum Command {
    /// First-order line in the (s, tau) plane for each p, plus the
    /// closed-form endpoint.
    PhaseDiagram(PhaseDiagramArgs),
    /// Closed-form critical endpoint.
    CriticalPoint(CriticalPointArgs),
    /// Free-energy profile f(m) at one point.
    FreeEnergy(FreeEnergyArgs),
    /// Ground-state magnetization along a path.
    Magnetization(MagnetizationArgs),
    /// Energy gaps along a path.
    #[command(subcommand)]
    Gap(GapCommand),
    /// Per-site transverse field of the continuous drive.
    Schedule(ScheduleArgs),
    /// Adiabatic-condition matrix element and time scale.
    Adiabatic(AdiabaticArgs),
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "method", content = "args", rename_all = "kebab-case")]
pub enum GapCommand {
    /// Large-N fluctuation gaps.
    Semiclassical(SemiclassicalArgs),
    /// Exact diagonalization in the maximal-spin sector.
    Exact(ExactArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PhaseDiagramArgs {
    /// Exponents, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub p: Vec<u32>,
    /// Number of tau rows.
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    /// Smallest magnetization jump counted as first order.
    #[arg(long, default_value_t = 0.05)]
    pub jump_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CriticalPointArgs {
    #[arg(long)]
    pub p: u32,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DisorderArgs {
    /// Binary random field +-h0.
    #[arg(long, conflicts_with = "sigma")]
    pub h0: Option<f64>,
    /// Gaussian random field of standard deviation sigma.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Seed of the site-field sequence.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Which sites lose their transverse field first.
    #[arg(long, value_enum, default_value_t = OrderArg::Interleaved)]
    pub order: OrderArg,
    /// Gauss-Hermite order for Gaussian fields.
    #[arg(long, default_value_t = 64)]
    pub quadrature: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FreeEnergyArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub tau: f64,
    /// Temperature; zero temperature when omitted.
    #[arg(long = "T")]
    pub temperature: Option<f64>,
    #[command(flatten)]
    pub disorder: DisorderArgs,
    #[arg(long, default_value = "0:1:0.001")]
    pub m_grid: Grid,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct MagnetizationArgs {
    #[arg(long)]
    pub p: u32,
    /// Path exponents of tau = s^r, comma separated.
    #[arg(long, value_delimiter = ',', required_unless_present = "uniform")]
    pub r: Vec<f64>,
    /// Add the uniform transverse coefficient 1 - s.
    #[arg(long)]
    pub uniform: bool,
    #[command(flatten)]
    pub disorder: DisorderArgs,
    #[arg(long, default_value = "0:1:0.005")]
    pub s_grid: Grid,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SemiclassicalArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value = "0:1:0.005")]
    pub s_grid: Grid,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ExactArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// System sizes, comma separated.
    #[arg(long = "N", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Drive modes, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "discrete")]
    pub driving: Vec<DrivingArg>,
    /// Defaults to every integer N(1 - tau) for discrete driving and to
    /// 0:1:0.01 otherwise.
    #[arg(long)]
    pub s_grid: Option<Grid>,
    /// Number of levels.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[command(flatten)]
    pub disorder: DisorderArgs,
    /// Relative residual tolerance of the eigensolver.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Cap on stored matrix entries.
    #[arg(long, default_value_t = 2_000_000)]
    pub nnz_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ScheduleArgs {
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long)]
    pub r: f64,
    /// Single site (1-based); all sites when omitted.
    #[arg(long)]
    pub site: Option<usize>,
    #[arg(long, default_value = "0:1:0.001")]
    pub s_grid: Grid,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct AdiabaticArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long = "N")]
    pub n: usize,
    /// Comma-separated values of s.
    #[arg(long, value_delimiter = ',', required = true)]
    pub s: Vec<f64>,
    #[arg(long, value_enum, default_value_t = DrivingArg::Continuous)]
    pub driving: DrivingArg,
    /// Step of the finite-difference cross-check.
    #[arg(long, default_value_t = 1e-6)]
    pub delta_s: f64,
    #[command(flatten)]
    pub disorder: DisorderArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrivingArg {
    Discrete,
    Continuous,
    Uniform,
}

impl From<DrivingArg> for Driving {
    fn from(d: DrivingArg) -> Self {
        match d {
            DrivingArg::Discrete => Driving::Discrete,
            DrivingArg::Continuous => Driving::Continuous,
            DrivingArg::Uniform => Driving::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderArg {
    Interleaved,
    AlignedFirst,
}

impl From<OrderArg> for SiteOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Interleaved => SiteOrder::Interleaved,
            OrderArg::AlignedFirst => SiteOrder::AlignedFirst,
        }
    }
}
