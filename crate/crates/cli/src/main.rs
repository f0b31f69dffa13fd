//! `nearfield`: reproduces the library's figure data as CSV.

mod commands;
mod config;
mod series;
mod units;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use config::RunConfig;
use series::CsvSeries;

/// Environment variable holding the worker-thread count.
const WORKERS_ENV: &str = "NEARFIELD_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(nearfield::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Mismatch(String),
}

impl From<nearfield::Error> for CliError {
    fn from(e: nearfield::Error) -> Self {
        match e {
            nearfield::Error::Domain(m) => CliError::Config(m),
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) | CliError::Mismatch(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nearfield", version, about = "Near-field array and LOS-MIMO figure data as CSV")]
struct Cli {
    /// Run-config file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path, or `-` for stdout. Overrides `[output] path`.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Tolerance: quadrature tolerance for `gain-sweep`, relative tolerance
    /// for `compare-golden`. Overrides the config value.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Boundary distances of the configured array.
    Regions,
    /// Exact normalised array gain along the broadside axis.
    GainSweep,
    /// Focal-plane gain profiles and 3 dB beam widths.
    BeamWidth,
    /// 3 dB beam depth intervals.
    BeamDepth,
    /// Gain map over the (x, z) plane.
    Heatmap,
    /// Axial gain function for several array shapes.
    GOfX,
    /// Depth-multiplexing focal-point plan, or its axial gain profiles.
    DepthPlan,
    /// Per-user SINR under zero-forcing or matched-filter precoding.
    ZfSinr,
    /// Eigenmodes and capacity of a LOS MIMO link.
    LosCapacity,
    /// Angular patterns of the right singular vectors.
    ModePatterns,
    /// Single-stream rate against bandwidth.
    CapacityVsBandwidth,
    /// Optimal-spacing capacity of a fixed array area against carrier frequency.
    CapacityVsFrequency,
    /// Spatial degrees of freedom of a planar aperture.
    Dof,
    /// Compare a CSV against a golden file column by column.
    CompareGolden { csv: PathBuf, golden: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Regions => "regions",
            Command::GainSweep => "gain-sweep",
            Command::BeamWidth => "beam-width",
            Command::BeamDepth => "beam-depth",
            Command::Heatmap => "heatmap",
            Command::GOfX => "g-of-x",
            Command::DepthPlan => "depth-plan",
            Command::ZfSinr => "zf-sinr",
            Command::LosCapacity => "los-capacity",
            Command::ModePatterns => "mode-patterns",
            Command::CapacityVsBandwidth => "capacity-vs-bandwidth",
            Command::CapacityVsFrequency => "capacity-vs-frequency",
            Command::Dof => "dof",
            Command::CompareGolden { .. } => "compare-golden",
        }
    }
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("{WORKERS_ENV}: {e}")))
}

fn compare(csv: &PathBuf, golden: &PathBuf, tol: f64) -> Result<String, CliError> {
    let a = fs::read_to_string(csv)?;
    let b = fs::read_to_string(golden)?;
    let report = series::compare_golden(&a, &b, tol).map_err(|e| CliError::Mismatch(format!("structural mismatch: {e}")))?;
    let mut text = String::new();
    for c in &report.columns {
        let status = if c.max_rel_dev <= tol { "ok" } else { "FAIL" };
        text.push_str(&format!("{status} {} max_rel_dev={:e} row={}\n", c.column, c.max_rel_dev, c.row));
    }
    if report.passed() {
        text.push_str(&format!("PASS at rel_tol {tol:e}\n"));
        Ok(text)
    } else {
        let worst: Vec<String> = report.failures().map(|c| format!("{} (row {})", c.column, c.row)).collect();
        Err(CliError::Mismatch(format!("{text}FAIL at rel_tol {tol:e}: {}", worst.join(", "))))
    }
}

fn run_command(cmd: &Command, cfg: &RunConfig, tol: Option<f64>) -> Result<CsvSeries, CliError> {
    match cmd {
        Command::Regions => commands::regions(cfg),
        Command::GainSweep => commands::gain_sweep(cfg, tol),
        Command::BeamWidth => commands::beam_width(cfg),
        Command::BeamDepth => commands::beam_depth(cfg),
        Command::Heatmap => commands::heatmap(cfg),
        Command::GOfX => commands::g_of_x_cmd(cfg),
        Command::DepthPlan => commands::depth_plan(cfg),
        Command::ZfSinr => commands::zf_sinr(cfg),
        Command::LosCapacity => commands::los_capacity(cfg),
        Command::ModePatterns => commands::mode_patterns(cfg),
        Command::CapacityVsBandwidth => commands::capacity_vs_bandwidth(cfg),
        Command::CapacityVsFrequency => commands::capacity_vs_frequency(cfg),
        Command::Dof => commands::dof(cfg),
        Command::CompareGolden { .. } => unreachable!("handled before config loading"),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_workers()?;
    if let Command::CompareGolden { csv, golden } = &cli.command {
        print!("{}", compare(csv, golden, cli.tol.unwrap_or(1e-6))?);
        return Ok(());
    }
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("'{}' needs --config <path>", cli.command.name())))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let cfg = RunConfig::parse(&text)?;
    let mut series = run_command(&cli.command, &cfg, cli.tol)?;

    let mut meta = vec![
        ("tool".to_string(), format!("nearfield {}", env!("CARGO_PKG_VERSION"))),
        ("command".to_string(), cli.command.name().to_string()),
        ("config_sha256".to_string(), hex::encode(Sha256::digest(text.as_bytes()))),
    ];
    if let Some(t) = cli.tol {
        meta.push(("tol_override".to_string(), format!("{t:e}")));
    }
    meta.append(&mut series.metadata);
    series.metadata = meta;

    let out = cli.out.clone().or_else(|| cfg.output.as_ref().and_then(|o| o.path.clone()));
    match out.as_deref() {
        None | Some("-") => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            series.write_to(&mut lock)?;
            lock.flush()?;
        }
        Some(p) => series.write_to(fs::File::create(p)?)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nearfield: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
