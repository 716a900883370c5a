use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ini_core::{Constellation, Evaluator, FrequencyOffset, GuardConvention, GuardScaling};

use crate::error::CliError;
use crate::report::Format;
use crate::units::Quantity;

/// Upper bound on the number of points of one guard-band grid.
const MAX_GRID_POINTS: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "ini",
    version,
    about = "Inter-numerology interference between 5G NR numerologies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form MSE on one victim tone over a guard-band grid.
    MseSweep(SweepArgs),
    /// Closed-form MSE against the time-domain simulator.
    Verify(VerifyArgs),
    /// Minimal guard band against interferer width for a rejection target.
    GbCurve(GbCurveArgs),
    /// Guard bands, total bandwidth and efficiency of multi-service plans.
    Scenario(ScenarioArgs),
    /// Residual of the numerology-shift approximation.
    ApproxCheck(ApproxArgs),
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Interferer numerology.
    #[arg(long)]
    pub mu_i: u32,
    /// Victim numerology.
    #[arg(long)]
    pub mu_u: u32,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// First guard band, with unit (`bins`, `sc`, `rb` of the victim, or `khz`).
    #[arg(long)]
    pub gb_start: Quantity,
    #[arg(long)]
    pub gb_stop: Quantity,
    #[arg(long)]
    pub gb_step: Quantity,
}

impl GridArgs {
    /// Guard bands `start, start + step, ...` up to `stop` inclusive.
    pub fn offsets(&self, mu_u: u32) -> Result<Vec<FrequencyOffset>, CliError> {
        let start = self.gb_start.to_offset(mu_u)?.bins();
        let stop = self.gb_stop.to_offset(mu_u)?.bins();
        let step = self.gb_step.to_offset(mu_u)?.bins();
        if step <= 0.0 {
            return Err(CliError::Usage("--gb-step must be positive".into()));
        }
        if stop < start {
            return Err(CliError::Usage("--gb-stop is below --gb-start".into()));
        }
        // tolerate round-off in the last step (e.g. kHz inputs)
        let span = (stop - start) / step;
        if span >= MAX_GRID_POINTS as f64 {
            return Err(CliError::Usage(format!("grid exceeds {MAX_GRID_POINTS} points")));
        }
        let n = (span + 1e-9).floor() as u64 + 1;
        (0..n)
            .map(|k| FrequencyOffset::from_bins(start + k as f64 * step).map_err(CliError::from))
            .collect()
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Interferer width in subcarriers.
    #[arg(long, default_value_t = 12)]
    pub n_int: u64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value = "exact")]
    pub evaluator: Evaluator,
    /// Average over the 12 subcarriers of the victim RB next to the guard band.
    #[arg(long)]
    pub rb_average: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = 1)]
    pub n_int: u64,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Victim symbols simulated per grid point.
    #[arg(long, default_value_t = 10_000)]
    pub n_symbols: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Closed form the simulation is compared with.
    #[arg(long, default_value = "exact")]
    pub evaluator: Evaluator,
    #[arg(long, default_value = "qpsk")]
    pub constellation: Constellation,
    /// Largest |z| counted as agreement.
    #[arg(long, default_value_t = 3.0)]
    pub z_limit: f64,
    /// Largest fraction of points allowed beyond `--z-limit`.
    #[arg(long, default_value_t = 0.01)]
    pub max_outliers: f64,
    /// Also write the interferer waveform of the first grid point as raw
    /// little-endian f64 (re, im) pairs.
    #[arg(long)]
    pub dump_samples: Option<PathBuf>,
    /// Interferer symbols in the dump.
    #[arg(long, default_value_t = 16)]
    pub dump_symbols: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GbCurveArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Rejection target in dB.
    #[arg(long)]
    pub target_db: f64,
    /// Interferer widths in subcarriers, ascending.
    #[arg(long, value_delimiter = ',', default_value = "12,24,60,120,300,600")]
    pub n_int: Vec<u64>,
    /// Search grid step (default: one victim subcarrier).
    #[arg(long)]
    pub step: Option<Quantity>,
    /// Search horizon (default: 2048 bins).
    #[arg(long)]
    pub horizon: Option<Quantity>,
    /// Refine inside the last grid cell for a fractional result.
    #[arg(long)]
    pub refine: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario files (JSON); may be repeated.
    #[arg(long)]
    pub file: Vec<PathBuf>,
    /// Extra rejection targets in dB, combined with every `--n-rb`.
    #[arg(long, value_delimiter = ',')]
    pub target_db: Vec<f64>,
    /// Extra RB counts per service, combined with every `--target-db`.
    #[arg(long, value_delimiter = ',')]
    pub n_rb: Vec<u64>,
    /// Service numerologies for `--target-db` / `--n-rb` combinations.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    pub mu: Vec<u32>,
    /// Skip the built-in grid (targets 25/30/40 dB by 5/10/25 RBs of
    /// numerologies 0, 1, 2).
    #[arg(long)]
    pub no_grid: bool,
    #[arg(long, default_value = "bidirectional")]
    pub convention: GuardConvention,
    #[arg(long, default_value = "normalized")]
    pub scaling: GuardScaling,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// Interferer numerology; every supported pair when omitted.
    #[arg(long, requires = "mu_u")]
    pub mu_i: Option<u32>,
    #[arg(long, requires = "mu_i")]
    pub mu_u: Option<u32>,
    /// Shifts to test; every shift keeping both numerologies in 0..=5 when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Vec<i32>,
    #[arg(long, default_value_t = 12)]
    pub n_int: u64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Largest residual in dB counted as agreement.
    #[arg(long, default_value_t = 0.5)]
    pub tolerance_db: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
