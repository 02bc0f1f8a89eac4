//! The `semcomm` command line.
//!
//! Exit codes: 0 success, 1 input error, 2 system not learnable. Standard
//! output carries only JSON or bare values; diagnostics go to standard error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::interchange::{read_distortion, read_stochastic_matrix, read_system};
use crate::simulation::{
    fit_loglog_slope, log_grid, loglog_slope, read_curve_csv, write_curve_csv, ChannelSpec, ConvergenceCurve,
    DecoderBelief, EncoderScheme, ErrorBasis, ExperimentConfig, ExperimentMetadata, PreparedExperiment,
    PriorSource, SlopeField,
};
use crate::spectral::{analyze_deterministic_encoding, check_learnability, DeterministicEncodingReport, LearnabilityReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_LEARNABLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "semcomm", version, about = "Prior learnability, recovery and distortion-gap experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report learnability and spectral statistics of a system file.
    Check(CheckArgs),
    /// Run the estimation-error convergence experiment.
    Simulate(RunArgs),
    /// Run the distortion-gap experiment.
    Distortion(DistortionArgs),
    /// Fit the log-log slope of a curve CSV.
    Slope(SlopeArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// JSON file `{"U": matrix, "C": matrix | "identity"}`.
    pub system: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Well,
    Moderate,
    Ill,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Raw,
    Projected,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Built-in encoder scheme (default: well).
    #[arg(long, value_enum, conflicts_with = "system")]
    pub scheme: Option<SchemeArg>,
    /// System file; replaces --scheme and --channel.
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// Number of meanings for built-in schemes.
    #[arg(long, default_value_t = 30)]
    pub n: usize,
    /// Channel matrix file for built-in schemes (default: perfect channel).
    #[arg(long, conflicts_with = "system")]
    pub channel: Option<PathBuf>,
    /// `zipf`, `dirichlet`, or a path to a prior file.
    #[arg(long, default_value = "zipf")]
    pub prior: String,
    #[arg(long, default_value_t = 1.0)]
    pub zipf_exponent: f64,
    /// Keep the Zipf prior sorted instead of shuffling it.
    #[arg(long)]
    pub no_shuffle: bool,
    #[arg(long, default_value_t = 1.0)]
    pub dirichlet_alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub t_max: u64,
    /// Number of log-spaced grid points between 10 and --t-max.
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, env = "SEMCOMM_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "convergence.csv")]
    pub out: PathBuf,
    /// Worker threads for trials (default: all cores).
    #[arg(long)]
    pub parallel: Option<usize>,
    /// Estimate reported in the mean_error columns.
    #[arg(long, value_enum, default_value = "raw")]
    pub error_basis: BasisArg,
    /// Estimate the decoder is optimized for.
    #[arg(long, value_enum, default_value = "raw")]
    pub decoder_belief: BasisArg,
}

#[derive(Debug, Args)]
pub struct DistortionArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// N×N distortion matrix file (default: 0-1 loss).
    #[arg(long)]
    pub distortion: Option<PathBuf>,
    /// Decode with the true prior; every gap should then be zero.
    #[arg(long)]
    pub oracle_prior: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Error,
    Gap,
}

#[derive(Debug, Args)]
pub struct SlopeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "error")]
    pub field: FieldArg,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Check(args) => cmd_check(&args, stdout, stderr),
        Command::Simulate(args) => cmd_simulate(&args, stdout, stderr),
        Command::Distortion(args) => cmd_distortion(&args, stdout, stderr),
        Command::Slope(args) => cmd_slope(&args, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::NotLearnable { .. } => EXIT_NOT_LEARNABLE,
                _ => EXIT_INPUT,
            }
        }
    }
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    #[serde(flatten)]
    report: &'a LearnabilityReport,
    m: usize,
    sigma_max: f64,
    singular_values: &'a [f64],
    deterministic_encoding: &'a DeterministicEncodingReport,
}

pub fn cmd_check(args: &CheckArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let system = read_system(&args.system)?;
    let report = check_learnability(&system);
    let deterministic = analyze_deterministic_encoding(system.encoder(), system.channel());
    let spectral = system.spectral();
    let out = CheckOutput {
        report: &report,
        m: system.messages(),
        sigma_max: spectral.sigma_max,
        singular_values: &spectral.singular_values,
        deterministic_encoding: &deterministic,
    };
    writeln!(stdout, "{}", serde_json::to_string(&out)?)?;
    if report.learnable {
        Ok(EXIT_OK)
    } else {
        writeln!(
            stderr,
            "not learnable: rank {} < N = {}",
            report.numerical_rank, report.required_rank
        )?;
        Ok(EXIT_NOT_LEARNABLE)
    }
}

fn basis(arg: BasisArg) -> (ErrorBasis, DecoderBelief) {
    match arg {
        BasisArg::Raw => (ErrorBasis::Raw, DecoderBelief::Raw),
        BasisArg::Projected => (ErrorBasis::Projected, DecoderBelief::Projected),
    }
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let (scheme, channel, n) = match &args.system {
        Some(path) => {
            let system = read_system(path)?;
            let n = system.meanings();
            (
                EncoderScheme::Custom(system.encoder().clone()),
                ChannelSpec::Matrix(system.channel().clone()),
                n,
            )
        }
        None => {
            let scheme = match args.scheme.unwrap_or(SchemeArg::Well) {
                SchemeArg::Well => EncoderScheme::Well,
                SchemeArg::Moderate => EncoderScheme::Moderate,
                SchemeArg::Ill => EncoderScheme::Ill,
            };
            let channel = match &args.channel {
                Some(path) => ChannelSpec::Matrix(read_stochastic_matrix(path)?),
                None => ChannelSpec::Perfect,
            };
            (scheme, channel, args.n)
        }
    };
    let prior = match args.prior.as_str() {
        "zipf" => PriorSource::Zipf {
            exponent: args.zipf_exponent,
            shuffle: !args.no_shuffle,
        },
        "dirichlet" => PriorSource::Dirichlet {
            alpha: args.dirichlet_alpha,
        },
        path => PriorSource::File {
            path: PathBuf::from(path),
        },
    };
    if args.t_max == 0 {
        return Err(Error::InvalidConfig("--t-max must be at least 1".into()));
    }
    if args.grid == 0 {
        return Err(Error::InvalidConfig("--grid must be at least 1".into()));
    }
    let grid = log_grid(args.t_max.min(10), args.t_max, args.grid);
    Ok(ExperimentConfig::new(scheme, n)
        .with_channel(channel)
        .with_prior(prior)
        .with_grid(grid)
        .with_trials(args.trials)
        .with_seed(args.seed)
        .with_decoder_belief(basis(args.decoder_belief).1))
}

struct Finished {
    experiment: PreparedExperiment,
    curve: ConvergenceCurve,
    metadata_path: PathBuf,
}

fn metadata_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

fn execute(config: ExperimentConfig, args: &RunArgs, stderr: &mut dyn Write) -> Result<Finished> {
    let started = Instant::now();
    let experiment = PreparedExperiment::new(config)?;
    let curve = match args.parallel {
        Some(threads) => experiment.run_with_threads(threads)?,
        None => experiment.run()?,
    };
    let elapsed = started.elapsed().as_secs_f64();

    let error_basis = basis(args.error_basis).0;
    let mut csv_out = BufWriter::new(File::create(&args.out)?);
    write_curve_csv(&curve, error_basis, &mut csv_out)?;
    csv_out.flush()?;

    let metadata_path = metadata_path(&args.out);
    let metadata = ExperimentMetadata::describe(&experiment, error_basis, elapsed);
    std::fs::write(&metadata_path, serde_json::to_string_pretty(&metadata)?)?;

    writeln!(
        stderr,
        "{} trials x {} grid points in {:.2}s -> {}",
        curve.trials,
        curve.len(),
        elapsed,
        args.out.display()
    )?;
    Ok(Finished {
        experiment,
        curve,
        metadata_path,
    })
}

fn slope_or_null(curve: &ConvergenceCurve, field: SlopeField) -> Option<f64> {
    fit_loglog_slope(curve, field).ok()
}

pub fn cmd_simulate(args: &RunArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let config = build_config(args)?;
    let done = execute(config, args, stderr)?;
    let spectral = done.experiment.system.spectral();
    let summary = json!({
        "scheme": done.experiment.config.scheme.name(),
        "n": done.experiment.system.meanings(),
        "m": done.experiment.system.messages(),
        "sigma_min": spectral.sigma_min,
        "kappa": spectral.condition_number,
        "rank": spectral.numerical_rank,
        "error_slope": slope_or_null(&done.curve, SlopeField::Error),
        "projected_error_slope": slope_or_null(&done.curve, SlopeField::ProjectedError),
        "gap_slope": slope_or_null(&done.curve, SlopeField::Gap),
        "csv": args.out,
        "metadata": done.metadata_path,
    });
    writeln!(stdout, "{summary}")?;
    Ok(EXIT_OK)
}

pub fn cmd_distortion(args: &DistortionArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let mut config = build_config(&args.run)?.with_oracle_prior(args.oracle_prior);
    if let Some(path) = &args.distortion {
        config = config.with_distortion(read_distortion(path)?);
    }
    let done = execute(config, &args.run, stderr)?;
    let curve = &done.curve;
    let last = curve.len() - 1;
    let summary = json!({
        "scheme": done.experiment.config.scheme.name(),
        "n": done.experiment.system.meanings(),
        "sigma_min": done.experiment.system.spectral().sigma_min,
        "kappa": done.experiment.system.spectral().condition_number,
        "d_max": done.experiment.distortion.d_max(),
        "final_t": curve.t_values[last],
        "final_gap": curve.gap.mean[last],
        "final_gap_bound": curve.gap_bound[last],
        "final_accuracy": curve.accuracy.mean[last],
        "gap_slope": slope_or_null(curve, SlopeField::Gap),
        "csv": args.run.out,
        "metadata": done.metadata_path,
    });
    writeln!(stdout, "{summary}")?;
    Ok(EXIT_OK)
}

pub fn cmd_slope(args: &SlopeArgs, stdout: &mut dyn Write) -> Result<i32> {
    let file = File::open(&args.input).map_err(|e| Error::BadFile {
        path: args.input.display().to_string(),
        reason: e.to_string(),
    })?;
    let table = read_curve_csv(file)?;
    let values = match args.field {
        FieldArg::Error => &table.mean_error,
        FieldArg::Gap => &table.mean_gap,
    };
    let slope = loglog_slope(&table.t, values)?;
    writeln!(stdout, "{slope:.4}")?;
    Ok(EXIT_OK)
}
