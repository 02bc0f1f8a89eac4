//! CSV and JSON outputs of convergence experiments.

use std::io::{Read, Write};

use serde::Serialize;

use super::experiment::{ConvergenceCurve, PreparedExperiment};
use super::sampling::RNG_IDENTITY;
use crate::error::{Error, Result};

/// Fixed column order of the convergence CSV.
pub const CSV_HEADER: [&str; 9] = [
    "t",
    "mean_error",
    "ci_low",
    "ci_high",
    "bound",
    "mean_gap",
    "gap_ci_low",
    "gap_ci_high",
    "gap_bound",
];

/// Which estimate fills the `mean_error`/`ci_low`/`ci_high` columns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorBasis {
    #[default]
    Raw,
    Projected,
}

pub fn write_curve_csv<W: Write>(curve: &ConvergenceCurve, basis: ErrorBasis, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let error = match basis {
        ErrorBasis::Raw => &curve.error,
        ErrorBasis::Projected => &curve.projected_error,
    };
    for k in 0..curve.len() {
        w.write_record(&[
            curve.t_values[k].to_string(),
            error.mean[k].to_string(),
            error.ci_low[k].to_string(),
            error.ci_high[k].to_string(),
            curve.bound[k].to_string(),
            curve.gap.mean[k].to_string(),
            curve.gap.ci_low[k].to_string(),
            curve.gap.ci_high[k].to_string(),
            curve.gap_bound[k].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns read back from a convergence CSV.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurveTable {
    pub t: Vec<f64>,
    pub mean_error: Vec<f64>,
    pub bound: Vec<f64>,
    pub mean_gap: Vec<f64>,
    pub gap_bound: Vec<f64>,
}

pub fn read_curve_csv<R: Read>(input: R) -> Result<CurveTable> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::InvalidConfig(format!("missing column {name:?}")))
    };
    let (ti, ei, bi, gi, gbi) = (
        column("t")?,
        column("mean_error")?,
        column("bound")?,
        column("mean_gap")?,
        column("gap_bound")?,
    );
    let mut table = CurveTable::default();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("not a number: {raw:?}")))
        };
        table.t.push(field(ti)?);
        table.mean_error.push(field(ei)?);
        table.bound.push(field(bi)?);
        table.mean_gap.push(field(gi)?);
        table.gap_bound.push(field(gbi)?);
    }
    Ok(table)
}

/// JSON sidecar describing how a curve was produced.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentMetadata {
    pub scheme: &'static str,
    pub n_meanings: usize,
    pub n_messages: usize,
    pub channel: &'static str,
    pub prior_source: super::prior::PriorSource,
    pub prior: Vec<f64>,
    pub t_grid: Vec<u64>,
    pub trials: usize,
    pub master_seed: u64,
    pub decoder_belief: super::experiment::DecoderBelief,
    pub oracle_prior: bool,
    pub error_basis: ErrorBasis,
    pub d_max: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub kappa: f64,
    pub rank: usize,
    pub rng: &'static str,
    pub version: &'static str,
    pub wall_time_secs: f64,
}

impl ExperimentMetadata {
    pub fn describe(experiment: &PreparedExperiment, basis: ErrorBasis, wall_time_secs: f64) -> Self {
        let config = &experiment.config;
        let spectral = experiment.system.spectral();
        Self {
            scheme: config.scheme.name(),
            n_meanings: experiment.system.meanings(),
            n_messages: experiment.system.messages(),
            channel: match config.channel {
                super::experiment::ChannelSpec::Perfect => "perfect",
                super::experiment::ChannelSpec::Matrix(_) => "matrix",
            },
            prior_source: config.prior.clone(),
            prior: experiment.prior.as_slice().to_vec(),
            t_grid: config.t_grid.clone(),
            trials: config.trials,
            master_seed: config.master_seed,
            decoder_belief: config.decoder_belief,
            oracle_prior: config.oracle_prior,
            error_basis: basis,
            d_max: experiment.distortion.d_max(),
            sigma_min: spectral.sigma_min,
            sigma_max: spectral.sigma_max,
            kappa: spectral.condition_number,
            rank: spectral.numerical_rank,
            rng: RNG_IDENTITY,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_secs,
        }
    }
}
