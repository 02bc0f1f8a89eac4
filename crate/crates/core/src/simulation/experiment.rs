//! Multi-trial convergence experiments.
//!
//! Each trial streams observations through one counter and snapshots the
//! prior estimate at every grid point, so a trial costs `O(T_max)` draws
//! regardless of the grid size.

use rayon::prelude::*;
use serde::Serialize;

use super::prior::{make_prior_with, PriorSource};
use super::sampling::{sample_meaning, sample_observation, stream_rng, trial_rng, ENCODER_STREAM, PRIOR_STREAM};
use super::schemes::{build_ill_conditioned, build_moderate, build_well_conditioned_with, WELL_PERTURBATION};
use crate::decoding::{classification_accuracy, distortion_gap_bound, gap_against, optimal_decoder, DecoderTable};
use crate::distortion::DistortionMatrix;
use crate::error::{Error, Result};
use crate::estimation::{convergence_bound, estimate_from_counts, estimation_error, ObservationCounter};
use crate::probability::ProbabilityVector;
use crate::stochastic::StochasticMatrix;
use crate::system::SemanticSystem;

/// z-score of the two-sided 95% normal interval.
const Z_95: f64 = 1.96;

#[derive(Clone, Debug, PartialEq)]
pub enum EncoderScheme {
    Well,
    Moderate,
    Ill,
    /// An encoder loaded from a file or built by the caller.
    Custom(StochasticMatrix),
}

impl EncoderScheme {
    pub fn name(&self) -> &'static str {
        match self {
            EncoderScheme::Well => "well",
            EncoderScheme::Moderate => "moderate",
            EncoderScheme::Ill => "ill",
            EncoderScheme::Custom(_) => "file",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub enum ChannelSpec {
    /// Identity channel.
    #[default]
    Perfect,
    Matrix(StochasticMatrix),
}

/// Which prior estimate the receiver's decoder is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderBelief {
    /// Signed pseudoinverse solution.
    #[default]
    Raw,
    /// Simplex projection of the raw solution.
    Projected,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n_meanings: usize,
    pub scheme: EncoderScheme,
    pub channel: ChannelSpec,
    pub prior: PriorSource,
    /// Strictly ascending snapshot sizes.
    pub t_grid: Vec<u64>,
    pub trials: usize,
    pub master_seed: u64,
    /// `None` means 0-1 loss.
    pub distortion: Option<DistortionMatrix>,
    pub decoder_belief: DecoderBelief,
    /// Decode with the true prior instead of the estimate.
    pub oracle_prior: bool,
}

impl ExperimentConfig {
    /// Defaults: perfect channel, shuffled Zipf(1) prior, 20-point log grid
    /// over `[10, 10⁴]`, 100 trials, seed 0, 0-1 loss, raw-belief decoder.
    pub fn new(scheme: EncoderScheme, n_meanings: usize) -> Self {
        Self {
            n_meanings,
            scheme,
            channel: ChannelSpec::Perfect,
            prior: PriorSource::default(),
            t_grid: log_grid(10, 10_000, 20),
            trials: 100,
            master_seed: 0,
            distortion: None,
            decoder_belief: DecoderBelief::Raw,
            oracle_prior: false,
        }
    }

    pub fn with_prior(mut self, prior: PriorSource) -> Self {
        self.prior = prior;
        self
    }

    pub fn with_channel(mut self, channel: ChannelSpec) -> Self {
        self.channel = channel;
        self
    }

    pub fn with_grid(mut self, t_grid: Vec<u64>) -> Self {
        self.t_grid = t_grid;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    pub fn with_distortion(mut self, distortion: DistortionMatrix) -> Self {
        self.distortion = Some(distortion);
        self
    }

    pub fn with_decoder_belief(mut self, belief: DecoderBelief) -> Self {
        self.decoder_belief = belief;
        self
    }

    pub fn with_oracle_prior(mut self, oracle: bool) -> Self {
        self.oracle_prior = oracle;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.t_grid.is_empty() {
            return Err(Error::InvalidConfig("t_grid is empty".into()));
        }
        if self.t_grid[0] == 0 {
            return Err(Error::InvalidConfig("t_grid entries must be >= 1".into()));
        }
        if self.t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("t_grid must be strictly ascending".into()));
        }
        match &self.scheme {
            EncoderScheme::Custom(u) if u.inputs() != self.n_meanings => Err(Error::InvalidConfig(format!(
                "encoder has {} meanings but n_meanings = {}",
                u.inputs(),
                self.n_meanings
            ))),
            EncoderScheme::Custom(_) => Ok(()),
            _ if self.n_meanings < 2 => Err(Error::InvalidConfig("built-in schemes need n >= 2".into())),
            _ => Ok(()),
        }
    }
}

/// `count` integer points spaced evenly in `log10` over `[lo, hi]`, rounded
/// and deduplicated.
pub fn log_grid(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    assert!(lo >= 1 && hi >= lo, "log grid needs 1 <= lo <= hi");
    if count <= 1 || lo == hi {
        return vec![hi];
    }
    let (a, b) = ((lo as f64).log10(), (hi as f64).log10());
    let mut grid: Vec<u64> = (0..count)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (count - 1) as f64).round() as u64)
        .collect();
    grid.dedup();
    grid
}

/// Trial-wise mean with a normal-approximation 95% interval.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Band {
    pub mean: Vec<f64>,
    pub ci_low: Vec<f64>,
    pub ci_high: Vec<f64>,
}

impl Band {
    /// `samples[trial][point]`, reduced in ascending trial order.
    fn from_trials(samples: &[Vec<f64>], points: usize) -> Self {
        let n = samples.len() as f64;
        let mut band = Band::default();
        for k in 0..points {
            let mut sum = 0.0;
            for trial in samples {
                sum += trial[k];
            }
            let mean = sum / n;
            let half = if samples.len() > 1 {
                let mut ss = 0.0;
                for trial in samples {
                    ss += (trial[k] - mean).powi(2);
                }
                Z_95 * (ss / (n - 1.0)).sqrt() / n.sqrt()
            } else {
                0.0
            };
            band.mean.push(mean);
            band.ci_low.push(mean - half);
            band.ci_high.push(mean + half);
        }
        band
    }
}

/// Trial-averaged learning curves with their theoretical bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceCurve {
    pub t_values: Vec<u64>,
    /// `‖A† p̂_T(ŝ) − p‖₂`
    pub error: Band,
    /// `‖Π(A† p̂_T(ŝ)) − p‖₂` with `Π` the simplex projection.
    pub projected_error: Band,
    /// `√M / (2 σ_min √T)`
    pub bound: Vec<f64>,
    /// Distortion gap of the estimated-prior decoder.
    pub gap: Band,
    /// `d_max √(NM) / (σ_min √T)`
    pub gap_bound: Vec<f64>,
    /// 0-1 accuracy of the estimated-prior decoder.
    pub accuracy: Band,
    pub trials: usize,
}

impl ConvergenceCurve {
    pub fn len(&self) -> usize {
        self.t_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_values.is_empty()
    }
}

/// A configuration resolved into a concrete system and prior.
#[derive(Clone, Debug)]
pub struct PreparedExperiment {
    pub config: ExperimentConfig,
    pub system: SemanticSystem,
    pub prior: ProbabilityVector,
    pub distortion: DistortionMatrix,
    matched: DecoderTable,
}

struct TrialResult {
    error: Vec<f64>,
    projected_error: Vec<f64>,
    gap: Vec<f64>,
    accuracy: Vec<f64>,
}

impl PreparedExperiment {
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let n = config.n_meanings;
        let encoder = match &config.scheme {
            EncoderScheme::Well => build_well_conditioned_with(
                n,
                WELL_PERTURBATION,
                &mut stream_rng(config.master_seed, ENCODER_STREAM),
            ),
            EncoderScheme::Moderate => build_moderate(n),
            EncoderScheme::Ill => build_ill_conditioned(n),
            EncoderScheme::Custom(u) => u.clone(),
        };
        let system = match &config.channel {
            ChannelSpec::Perfect => SemanticSystem::with_perfect_channel(encoder)?,
            ChannelSpec::Matrix(c) => SemanticSystem::new(encoder, c.clone())?,
        };
        if !system.is_learnable() {
            return Err(Error::NotLearnable {
                rank: system.spectral().numerical_rank,
                required: n,
            });
        }
        let prior = make_prior_with(&config.prior, n, &mut stream_rng(config.master_seed, PRIOR_STREAM))?;
        let distortion = match &config.distortion {
            Some(d) if d.meanings() != n => {
                return Err(Error::DimensionMismatch {
                    what: "distortion matrix size vs meanings",
                    expected: n,
                    found: d.meanings(),
                })
            }
            Some(d) => d.clone(),
            None => DistortionMatrix::zero_one(n),
        };
        let matched = optimal_decoder(prior.as_slice(), &system, &distortion)?;
        Ok(Self {
            config,
            system,
            prior,
            distortion,
            matched,
        })
    }

    fn run_trial(&self, trial: usize) -> Result<TrialResult> {
        let grid = &self.config.t_grid;
        let mut rng = trial_rng(self.config.master_seed, trial as u64);
        let mut counter = ObservationCounter::new(self.system.messages());
        let mut out = TrialResult {
            error: Vec::with_capacity(grid.len()),
            projected_error: Vec::with_capacity(grid.len()),
            gap: Vec::with_capacity(grid.len()),
            accuracy: Vec::with_capacity(grid.len()),
        };
        for &t in grid {
            while counter.total() < t {
                let meaning = sample_meaning(&self.prior, &mut rng);
                counter.record(sample_observation(&self.system, meaning, &mut rng))?;
            }
            let estimate = estimate_from_counts(&self.system, &counter)?;
            out.error.push(estimation_error(&estimate.raw, &self.prior)?);
            out.projected_error
                .push(estimation_error(estimate.projected.as_slice(), &self.prior)?);

            let belief = if self.config.oracle_prior {
                self.prior.as_slice()
            } else {
                match self.config.decoder_belief {
                    DecoderBelief::Raw => estimate.raw.as_slice(),
                    DecoderBelief::Projected => estimate.projected.as_slice(),
                }
            };
            let decoder = optimal_decoder(belief, &self.system, &self.distortion)?;
            out.gap.push(gap_against(
                &self.prior,
                &decoder,
                &self.matched,
                &self.system,
                &self.distortion,
            )?);
            out.accuracy
                .push(classification_accuracy(&self.prior, &self.system, &decoder)?);
        }
        Ok(out)
    }

    /// Runs all trials on the current rayon pool. Output does not depend on
    /// the number of threads.
    pub fn run(&self) -> Result<ConvergenceCurve> {
        let results: Vec<TrialResult> = (0..self.config.trials)
            .into_par_iter()
            .map(|trial| self.run_trial(trial))
            .collect::<Result<_>>()?;
        self.aggregate(&results)
    }

    /// Runs on a dedicated pool with `threads` workers.
    pub fn run_with_threads(&self, threads: usize) -> Result<ConvergenceCurve> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        pool.install(|| self.run())
    }

    fn aggregate(&self, results: &[TrialResult]) -> Result<ConvergenceCurve> {
        let points = self.config.t_grid.len();
        let collect = |f: fn(&TrialResult) -> &Vec<f64>| -> Vec<Vec<f64>> {
            results.iter().map(|r| f(r).clone()).collect()
        };
        let spectral = self.system.spectral();
        let (m, n) = (self.system.messages(), self.system.meanings());
        let bound = self
            .config
            .t_grid
            .iter()
            .map(|&t| convergence_bound(m, spectral.sigma_min, t))
            .collect::<Result<Vec<_>>>()?;
        let gap_bound = self
            .config
            .t_grid
            .iter()
            .map(|&t| distortion_gap_bound(self.distortion.d_max(), n, m, spectral.sigma_min, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConvergenceCurve {
            t_values: self.config.t_grid.clone(),
            error: Band::from_trials(&collect(|r| &r.error), points),
            projected_error: Band::from_trials(&collect(|r| &r.projected_error), points),
            bound,
            gap: Band::from_trials(&collect(|r| &r.gap), points),
            gap_bound,
            accuracy: Band::from_trials(&collect(|r| &r.accuracy), points),
            trials: results.len(),
        })
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ConvergenceCurve> {
    PreparedExperiment::new(config.clone())?.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bsc_config() -> ExperimentConfig {
        ExperimentConfig::new(EncoderScheme::Custom(StochasticMatrix::identity(2)), 2)
            .with_channel(ChannelSpec::Matrix(StochasticMatrix::binary_symmetric(0.1).unwrap()))
            .with_prior(PriorSource::Explicit {
                prior: ProbabilityVector::new(vec![0.7, 0.3]).unwrap(),
            })
    }

    #[test]
    fn grid_shapes() {
        let g = log_grid(10, 10_000, 20);
        assert_eq!(g.len(), 20);
        assert_eq!((g[0], g[19]), (10, 10_000));
        let g = log_grid(100, 10_000, 21);
        assert_eq!((g[0], g[10], g[20]), (100, 1000, 10_000));
        assert_eq!(log_grid(10, 10, 20), vec![10]);
        assert_eq!(log_grid(1, 3, 10), vec![1, 2, 3]);
    }

    #[test]
    fn identity_error_shrinks() {
        let cfg = ExperimentConfig::new(EncoderScheme::Custom(StochasticMatrix::identity(5)), 5)
            .with_grid(vec![10, 100])
            .with_trials(100)
            .with_seed(17);
        let curve = run_experiment(&cfg).unwrap();
        assert!(curve.error.mean[1] < curve.error.mean[0]);
    }

    #[test]
    fn bsc_mean_error_below_bound() {
        let curve = run_experiment(&bsc_config().with_grid(vec![100]).with_trials(1000).with_seed(1)).unwrap();
        assert!(curve.bound[0] > 0.0883 && curve.bound[0] < 0.0884);
        assert!(curve.error.mean[0] <= 0.0884, "{:?}", curve.error);
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let cfg = bsc_config().with_grid(vec![10, 50, 200]).with_trials(20).with_seed(99);
        let prepared = PreparedExperiment::new(cfg).unwrap();
        let a = prepared.run_with_threads(1).unwrap();
        let b = prepared.run_with_threads(4).unwrap();
        assert_eq!(a, b);
        let c = prepared.run().unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn band_ordering_and_decreasing_bounds() {
        let cfg = ExperimentConfig::new(EncoderScheme::Moderate, 6)
            .with_grid(log_grid(10, 1000, 8))
            .with_trials(30)
            .with_seed(3);
        let curve = run_experiment(&cfg).unwrap();
        for band in [&curve.error, &curve.projected_error, &curve.gap, &curve.accuracy] {
            for k in 0..curve.len() {
                assert!(band.ci_low[k] <= band.mean[k] && band.mean[k] <= band.ci_high[k]);
            }
        }
        assert!(curve.bound.windows(2).all(|w| w[1] < w[0]));
        assert!(curve.gap_bound.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn single_trial_has_zero_width_band() {
        let curve = run_experiment(&bsc_config().with_grid(vec![10]).with_trials(1)).unwrap();
        assert_eq!(curve.error.ci_low, curve.error.mean);
        assert_eq!(curve.error.ci_high, curve.error.mean);
    }

    #[test]
    fn oracle_prior_has_no_gap() {
        let cfg = ExperimentConfig::new(EncoderScheme::Ill, 8)
            .with_grid(vec![10, 100])
            .with_trials(10)
            .with_oracle_prior(true);
        let curve = run_experiment(&cfg).unwrap();
        assert!(curve.gap.mean.iter().all(|&g| g.abs() <= 1e-9));
    }

    #[test]
    fn rejects_bad_configs() {
        let base = bsc_config();
        assert!(matches!(
            run_experiment(&base.clone().with_trials(0)),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            run_experiment(&base.clone().with_grid(vec![10, 10])),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            run_experiment(&base.clone().with_grid(vec![0, 10])),
            Err(Error::InvalidConfig(_))
        ));
        let merged = StochasticMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let cfg = ExperimentConfig::new(EncoderScheme::Custom(merged), 2);
        assert!(matches!(run_experiment(&cfg), Err(Error::NotLearnable { .. })));
    }
}
