//! Sequential transmission, encoder schemes and convergence experiments.

pub mod experiment;
pub mod output;
pub mod prior;
pub mod sampling;
pub mod schemes;
pub mod slope;

pub use experiment::{
    log_grid, run_experiment, Band, ChannelSpec, ConvergenceCurve, DecoderBelief, EncoderScheme,
    ExperimentConfig, PreparedExperiment,
};
pub use output::{read_curve_csv, write_curve_csv, CurveTable, ErrorBasis, ExperimentMetadata, CSV_HEADER};
pub use prior::{make_prior, make_prior_with, PriorSource};
pub use sampling::{sample_direct, sample_meaning, sample_observation, stream_rng, trial_rng, SimRng, RNG_IDENTITY};
pub use schemes::{
    build_ill_conditioned, build_moderate, build_moderate_absorbed, build_well_conditioned,
    build_well_conditioned_with,
};
pub use slope::{fit_loglog_slope, loglog_slope, SlopeField};
