// Monte Carlo learning curves for the three encoder schemes.

use semcomm::simulation::{
    fit_loglog_slope, log_grid, write_curve_csv, EncoderScheme, ErrorBasis, ExperimentConfig, PreparedExperiment,
    SlopeField,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for scheme in [EncoderScheme::Well, EncoderScheme::Moderate, EncoderScheme::Ill] {
        let config = ExperimentConfig::new(scheme, 30)
            .with_grid(log_grid(100, 10_000, 11))
            .with_trials(30)
            .with_seed(1);
        let experiment = PreparedExperiment::new(config)?;
        let curve = experiment.run()?;
        let last = curve.len() - 1;
        println!(
            "{:<9} sigma_min={:.4} error(T=1e4)={:.4} bound={:.4} slope={:.3} projected slope={:.3}",
            experiment.config.scheme.name(),
            experiment.system.spectral().sigma_min,
            curve.error.mean[last],
            curve.bound[last],
            fit_loglog_slope(&curve, SlopeField::Error)?,
            fit_loglog_slope(&curve, SlopeField::ProjectedError)?,
        );
        if matches!(experiment.config.scheme, EncoderScheme::Ill) {
            let mut csv = Vec::new();
            write_curve_csv(&curve, ErrorBasis::Raw, &mut csv)?;
            print!("{}", String::from_utf8(csv)?);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
