// Excess distortion of decoding with an estimated prior, against its bound.

use semcomm::simulation::{log_grid, EncoderScheme, ExperimentConfig, PreparedExperiment};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for scheme in [EncoderScheme::Well, EncoderScheme::Moderate, EncoderScheme::Ill] {
        let config = ExperimentConfig::new(scheme, 30)
            .with_grid(log_grid(10, 10_000, 4))
            .with_trials(30)
            .with_seed(3);
        let experiment = PreparedExperiment::new(config)?;
        let curve = experiment.run()?;
        println!("{}:", experiment.config.scheme.name());
        for i in 0..curve.len() {
            println!(
                "  T={:>6} gap={:.5} bound={:.3} accuracy={:.3}",
                curve.t_values[i], curve.gap.mean[i], curve.gap_bound[i], curve.accuracy.mean[i]
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
