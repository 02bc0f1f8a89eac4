// Recover a prior from received symbols with the pseudoinverse.

use semcomm::estimation::{convergence_bound, estimate_from_counts, estimate_prior, estimation_error};
use semcomm::simulation::{sample_meaning, sample_observation, stream_rng};
use semcomm::{ObservationCounter, ProbabilityVector, SemanticSystem, StochasticMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let system = SemanticSystem::new(StochasticMatrix::identity(2), StochasticMatrix::binary_symmetric(0.1)?)?;
    let truth = ProbabilityVector::new(vec![0.7, 0.3])?;

    let exact = estimate_prior(&system, &system.observe(&truth)?)?;
    println!("from exact observation (0.66, 0.34): {:?}", exact.raw);

    let mut rng = stream_rng(7, 0);
    let mut counter = ObservationCounter::new(system.messages());
    for t in 1..=10_000u64 {
        let w = sample_meaning(&truth, &mut rng);
        counter.record(sample_observation(&system, w, &mut rng))?;
        if [10, 100, 1_000, 10_000].contains(&t) {
            let est = estimate_from_counts(&system, &counter)?;
            println!(
                "T={t:>6}  raw={:?}  error={:.4}  bound={:.4}",
                est.raw.iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>(),
                estimation_error(&est.raw, &truth)?,
                convergence_bound(system.messages(), system.spectral().sigma_min, t)?
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
