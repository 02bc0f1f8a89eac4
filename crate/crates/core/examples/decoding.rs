// Belief-optimal decoding and the cost of a wrong belief.

use semcomm::decoding::{distortion_gap, optimal_decoder, semantic_distortion};
use semcomm::{DistortionMatrix, ProbabilityVector, SemanticSystem, StochasticMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let d = DistortionMatrix::zero_one(2);

    let system = SemanticSystem::new(StochasticMatrix::identity(2), StochasticMatrix::binary_symmetric(0.1)?)?;
    let prior = ProbabilityVector::new(vec![0.7, 0.3])?;
    let decoder = optimal_decoder(prior.as_slice(), &system, &d)?;
    println!(
        "flip 0.1: map={:?} distortion={:.3}",
        decoder.map,
        semantic_distortion(&prior, &system, &d, &decoder)?
    );

    let system = SemanticSystem::new(StochasticMatrix::identity(2), StochasticMatrix::binary_symmetric(0.4)?)?;
    let truth = ProbabilityVector::new(vec![0.55, 0.45])?;
    let believed = [0.35, 0.65];
    println!(
        "flip 0.4: true map={:?} believed map={:?} gap={:.3}",
        optimal_decoder(truth.as_slice(), &system, &d)?.map,
        optimal_decoder(&believed, &system, &d)?.map,
        distortion_gap(&truth, &believed, &system, &d)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
