// Deterministic encoders: learnability reduces to the channel columns they select.

use semcomm::spectral::{analyze_deterministic_encoding, check_learnability};
use semcomm::{SemanticSystem, StochasticMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // The third message is received exactly like the first.
    let channel = StochasticMatrix::from_rows(&[
        vec![0.9, 0.1, 0.9],
        vec![0.1, 0.9, 0.1],
        vec![0.0, 0.0, 0.0],
    ])?;

    let cases = [
        ("w0->s0, w1->s1", vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]),
        ("w0->s0, w1->s2", vec![vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]]),
        ("w0->s0, w1->s0", vec![vec![1.0, 1.0], vec![0.0, 0.0], vec![0.0, 0.0]]),
    ];
    for (label, rows) in cases {
        let encoder = StochasticMatrix::from_rows(&rows)?;
        let det = analyze_deterministic_encoding(&encoder, &channel);
        let full = check_learnability(&SemanticSystem::new(encoder, channel.clone())?);
        println!(
            "{label}: mapping={:?} injective={} learnable={} (rank check: {})",
            det.mapping, det.injective, det.learnable_given_channel, full.learnable
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
