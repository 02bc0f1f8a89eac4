// Full-rank check and a pair of priors the receiver cannot tell apart.

use semcomm::spectral::check_learnability;
use semcomm::{SemanticSystem, StochasticMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let noisy = SemanticSystem::new(StochasticMatrix::identity(2), StochasticMatrix::binary_symmetric(0.1)?)?;
    let report = check_learnability(&noisy);
    println!(
        "BSC(0.1): learnable={} rank={} sigma_min={:.3} kappa={:.3}",
        report.learnable, report.numerical_rank, report.sigma_min, report.condition_number
    );

    // Both meanings are sent as the first message.
    let merged = StochasticMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]])?;
    let merged = SemanticSystem::with_perfect_channel(merged)?;
    let report = check_learnability(&merged);
    println!("merged: learnable={} rank={}", report.learnable, report.numerical_rank);
    if let Some(w) = &report.witness {
        let o1 = merged.observe(&w.p1)?;
        let o2 = merged.observe(&w.p2)?;
        println!("  p1 = {:?} -> {:?}", w.p1.as_slice(), o1.as_slice());
        println!("  p2 = {:?} -> {:?}", w.p2.as_slice(), o2.as_slice());
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
