// Conditioning of the built-in encoder families.

use semcomm::simulation::{build_ill_conditioned, build_moderate, build_moderate_absorbed, build_well_conditioned};
use semcomm::{SemanticSystem, StochasticMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 30;
    let schemes: [(&str, StochasticMatrix); 4] = [
        ("well", build_well_conditioned(n, 42)),
        ("moderate", build_moderate(n)),
        ("moderate (absorbed diagonal)", build_moderate_absorbed(n)),
        ("ill", build_ill_conditioned(n)),
    ];
    println!("{:<30} {:>10} {:>10} {:>6}", "scheme", "sigma_min", "kappa", "rank");
    for (name, encoder) in schemes {
        let system = SemanticSystem::with_perfect_channel(encoder)?;
        let s = system.spectral();
        println!(
            "{name:<30} {:>10.4} {:>10.2} {:>6}",
            s.sigma_min, s.condition_number, s.numerical_rank
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
