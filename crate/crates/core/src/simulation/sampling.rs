//! Seeded sampling of meanings and received messages.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::probability::ProbabilityVector;
use crate::system::SemanticSystem;

/// Generator used for every randomized step.
pub type SimRng = ChaCha8Rng;

/// Human-readable identity of the generator and seeding scheme, recorded in
/// experiment metadata.
pub const RNG_IDENTITY: &str =
    "rand_chacha 0.9 ChaCha8Rng; stream k of seed_from_u64(master_seed); trial i uses stream i, \
     encoder perturbation uses stream 2^64-1, prior shuffle/draw uses stream 2^64-2";

pub(crate) const ENCODER_STREAM: u64 = u64::MAX;
pub(crate) const PRIOR_STREAM: u64 = u64::MAX - 1;

/// Independent generator `stream` derived from `master_seed`.
pub fn stream_rng(master_seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// Generator for trial `trial`.
pub fn trial_rng(master_seed: u64, trial: u64) -> SimRng {
    stream_rng(master_seed, trial)
}

/// Inverse-CDF lookup of `u ∈ [0, 1)` in the cumulative sums of `weights`.
///
/// If rounding leaves the total just below `u`, the last outcome with
/// positive weight is returned.
pub fn sample_categorical(weights: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            cumulative += w;
            last_positive = i;
            if u < cumulative {
                return i;
            }
        }
    }
    last_positive
}

pub fn sample_meaning<R: Rng + ?Sized>(prior: &ProbabilityVector, rng: &mut R) -> usize {
    sample_categorical(prior.as_slice(), rng.random::<f64>())
}

/// Two-stage draw: encode `meaning` through `U`, then pass the message
/// through `C`. Returns the received message index.
pub fn sample_observation<R: Rng + ?Sized>(system: &SemanticSystem, meaning: usize, rng: &mut R) -> usize {
    let sent = sample_categorical(system.encoder().column(meaning), rng.random::<f64>());
    sample_categorical(system.channel().column(sent), rng.random::<f64>())
}

/// One-stage draw from column `meaning` of `A`.
pub fn sample_direct<R: Rng + ?Sized>(system: &SemanticSystem, meaning: usize, rng: &mut R) -> usize {
    sample_categorical(system.effective_column(meaning), rng.random::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::StochasticMatrix;

    fn frequencies(draws: impl Iterator<Item = usize>, k: usize) -> Vec<f64> {
        let mut counts = vec![0usize; k];
        let mut total = 0;
        for d in draws {
            counts[d] += 1;
            total += 1;
        }
        counts.iter().map(|&c| c as f64 / total as f64).collect()
    }

    fn total_variation(a: &[f64], b: &[f64]) -> f64 {
        0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
    }

    #[test]
    fn categorical_edges() {
        assert_eq!(sample_categorical(&[0.0, 1.0, 0.0], 0.0), 1);
        assert_eq!(sample_categorical(&[0.5, 0.5], 0.4999), 0);
        assert_eq!(sample_categorical(&[0.5, 0.5], 0.5), 1);
        // total slightly below u
        assert_eq!(sample_categorical(&[0.3, 0.3, 0.0], 0.9999), 1);
    }

    #[test]
    fn point_mass_always_hit() {
        let p = ProbabilityVector::point_mass(5, 3);
        let mut rng = trial_rng(9, 0);
        assert!((0..1000).all(|_| sample_meaning(&p, &mut rng) == 3));
    }

    #[test]
    fn meaning_frequency_matches_prior() {
        let p = ProbabilityVector::new(vec![0.7, 0.3]).unwrap();
        let mut rng = trial_rng(1, 0);
        let f = frequencies((0..100_000).map(|_| sample_meaning(&p, &mut rng)), 2);
        assert!((f[0] - 0.7).abs() < 0.01, "{f:?}");
    }

    #[test]
    fn uniform_chi_square() {
        // 0.999 quantile of chi-square with 29 degrees of freedom
        const CHI2_29_999: f64 = 58.30;
        let n = 30;
        let draws = 100_000;
        let p = ProbabilityVector::uniform(n);
        let mut rng = trial_rng(2, 0);
        let mut counts = vec![0f64; n];
        for _ in 0..draws {
            counts[sample_meaning(&p, &mut rng)] += 1.0;
        }
        let expected = draws as f64 / n as f64;
        let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        assert!(chi2 < CHI2_29_999, "chi2 = {chi2}");
    }

    #[test]
    fn noiseless_pipeline_is_deterministic() {
        let sys = SemanticSystem::with_perfect_channel(StochasticMatrix::identity(4)).unwrap();
        let mut rng = trial_rng(3, 0);
        for w in 0..4 {
            for _ in 0..50 {
                assert_eq!(sample_observation(&sys, w, &mut rng), w);
            }
        }
    }

    #[test]
    fn two_stage_matches_effective_column() {
        let sys = SemanticSystem::new(
            StochasticMatrix::identity(2),
            StochasticMatrix::binary_symmetric(0.1).unwrap(),
        )
        .unwrap();
        let mut rng = trial_rng(4, 0);
        let f = frequencies((0..100_000).map(|_| sample_observation(&sys, 0, &mut rng)), 2);
        assert!((f[0] - 0.9).abs() < 0.01, "{f:?}");

        let u = StochasticMatrix::from_rows(&[
            vec![0.5, 0.1, 0.2],
            vec![0.3, 0.6, 0.2],
            vec![0.2, 0.3, 0.6],
        ])
        .unwrap();
        let c = StochasticMatrix::from_rows(&[
            vec![0.8, 0.1, 0.3],
            vec![0.1, 0.7, 0.3],
            vec![0.1, 0.2, 0.4],
        ])
        .unwrap();
        let sys = SemanticSystem::new(u, c).unwrap();
        for w in 0..3 {
            let two = frequencies((0..100_000).map(|_| sample_observation(&sys, w, &mut rng)), 3);
            let one = frequencies((0..100_000).map(|_| sample_direct(&sys, w, &mut rng)), 3);
            assert!(total_variation(&two, sys.effective_column(w)) < 0.01);
            assert!(total_variation(&two, &one) < 0.01);
        }
    }

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let a: Vec<u64> = (0..4).map(|_| trial_rng(5, 0).random()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let x: u64 = trial_rng(5, 0).random();
        let y: u64 = trial_rng(5, 1).random();
        assert_ne!(x, y);
    }
}
