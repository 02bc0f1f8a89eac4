//! Synthetic and file-backed meaning priors.

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use super::sampling::SimRng;
use crate::error::{Error, Result};
use crate::interchange::read_probability_vector;
use crate::probability::ProbabilityVector;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PriorSource {
    /// `p_i ∝ 1 / (i + 1)^exponent`, optionally shuffled.
    Zipf { exponent: f64, shuffle: bool },
    /// One draw from a symmetric Dirichlet.
    Dirichlet { alpha: f64 },
    /// CSV column or JSON array on disk.
    File { path: PathBuf },
    /// A prior given directly.
    Explicit { prior: ProbabilityVector },
}

impl Default for PriorSource {
    fn default() -> Self {
        PriorSource::Zipf {
            exponent: 1.0,
            shuffle: true,
        }
    }
}

pub fn make_prior(source: &PriorSource, n: usize, seed: u64) -> Result<ProbabilityVector> {
    make_prior_with(source, n, &mut SimRng::seed_from_u64(seed))
}

pub fn make_prior_with<R: Rng + ?Sized>(source: &PriorSource, n: usize, rng: &mut R) -> Result<ProbabilityVector> {
    if n == 0 {
        return Err(Error::BadParams("prior needs at least one meaning".into()));
    }
    match source {
        PriorSource::Zipf { exponent, shuffle } => {
            if exponent.is_nan() || *exponent <= 0.0 {
                return Err(Error::BadParams(format!("zipf exponent must be > 0, got {exponent}")));
            }
            let mut weights: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-exponent)).collect();
            if *shuffle {
                weights.shuffle(rng);
            }
            normalized(weights)
        }
        PriorSource::Dirichlet { alpha } => {
            if !alpha.is_finite() || *alpha <= 0.0 {
                return Err(Error::BadParams(format!("dirichlet alpha must be > 0, got {alpha}")));
            }
            let gamma = Gamma::new(*alpha, 1.0).map_err(|e| Error::BadParams(e.to_string()))?;
            let weights: Vec<f64> = (0..n).map(|_| gamma.sample(rng)).collect();
            if weights.iter().sum::<f64>() <= 0.0 {
                return Err(Error::BadParams(format!(
                    "dirichlet alpha {alpha} underflowed every component"
                )));
            }
            normalized(weights)
        }
        PriorSource::File { path } => {
            let prior = read_probability_vector(path)?;
            if prior.len() != n {
                return Err(Error::BadFile {
                    path: path.display().to_string(),
                    reason: format!("prior has {} entries, expected {n}", prior.len()),
                });
            }
            Ok(prior)
        }
        PriorSource::Explicit { prior } => {
            if prior.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "explicit prior length vs meanings",
                    expected: n,
                    found: prior.len(),
                });
            }
            Ok(prior.clone())
        }
    }
}

fn normalized(weights: Vec<f64>) -> Result<ProbabilityVector> {
    let total: f64 = weights.iter().sum();
    ProbabilityVector::new(weights.into_iter().map(|w| w / total).collect())
}
