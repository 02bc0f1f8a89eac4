//! Learnability analysis.
//!
//! A prior is recoverable from the received-symbol distribution exactly when
//! `A = CU` has full column rank. When it does not, any null vector of `A`
//! yields two distinct priors with identical observable distributions; this
//! module constructs such a pair explicitly.

use nalgebra::DVector;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::probability::ProbabilityVector;
use crate::stochastic::StochasticMatrix;
use crate::system::{numerical_rank, SemanticSystem};

/// Tolerance on `1ᵀv` before the null vector is re-projected.
const ZERO_SUM_TOLERANCE: f64 = 1e-8;

/// Null-vector entries at or below this magnitude are treated as zero.
const SUPPORT_TOLERANCE: f64 = 1e-9;

/// An entry counts as the deterministic image if it exceeds `1 - 1e-9`.
const DETERMINISTIC_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfusablePriors {
    pub p1: ProbabilityVector,
    pub p2: ProbabilityVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnabilityReport {
    pub learnable: bool,
    pub numerical_rank: usize,
    pub required_rank: usize,
    pub sigma_min: f64,
    pub condition_number: f64,
    pub witness: Option<ConfusablePriors>,
}

impl Serialize for LearnabilityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("LearnabilityReport", 6)?;
        s.serialize_field("learnable", &self.learnable)?;
        s.serialize_field("rank", &self.numerical_rank)?;
        s.serialize_field("n", &self.required_rank)?;
        s.serialize_field("sigma_min", &self.sigma_min)?;
        // JSON has no infinity; serde_json writes non-finite floats as null.
        s.serialize_field("kappa", &self.condition_number)?;
        s.serialize_field("witness", &self.witness)?;
        s.end()
    }
}

/// Full-rank test with an attached confusable-prior witness when it fails.
pub fn check_learnability(system: &SemanticSystem) -> LearnabilityReport {
    let spectral = system.spectral();
    let learnable = system.is_learnable();
    let witness = if learnable {
        None
    } else {
        // The uniform base always has mass where v⁻ > 0.
        let (p1, p2) = construct_confusable_priors(system, None)
            .expect("uniform base is valid for any rank-deficient system");
        Some(ConfusablePriors { p1, p2 })
    };
    LearnabilityReport {
        learnable,
        numerical_rank: spectral.numerical_rank,
        required_rank: system.meanings(),
        sigma_min: spectral.sigma_min,
        condition_number: spectral.condition_number,
        witness,
    }
}

/// Null vector of `A` for the smallest singular value, with `1ᵀv = 0`, unit
/// norm, and sign fixed so the first non-negligible entry is positive.
fn canonical_null_vector(system: &SemanticSystem) -> DVector<f64> {
    let mut v = system.smallest_right_singular_vector();
    let n = v.len() as f64;
    let drift = v.sum();
    if drift.abs() > ZERO_SUM_TOLERANCE {
        // Columns of A sum to one, so 1ᵀv = 1ᵀAv = 0 for an exact null vector.
        v.add_scalar_mut(-drift / n);
        v /= v.norm();
    }
    if let Some(first) = v.iter().find(|x| x.abs() > SUPPORT_TOLERANCE) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
    v
}

/// Two distinct priors `p1`, `p2 = p1 + εv` with `A p1 = A p2`.
///
/// `base` defaults to the uniform prior. `ε` is half the largest step
/// that keeps `p2` non-negative.
pub fn construct_confusable_priors(
    system: &SemanticSystem,
    base: Option<&ProbabilityVector>,
) -> Result<(ProbabilityVector, ProbabilityVector)> {
    if system.is_learnable() {
        return Err(Error::SystemLearnable {
            rank: system.spectral().numerical_rank,
        });
    }
    let n = system.meanings();
    let p1 = match base {
        Some(p) if p.len() != n => {
            return Err(Error::DimensionMismatch {
                what: "base prior length vs meanings",
                expected: n,
                found: p.len(),
            })
        }
        Some(p) => p.clone(),
        None => ProbabilityVector::uniform(n),
    };

    let v = canonical_null_vector(system);

    // γ = min over {i : v_i⁻ > 0} of p1_i / v_i⁻
    let mut gamma = f64::INFINITY;
    for (i, &vi) in v.iter().enumerate() {
        if vi < -SUPPORT_TOLERANCE {
            gamma = gamma.min(p1[i] / -vi);
        }
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::BadBase);
    }
    let epsilon = gamma / 2.0;

    let p2: Vec<f64> = p1
        .iter()
        .zip(v.iter())
        .map(|(&p, &vi)| {
            // Entries outside the support of v stay untouched.
            if vi.abs() <= SUPPORT_TOLERANCE {
                p
            } else {
                p + epsilon * vi
            }
        })
        .collect();
    let p2 = ProbabilityVector::new(p2)?;
    Ok((p1, p2))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeterministicEncodingReport {
    pub is_deterministic: bool,
    /// `mapping[w]` is the message that meaning `w` is always encoded to.
    pub mapping: Option<Vec<usize>>,
    pub injective: bool,
    pub learnable_given_channel: bool,
}

/// Detects a deterministic encoder and decides learnability from the
/// channel columns it selects.
///
/// A many-to-one encoder is never learnable. A one-to-one encoder is
/// learnable iff the selected channel columns are linearly independent.
pub fn analyze_deterministic_encoding(
    encoder: &StochasticMatrix,
    channel: &StochasticMatrix,
) -> DeterministicEncodingReport {
    let not_deterministic = DeterministicEncodingReport {
        is_deterministic: false,
        mapping: None,
        injective: false,
        learnable_given_channel: false,
    };

    let mut mapping = Vec::with_capacity(encoder.inputs());
    for w in 0..encoder.inputs() {
        let col = encoder.column(w);
        match col.iter().position(|&x| x > 1.0 - DETERMINISTIC_TOLERANCE) {
            Some(s) => mapping.push(s),
            None => return not_deterministic,
        }
    }

    let mut seen = vec![false; encoder.outputs()];
    let injective = mapping.iter().all(|&s| !std::mem::replace(&mut seen[s], true));

    let learnable_given_channel = injective
        && channel.inputs() == encoder.outputs()
        && {
            let selected = channel.matrix().select_columns(mapping.iter());
            numerical_rank(&selected) == mapping.len()
        };

    DeterministicEncodingReport {
        is_deterministic: true,
        mapping: Some(mapping),
        injective,
        learnable_given_channel,
    }
}
