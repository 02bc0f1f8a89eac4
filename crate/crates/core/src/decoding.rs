//! Belief-optimal semantic decoders and the distortion they incur.
//!
//! For a belief `q` over meanings, the weighted distortion of decoding
//! received message `ŝ` as `ŵ` is
//!
//! ```text
//! ψ_q(ŵ, ŝ) = Σ_w q(w) · A[ŝ, w] · d(w, ŵ)
//! ```
//!
//! since `Σ_s u(s|w) c(ŝ|s) = A[ŝ, w]`. The optimal decoder picks the
//! argmin of `ψ_q` independently for every `ŝ`.

use serde::Serialize;

use crate::distortion::DistortionMatrix;
use crate::error::{Error, Result};
use crate::probability::ProbabilityVector;
use crate::system::SemanticSystem;

/// Gaps in `[-GAP_CLAMP, 0)` are floating-point noise and reported as zero.
const GAP_CLAMP: f64 = 1e-12;

/// A deterministic decoding rule `ŝ -> ŵ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecoderTable {
    pub map: Vec<usize>,
    pub belief: Vec<f64>,
}

impl DecoderTable {
    /// A decoding rule not tied to any belief.
    pub fn from_map(map: Vec<usize>) -> Self {
        Self { map, belief: Vec::new() }
    }

    pub fn decode(&self, received: usize) -> usize {
        self.map[received]
    }
}

fn check_belief(belief: &[f64], system: &SemanticSystem) -> Result<()> {
    if belief.len() != system.meanings() {
        return Err(Error::DimensionMismatch {
            what: "belief length vs meanings",
            expected: system.meanings(),
            found: belief.len(),
        });
    }
    Ok(())
}

fn check_distortion(d: &DistortionMatrix, system: &SemanticSystem) -> Result<()> {
    if d.meanings() != system.meanings() {
        return Err(Error::DimensionMismatch {
            what: "distortion matrix size vs meanings",
            expected: system.meanings(),
            found: d.meanings(),
        });
    }
    Ok(())
}

fn check_decoder(decoder: &DecoderTable, system: &SemanticSystem) -> Result<()> {
    if decoder.map.len() != system.messages() {
        return Err(Error::DimensionMismatch {
            what: "decoder table length vs messages",
            expected: system.messages(),
            found: decoder.map.len(),
        });
    }
    if let Some(&bad) = decoder.map.iter().find(|&&w| w >= system.meanings()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            len: system.meanings(),
        });
    }
    Ok(())
}

#[inline]
fn psi_unchecked(
    belief: &[f64],
    system: &SemanticSystem,
    d: &DistortionMatrix,
    decoded: usize,
    received: usize,
) -> f64 {
    let a = system.effective();
    belief
        .iter()
        .enumerate()
        .map(|(w, &q)| q * a[(received, w)] * d.get(w, decoded))
        .sum()
}

/// `ψ_belief(ŵ, ŝ)`; `belief` may carry signed weights.
pub fn psi(
    belief: &[f64],
    system: &SemanticSystem,
    d: &DistortionMatrix,
    decoded: usize,
    received: usize,
) -> Result<f64> {
    check_belief(belief, system)?;
    check_distortion(d, system)?;
    if decoded >= system.meanings() {
        return Err(Error::IndexOutOfRange {
            index: decoded,
            len: system.meanings(),
        });
    }
    if received >= system.messages() {
        return Err(Error::IndexOutOfRange {
            index: received,
            len: system.messages(),
        });
    }
    Ok(psi_unchecked(belief, system, d, decoded, received))
}

/// Per-symbol argmin of `ψ_belief`; ties go to the lowest meaning index.
pub fn optimal_decoder(belief: &[f64], system: &SemanticSystem, d: &DistortionMatrix) -> Result<DecoderTable> {
    check_belief(belief, system)?;
    check_distortion(d, system)?;
    let map = (0..system.messages())
        .map(|received| {
            let mut best = 0;
            let mut best_value = f64::INFINITY;
            for decoded in 0..system.meanings() {
                let value = psi_unchecked(belief, system, d, decoded, received);
                if value < best_value {
                    best = decoded;
                    best_value = value;
                }
            }
            best
        })
        .collect();
    Ok(DecoderTable {
        map,
        belief: belief.to_vec(),
    })
}

/// Expected distortion of `decoder` when meanings follow `true_prior`:
/// `Σ_ŝ ψ_p(decoder(ŝ), ŝ)`.
pub fn semantic_distortion(
    true_prior: &ProbabilityVector,
    system: &SemanticSystem,
    d: &DistortionMatrix,
    decoder: &DecoderTable,
) -> Result<f64> {
    check_belief(true_prior.as_slice(), system)?;
    check_distortion(d, system)?;
    check_decoder(decoder, system)?;
    Ok(decoder
        .map
        .iter()
        .enumerate()
        .map(|(received, &decoded)| psi_unchecked(true_prior.as_slice(), system, d, decoded, received))
        .sum())
}

/// Excess distortion from decoding with `believed_prior` instead of the truth.
pub fn distortion_gap(
    true_prior: &ProbabilityVector,
    believed_prior: &[f64],
    system: &SemanticSystem,
    d: &DistortionMatrix,
) -> Result<f64> {
    let believed = optimal_decoder(believed_prior, system, d)?;
    let matched = optimal_decoder(true_prior.as_slice(), system, d)?;
    gap_against(true_prior, &believed, &matched, system, d)
}

/// Gap of `decoder` relative to a precomputed true-prior decoder.
pub(crate) fn gap_against(
    true_prior: &ProbabilityVector,
    decoder: &DecoderTable,
    matched: &DecoderTable,
    system: &SemanticSystem,
    d: &DistortionMatrix,
) -> Result<f64> {
    let gap = semantic_distortion(true_prior, system, d, decoder)?
        - semantic_distortion(true_prior, system, d, matched)?;
    Ok(if (-GAP_CLAMP..0.0).contains(&gap) { 0.0 } else { gap })
}

/// `d_max √(NM) / (σ_min √T)`
pub fn distortion_gap_bound(d_max: f64, meanings: usize, messages: usize, sigma_min: f64, samples: u64) -> Result<f64> {
    if sigma_min.is_nan() || sigma_min <= 0.0 {
        return Err(Error::SingularSystem { sigma_min });
    }
    if d_max < 0.0 || meanings == 0 || messages == 0 || samples == 0 {
        return Err(Error::BadParams("d_max must be >= 0 and N, M, T >= 1".into()));
    }
    Ok(d_max * ((meanings * messages) as f64).sqrt() / (sigma_min * (samples as f64).sqrt()))
}

/// Probability of decoding the sent meaning exactly: one minus the 0-1 distortion.
pub fn classification_accuracy(
    true_prior: &ProbabilityVector,
    system: &SemanticSystem,
    decoder: &DecoderTable,
) -> Result<f64> {
    let zero_one = DistortionMatrix::zero_one(system.meanings());
    Ok(1.0 - semantic_distortion(true_prior, system, &zero_one, decoder)?)
}
