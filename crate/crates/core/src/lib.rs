//! Learning an unknown meaning prior through a fixed semantic encoder and a
//! discrete memoryless channel.
//!
//! A transmitter encodes meanings `w ~ p(w)` with a known column-stochastic
//! encoder `U`; messages cross a known channel `C`. The receiver only sees
//! received symbols, whose distribution is `A p(w)` with `A = CU`. This
//! crate provides:
//!
//! - validated probability vectors, stochastic matrices and the composed
//!   [`SemanticSystem`] with its singular values ([`system`]);
//! - the full-rank learnability test and confusable-prior witnesses
//!   ([`spectral`]);
//! - streaming counts, pseudoinverse recovery and the `√M / (2 σ_min √T)`
//!   error bound ([`estimation`]);
//! - belief-optimal decoders, semantic distortion and the distortion gap
//!   ([`decoding`]);
//! - seeded multi-trial convergence experiments over three encoder schemes
//!   with different conditioning ([`simulation`]);
//! - the `semcomm` command-line front end ([`cli`]).
//!
//! ```
//! use semcomm::{estimation, ProbabilityVector, SemanticSystem, StochasticMatrix};
//!
//! let system = SemanticSystem::new(
//!     StochasticMatrix::identity(2),
//!     StochasticMatrix::binary_symmetric(0.1)?,
//! )?;
//! let observed = ProbabilityVector::new(vec![0.66, 0.34])?;
//! let estimate = estimation::estimate_prior(&system, &observed)?;
//! assert!((estimate.raw[0] - 0.7).abs() < 1e-12);
//! # Ok::<(), semcomm::Error>(())
//! ```

pub mod cli;
pub mod decoding;
pub mod distortion;
pub mod error;
pub mod estimation;
pub mod interchange;
pub mod probability;
pub mod simulation;
pub mod spectral;
pub mod stochastic;
pub mod system;

pub use decoding::DecoderTable;
pub use distortion::DistortionMatrix;
pub use error::{Error, Result};
pub use estimation::{ObservationCounter, PriorEstimate};
pub use probability::ProbabilityVector;
pub use spectral::{DeterministicEncodingReport, LearnabilityReport};
pub use stochastic::StochasticMatrix;
pub use system::{SemanticSystem, SpectralStats};
