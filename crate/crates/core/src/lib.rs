//! Oscillating tableaux and the random walk traced by their areas.
//!
//! An oscillating tableau of length `N` and shape `λ` is a walk on Young's
//! lattice from `∅` to `λ` that adds or removes one corner box per step. Read
//! backwards from `λ`, the box count `H(X)` performs a Markov walk whose step
//! probabilities depend only on `X` and the current height: it descends with
//! probability `Y / (N - X)`. This crate provides
//!
//! * [`partitions`]: Young diagrams, corners and hook-length counts,
//! * [`tableaux`]: validation, enumeration, counting and uniform sampling,
//! * [`walk`]: the area walk, its weight families and exact master-equation propagation,
//! * [`moments`]: exact rational moments, mixed moments, covariance and volume statistics,
//! * [`continuum`]: the large-`N` mean curve, Gaussian-process kernel and variational objects,
//! * [`stats`]: Monte Carlo campaigns and goodness-of-fit checks,
//! * [`verify`]: the oracle suite behind `osctab verify`.

pub mod brute;
pub mod continuum;
mod error;
pub mod moments;
pub mod partitions;
pub mod rational;
pub mod stats;
pub mod tableaux;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
pub use partitions::{Corner, CornerKind, Partition};
pub use rational::Rational;
pub use tableaux::OscillatingTableau;
pub use walk::{DistributionSlice, WalkConfig, WalkPath, WeightModel};

use rand::SeedableRng;

/// The generator used everywhere a seed is accepted.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}
