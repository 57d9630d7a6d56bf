//! Adaptive wavelet regression by data-driven block thresholding.
//!
//! The estimator at the center of this crate picks, independently at each
//! resolution level, a block size and a threshold for block James-Stein
//! shrinkage by minimizing an unbiased risk estimate over all admissible
//! pairs. A sparsity check routes very sparse levels to a coordinatewise
//! garrote with a conservative threshold instead. Everything else here exists
//! to feed that rule (a periodized orthogonal wavelet transform, noise-level
//! estimation) or to evaluate it (classical comparison rules, oracle risks,
//! a seeded simulation harness).
//!
//! The crate is organized around the estimation pipeline:
//!
//! - [`dwt`]: periodized orthogonal DWT on dyadic grids, plus the filter bank.
//! - [`shrinkage`]: the block rule itself — SURE, the exact candidate-set
//!   minimizer, the garrote, and oracle risk surrogates.
//! - [`pipeline`]: end-to-end denoising (transform, standardize, shrink,
//!   invert) for the block rule and the comparison estimators.
//! - [`bench`]: standard test signals, noise generation, error metrics, and
//!   a reproducible experiment runner.
//! - [`seeding`]: stable derivation of per-task RNG seeds.

pub mod bench;
pub mod dwt;
mod error;
pub mod pipeline;
pub mod seeding;
pub mod shrinkage;

pub use error::{Error, Result};

pub use bench::{
    BenchRecord, CellFailure, ExperimentConfig, ExperimentOutput, SummaryRow, TestSignal,
};
pub use dwt::{CoefficientPyramid, WaveletFilter};
pub use pipeline::{DenoiseConfig, DenoiseReport, LevelDiagnostic, Method, SigmaSpec};
pub use shrinkage::{HybridBranch, SureSelection};
