//! Quantum correlation measures for orthogonally invariant bipartite states.
//!
//! The crate builds the family of n(x)n states spanned by the identity,
//! the flip operator and the maximally entangled projector, and computes
//! quantumness measures on it: local quantum uncertainty from skew
//! information, geometric-discord and measurement-induced-nonlocality
//! bounds, scaled discord and negativity. Every closed form is paired
//! with an independent brute-force optimization oracle.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod oracles;
pub mod ortho;
pub mod random;
pub mod selftest;
pub mod sun;

pub use error::{Error, Result};
pub use linalg::{CMatrix, EigenDecomposition, Party, C64};
pub use measures::{MeasureReport, SpectrumObservable, WMatrix};
pub use oracles::{OptimizerConfig, OracleResult};
pub use ortho::{OrthoState, SqrtCoefficients};
pub use sun::{GeneratorSet, StructureConstants, WeylBasis};
