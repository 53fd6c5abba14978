//! Verification laboratory for a family of sharp weighted interpolation
//! inequalities of Caffarelli--Kohn--Nirenberg type, on Euclidean space and
//! on constant-curvature model spaces.
//!
//! The crate classifies parameter tuples, evaluates the known extremal
//! families, verifies the inequalities and their exact remainder identity by
//! radial quadrature, and probes the rigidity functions T(λ) and F(λ) whose
//! equality characterizes flatness within the model family.

pub mod engine;
pub mod extremals;
pub mod geometry;
pub mod params;
pub mod quadrature;
pub mod report;
pub mod rigidity;
pub mod specfun;

pub use params::{CknParams, DerivedExponents, SharpnessCase};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum CknError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature did not converge: value {value:.6e}, error estimate {error:.3e} after {subdivisions} subdivisions")]
    NonConvergence {
        value: f64,
        error: f64,
        subdivisions: usize,
    },
    #[error("endpoint singularity too strong (estimated exponent {sigma:.3} <= -1)")]
    SingularityTooStrong { sigma: f64 },
    #[error("integral does not converge: {0}")]
    NonIntegrable(String),
    #[error("profile case {given:?} does not match classified case {expected:?}")]
    CaseMismatch {
        given: SharpnessCase,
        expected: SharpnessCase,
    },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("optimizer budget exhausted; best ratio so far {best:.12}")]
    BudgetExhausted { best: f64 },
}

pub type Result<T> = std::result::Result<T, CknError>;
