//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input expected to be Hermitian deviates beyond tolerance.
    #[error("matrix is not Hermitian: max |A_ij - conj(A_ji)| = {max_dev:.3e}")]
    NotHermitian { max_dev: f64 },

    /// Eigenvalue below the PSD floor (-1e-10).
    #[error("matrix is not positive semidefinite: smallest eigenvalue = {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// Density matrix trace differs from 1 beyond tolerance.
    #[error("trace must equal 1, got {trace}")]
    TraceNotOne { trace: f64 },

    /// State or channel parameters outside their physical domain.
    /// The message names the violated constraint (e.g. "λ3 = r - s = -0.1 < 0").
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Matrix does not match the two-parameter X-state template.
    #[error("matrix is not in the X-state family: max residual = {max_residual:.3e}")]
    NotInFamily { max_residual: f64 },

    /// Evolution times must be non-negative.
    #[error("time must be non-negative, got {t}")]
    NegativeTime { t: f64 },

    /// Jacobi sweep limit exceeded (should not happen for dim <= 4).
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    /// An internal dual-route consistency check failed.
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}
