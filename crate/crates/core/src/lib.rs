//! Two-qubit collective-dephasing simulator.
//!
//! Both qubits of a pair couple to one stochastic dephasing field; the
//! resulting channel damps the single-flip coherences by γ(t) = e^{-tΓ/2},
//! the anti-diagonal ones by γ^4, and leaves the |01>,|10> block alone. On
//! the two-parameter X-state family ρ(r, s) this is the flow r(t) = r,
//! s(t) = s γ^4, which makes entanglement (negativity) and local quantum
//! uncertainty along trajectories fully analyzable: frozen entanglement for
//! r < 1/4, sudden death in the green/blue regions, and three distinct LQU
//! regimes (monotone growth, sudden change, monotone decay).
//!
//! Modules, bottom up:
//! - [`linalg`]: 4x4/3x3 Hermitian eigensolver (cyclic Jacobi), PSD matrix
//!   square root, partial transpose, Kronecker products;
//! - [`states`]: validated density matrices and the (r, s) family;
//! - [`channel`]: the analytic dephasing map, the parameter flow, and a
//!   stochastic-unitary Monte Carlo cross-check;
//! - [`correlations`]: negativity, skew information, the W matrix, LQU
//!   (generic and closed form);
//! - [`analysis`]: region classification, t_sd / t_st, trajectories, and
//!   phase-diagram sweeps with CSV output.

pub mod analysis;
pub mod channel;
pub mod correlations;
pub mod error;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};
