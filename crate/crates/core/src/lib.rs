//! Ground-state eigenvalue inference for quartic anharmonic oscillators.
//!
//! The Schrödinger equation `[-½ d²/dx² + U(x)] ψ = (α/8) ψ` with a
//! polynomial pseudo-potential `U(x) = -⅛ Σ_k λ_k x^k` carries a Legendre
//! transform structure connecting the Fisher information `I` of `ψ²`, the
//! normalization multiplier `α`, the potential coefficients `λ_k`, and the
//! position moments `⟨x^k⟩`. Both `I(⟨x^k⟩)` and `α(λ_k)` satisfy linear
//! first-order PDEs whose closed-form solutions are power laws weighted by
//! positive reference constants `F_k`. Extremizing the Cramér–Rao product
//! `I·(Δx)²` under the normalization `Σ F_k^{2/k} = 1` fixes the weights,
//! which for the quartic oscillator reduces to one scalar root solve and
//! yields the ground-state energy `E = α/8` without ever diagonalizing a
//! Hamiltonian.
//!
//! Modules:
//! - [`fisher_core`]: closed-form `I` and `α`, moment/multiplier conjugation,
//!   and residuals for every structural identity (Legendre, virial,
//!   reciprocity, governing PDEs).
//! - [`cr_optimizer`]: the constrained Cramér–Rao extremization specialized
//!   to moment orders {2, 4}, solved by a bracketed scalar root solve.
//! - [`quartic`]: end-to-end inference `(k, λ) → E` for
//!   `H = -d²/dy² + k y² + λ y⁴`, including the coefficient conventions.
//! - [`oracle`]: an independent Schrödinger eigensolver (scaled
//!   harmonic-oscillator basis or finite differences) used to validate the
//!   inferred eigenvalues and every wavefunction-level identity.
//! - [`benchmark`]: pinned reference eigenvalues from the numerical
//!   literature for `k = 1`.

pub mod benchmark;
pub mod cr_optimizer;
pub mod fisher_core;
pub mod oracle;
pub mod quartic;

use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input violates a domain precondition (wrong sign, zero moment,
    /// mismatched moment orders, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative routine failed to reach its accuracy target.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// A finite-difference step underflowed or crossed a domain boundary.
    #[error("numeric precision error: {0}")]
    Precision(String),

    /// Violation of an internal invariant (e.g. a guaranteed root bracket
    /// failed); indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
