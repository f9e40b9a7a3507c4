//! Similarity measures between positive-semidefinite matrices, built around the
//! matrix geometric mean.
//!
//! Three fidelities are implemented and cross-validated against each other:
//!
//! * the **Uhlmann fidelity** `F(ρ,σ) = ‖ρ^{1/2} σ^{1/2}‖₁`,
//! * the **Holevo fidelity** `F_H(ρ,σ) = tr(ρ^{1/4} σ^{1/2} ρ^{1/4})`, and
//! * the **Matsumoto fidelity** `F_GM(ρ,σ) = tr(ρ # σ)`, the trace of the
//!   matrix geometric mean `ρ # σ = ρ^{1/2}(ρ^{-1/2} σ ρ^{-1/2})^{1/2} ρ^{1/2}`.
//!
//! They bound each other pointwise, `F_GM ≤ F_H ≤ F`, and each admits several
//! independent computational routes that this crate deliberately keeps separate
//! so they can be checked against one another:
//!
//! * closed spectral forms ([`fidelity`]),
//! * a dense primal-dual semidefinite-programming solver for the block programs
//!   `max { tr W : [[ρ, W], [W, σ]] ⪰ 0 }` and its non-Hermitian relaxation
//!   ([`sdp`]),
//! * the Riemannian geometry of the positive-definite cone, where `ρ # σ` is
//!   the geodesic midpoint under the invariant metric
//!   `ds² = tr(ρ⁻¹ dρ ρ⁻¹ dρ)` ([`geometry`]), and
//! * a property suite that mechanically re-checks the defining lemmas of all
//!   three measures over seeded random ensembles ([`suite`], [`ensembles`]).
//!
//! The crate is `no_std` (with `alloc`): everything here is pure computation on
//! dense heap-allocated matrices. File formats, CSV/JSON reports, and the
//! command-line front end live in the companion crate `matfid-cli`.
//!
//! # Conventions
//!
//! * Matrices are dense, row-major, complex ([`linalg::CMat`]); Hermitian
//!   matrices are re-hermitized as `(M + M†)/2` whenever an operation can
//!   introduce drift.
//! * Tolerances are scale-relative; see [`linalg::psd_tol`],
//!   [`linalg::pd_tol`], [`linalg::rank_tol`].
//! * All randomness flows through [`ensembles::Seed`]; generators are pure
//!   functions of their parameters and the seed.

#![no_std]
#![forbid(unsafe_code)]
#![deny(missing_docs)]

extern crate alloc;

use alloc::vec::Vec;

pub mod ensembles;
pub mod fidelity;
pub mod geomean;
pub mod geometry;
pub mod linalg;
pub mod sdp;
pub mod suite;

pub use linalg::{CMat, DensityMatrix, HermMat, ProbVector, UnitaryMatrix};

/// Errors reported by the numerical routines in this crate.
///
/// Every variant carries the quantity that triggered it, so callers (and test
/// failures) can see how far from the precondition the input actually was.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A square matrix was required.
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare {
        /// Number of rows of the offending matrix.
        rows: usize,
        /// Number of columns of the offending matrix.
        cols: usize,
    },
    /// Two operands did not have compatible dimensions.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch {
        /// Dimension required by the operation.
        expected: usize,
        /// Dimension actually supplied.
        found: usize,
    },
    /// A matrix failed a strict Hermiticity check.
    #[error("matrix is not Hermitian: max entrywise asymmetry {asymmetry:e}")]
    NotHermitian {
        /// Largest `|M[i][j] - conj(M[j][i])|` found.
        asymmetry: f64,
    },
    /// A matrix required to be positive semidefinite has a significantly
    /// negative eigenvalue.
    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPsd {
        /// Smallest eigenvalue found.
        min_eigenvalue: f64,
    },
    /// A matrix failed the unitarity check `‖U†U − I‖_F ≤ 1e−12·dim`.
    #[error("matrix is not unitary: residual {residual:e}")]
    NotUnitary {
        /// Frobenius norm of `U†U − I`.
        residual: f64,
    },
    /// A density matrix does not have unit trace.
    #[error("trace must be 1 within 1e-12, found {trace}")]
    InvalidTrace {
        /// Trace actually found.
        trace: f64,
    },
    /// A probability vector contains a negative entry.
    #[error("probability entries must be nonnegative, found {value:e}")]
    NegativeProbability {
        /// The offending entry.
        value: f64,
    },
    /// A probability vector does not sum to one.
    #[error("probabilities must sum to 1 within 1e-12, found {sum}")]
    ProbabilitySum {
        /// Sum actually found.
        sum: f64,
    },
    /// A state vector was not normalized.
    #[error("vector must have unit norm, found {norm}")]
    NotNormalized {
        /// Euclidean norm actually found.
        norm: f64,
    },
    /// A positive-definite input was required but the matrix is singular to
    /// working precision.
    #[error("input is singular: min eigenvalue {min_eigenvalue:e}")]
    SingularInput {
        /// Smallest eigenvalue found.
        min_eigenvalue: f64,
    },
    /// The Jacobi eigensolver did not converge within its sweep cap.
    #[error(
        "eigensolver did not converge after {sweeps} sweeps: off-diagonal residual {residual:e}"
    )]
    NonConvergence {
        /// Number of sweeps performed.
        sweeps: usize,
        /// Off-diagonal Frobenius residual at the last sweep.
        residual: f64,
    },
    /// The ε-regularization path of the geometric mean stalled instead of
    /// converging: the gap between successive iterates stopped decreasing.
    #[error("regularization path stalled: successive gaps {previous_gap:e} then {last_gap:e}")]
    EpsPathStalled {
        /// Frobenius gap between the second- and third-to-last iterates.
        previous_gap: f64,
        /// Frobenius gap between the last two iterates.
        last_gap: f64,
    },
    /// An argument lay outside the mathematical domain of the function
    /// (arctanh beyond `(−1, 1)`, angles at a parametrization singularity,
    /// coordinates outside their chart ranges).
    #[error("argument out of domain: {value}")]
    DomainError {
        /// The offending argument.
        value: f64,
    },
    /// A requested rank does not fit the matrix dimension.
    #[error("rank {rank} out of range for dimension {dim}")]
    RankOutOfRange {
        /// Requested rank.
        rank: usize,
        /// Matrix dimension.
        dim: usize,
    },
    /// A regularization schedule failed validation.
    #[error("invalid regularization schedule: {reason}")]
    InvalidSchedule {
        /// Why the schedule was rejected.
        reason: &'static str,
    },
    /// The SDP solver exhausted its iteration budget.
    ///
    /// The trace log carries the `(μ, duality gap)` pairs recorded per outer
    /// iteration up to the failure.
    #[error("SDP solver exceeded {iterations} Newton iterations")]
    MaxIterations {
        /// Iterations performed.
        iterations: usize,
        /// Per-outer-iteration `(μ, gap)` records.
        trace_log: Vec<(f64, f64)>,
    },
    /// The SDP solver's strictly feasible start `W = 0` is not available
    /// because one of the diagonal blocks is not positive definite.
    #[error("infeasible start: block {block} has min eigenvalue {min_eigenvalue:e}")]
    InfeasibleStart {
        /// Which diagonal block (`"rho"` or `"sigma"`) is singular.
        block: &'static str,
        /// Its smallest eigenvalue.
        min_eigenvalue: f64,
    },
    /// POVM elements do not sum to the identity.
    #[error("POVM elements do not resolve the identity: residual {residual:e}")]
    IncompleteMeasurement {
        /// Frobenius norm of `Σ Eᵢ − I`.
        residual: f64,
    },
    /// A computed fidelity report violated the ordering invariant
    /// `F_GM ≤ F_H + 1e−8 ≤ F + 2e−8`; indicates a numerical defect upstream.
    #[error("fidelity ordering violated: F_GM={matsumoto}, F_H={holevo}, F={uhlmann}")]
    OrderingViolation {
        /// Uhlmann fidelity.
        uhlmann: f64,
        /// Holevo fidelity.
        holevo: f64,
        /// Matsumoto fidelity.
        matsumoto: f64,
    },
}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
