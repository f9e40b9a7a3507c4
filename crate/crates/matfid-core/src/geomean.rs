//! The matrix geometric mean `A # B` of positive-semidefinite matrices.
//!
//! For positive-definite `A` the mean has the closed spectral form
//!
//! ```text
//! A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2},
//! ```
//!
//! the unique positive solution of the Riccati equation `X A⁻¹ X = B`, and the
//! midpoint of the geodesic between `A` and `B` in the invariant geometry of
//! the positive-definite cone.
//!
//! # Semidefinite inputs
//!
//! The mean extends to the boundary of the cone as the limit
//! `A # B = lim_{ε→0⁺} (A + εI) # (B + εI)`, which always exists. Three
//! computational regimes cover it:
//!
//! * **Either input definite.** The closed form above is exact: if `A ≻ 0` it
//!   applies directly, and the inner square root clamps the rounding noise of
//!   the PSD conjugation `A^{-1/2} B A^{-1/2}`. If instead `B ≻ 0`, compute
//!   `B # A` (the mean is symmetric). No ε-limit is needed — the closed form
//!   is continuous in the semidefinite argument.
//! * **Trivially intersecting images.** When `Image(A) ∩ Image(B) = {0}` the
//!   limit is the zero matrix exactly; this is detected up front with
//!   [`linalg::image_intersection_trivial`](crate::linalg::image_intersection_trivial)
//!   and short-circuited, since the ε-path approaches zero only at rate √ε.
//! * **Both singular, overlapping images.** The ε-limit is evaluated along a
//!   decreasing [`RegularizationSchedule`]. Convergence of the path is
//!   O(√ε), so the Frobenius gap between successive iterates contracts by
//!   roughly √10 per step rather than collapsing to zero; the path is
//!   accepted at its smallest ε as long as the gaps are strictly decreasing,
//!   and reported as [`Error::EpsPathStalled`] otherwise.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{
    self, eig_herm, matrix_function, pd_tol, psd_check, psd_tol, HermMat, MatrixFunction,
};
use crate::{Error, Result};

/// Decreasing sequence of ε values for the boundary limit
/// `(A + εI) # (B + εI)`, plus the Frobenius gap at which the path is
/// considered converged outright.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationSchedule {
    eps_values: Vec<f64>,
    convergence_tol: f64,
}

impl Default for RegularizationSchedule {
    /// ε from `1e−3` down to `1e−9` in decade steps, convergence gap `1e−7`.
    fn default() -> Self {
        RegularizationSchedule {
            eps_values: vec![1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9],
            convergence_tol: 1e-7,
        }
    }
}

impl RegularizationSchedule {
    /// Build a custom schedule.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidSchedule`] unless the values are strictly decreasing,
    /// all positive, the last one at least `1e−9`, and the tolerance
    /// positive. The floor on the smallest ε keeps the shifted matrices an
    /// order of magnitude above the positive-definiteness gate of the
    /// spectral routines, so every point of the path stays computable.
    pub fn new(eps_values: Vec<f64>, convergence_tol: f64) -> Result<Self> {
        if eps_values.is_empty() {
            return Err(Error::InvalidSchedule {
                reason: "empty epsilon sequence",
            });
        }
        if !eps_values.windows(2).all(|w| w[0] > w[1]) {
            return Err(Error::InvalidSchedule {
                reason: "epsilon sequence must be strictly decreasing",
            });
        }
        if *eps_values.last().expect("nonempty") < 1e-9 {
            return Err(Error::InvalidSchedule {
                reason: "smallest epsilon must be at least 1e-9",
            });
        }
        if convergence_tol <= 0.0 {
            return Err(Error::InvalidSchedule {
                reason: "convergence tolerance must be positive",
            });
        }
        Ok(RegularizationSchedule {
            eps_values,
            convergence_tol,
        })
    }

    /// The ε sequence.
    pub fn eps_values(&self) -> &[f64] {
        &self.eps_values
    }

    /// The convergence gap.
    pub fn convergence_tol(&self) -> f64 {
        self.convergence_tol
    }
}

/// `A # B` with the default regularization schedule.
///
/// # Errors
///
/// See [`geometric_mean_with`].
pub fn geometric_mean(a: &HermMat, b: &HermMat) -> Result<HermMat> {
    geometric_mean_with(a, b, &RegularizationSchedule::default())
}

/// `A # B` with an explicit schedule for the doubly-singular case.
///
/// # Errors
///
/// [`Error::NotPsd`] if an input has an eigenvalue below `−psd_tol`;
/// [`Error::DimensionMismatch`]; [`Error::EpsPathStalled`] if both inputs are
/// singular with overlapping images and the ε-path stops contracting;
/// eigensolver failures propagate.
pub fn geometric_mean_with(
    a: &HermMat,
    b: &HermMat,
    schedule: &RegularizationSchedule,
) -> Result<HermMat> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }

    let (eig_a, _) = eig_herm(a)?;
    let (eig_b, _) = eig_herm(b)?;
    let (min_a, op_a) = spectrum_extent(&eig_a);
    let (min_b, op_b) = spectrum_extent(&eig_b);
    if min_a < -psd_tol(op_a) {
        return Err(Error::NotPsd {
            min_eigenvalue: min_a,
        });
    }
    if min_b < -psd_tol(op_b) {
        return Err(Error::NotPsd {
            min_eigenvalue: min_b,
        });
    }

    let a_definite = min_a > pd_tol(op_a);
    let b_definite = min_b > pd_tol(op_b);

    if a_definite {
        return mean_pd_base(a, b);
    }
    if b_definite {
        return mean_pd_base(b, a);
    }

    // Both singular: exact zero when the images are transversal, ε-path
    // otherwise.
    if linalg::image_intersection_trivial(a, b)? {
        return Ok(HermMat::zeros(n));
    }
    eps_path(a, b, schedule)
}

/// Closed form with the definite matrix as base:
/// `base # other = base^{1/2} (base^{-1/2} other base^{-1/2})^{1/2} base^{1/2}`.
fn mean_pd_base(base: &HermMat, other: &HermMat) -> Result<HermMat> {
    let root = matrix_function(base, MatrixFunction::Sqrt)?;
    let inv_root = matrix_function(base, MatrixFunction::InvSqrt)?;
    let conjugated = other.conjugate_by(inv_root.mat());
    let inner = matrix_function(&conjugated, MatrixFunction::Sqrt)?;
    Ok(inner.conjugate_by(root.mat()))
}

fn spectrum_extent(eigenvalues: &[f64]) -> (f64, f64) {
    let min = eigenvalues.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    let op = eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    (min, op)
}

fn eps_path(a: &HermMat, b: &HermMat, schedule: &RegularizationSchedule) -> Result<HermMat> {
    let mut last: Option<HermMat> = None;
    let mut prev_gap = f64::INFINITY;
    for &eps in schedule.eps_values() {
        let a_eps = a.add_scaled_identity(eps);
        let b_eps = b.add_scaled_identity(eps);
        let iterate = mean_pd_base(&a_eps, &b_eps)?;
        if let Some(prev) = &last {
            let gap = iterate.sub(prev).frobenius_norm();
            if gap <= schedule.convergence_tol() {
                return Ok(iterate);
            }
            if gap >= prev_gap {
                return Err(Error::EpsPathStalled {
                    previous_gap: prev_gap,
                    last_gap: gap,
                });
            }
            prev_gap = gap;
        }
        last = Some(iterate);
    }
    // Gaps decreased monotonically all the way down (the O(√ε) regime):
    // accept the most-regularized iterate as the limit value.
    Ok(last.expect("schedule validated nonempty"))
}

/// Check the maximality property of the geometric mean: a Hermitian `W` is
/// *feasible* when the block matrix `[[A, W], [W, B]]` is positive
/// semidefinite, and `A # B` is the maximum of all feasible `W` in the
/// semidefinite order. Returns whether this `W` is feasible.
///
/// The check is done on the assembled `2n × 2n` block with [`psd_check`]
/// rather than through a Schur complement, so it applies to singular `A`, `B`
/// as well.
///
/// # Errors
///
/// [`Error::DimensionMismatch`]; eigensolver failures propagate.
pub fn maximality_witness(a: &HermMat, b: &HermMat, w: &HermMat) -> Result<bool> {
    let n = a.dim();
    if b.dim() != n || w.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if b.dim() != n { b.dim() } else { w.dim() },
        });
    }
    let block = linalg::assemble_block(a, w.mat(), b);
    Ok(psd_check(&block, None)?.is_psd)
}
