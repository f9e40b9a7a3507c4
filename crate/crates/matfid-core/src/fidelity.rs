//! Closed-form fidelities between quantum states, and the variational objects
//! (measurements, gradients, rotations) attached to them.
//!
//! The three measures, in their defining forms:
//!
//! * Uhlmann fidelity `F(ρ,σ) = ‖ρ^{1/2} σ^{1/2}‖₁`;
//! * Holevo fidelity `F_H(ρ,σ) = tr(ρ^{1/4} σ^{1/2} ρ^{1/4})
//!   = tr(ρ^{1/2} σ^{1/2})` — the classical fidelity of the square roots;
//! * Matsumoto fidelity `F_GM(ρ,σ) = tr(ρ # σ)`.
//!
//! They satisfy `F_GM ≤ F_H ≤ F` pointwise, all coincide on commuting pairs
//! with the classical fidelity `Σᵢ √(pᵢ qᵢ)` of the (co-diagonal) spectra, and
//! all equal 1 exactly on equal states. [`fidelity_report`] computes all three
//! plus the trace distance and validates the ordering as a built-in
//! cross-check.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::geomean::geometric_mean;
use crate::linalg::{
    self, matrix_function, norm, DensityMatrix, HermMat, MatrixFunction, NormKind, UnitaryMatrix,
};
use crate::{CMat, Error, Result};

/// Classical fidelity `Σᵢ √(pᵢ qᵢ)` of two distributions.
///
/// # Errors
///
/// [`Error::DimensionMismatch`] if the distributions have different lengths.
pub fn classical_fidelity(p: &linalg::ProbVector, q: &linalg::ProbVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(p.probs()
        .iter()
        .zip(q.probs())
        .map(|(&a, &b)| libm::sqrt(a * b))
        .sum())
}

/// Uhlmann fidelity `F(ρ,σ) = ‖ρ^{1/2} σ^{1/2}‖₁`.
///
/// # Errors
///
/// [`Error::DimensionMismatch`]; eigensolver failures propagate.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let r = matrix_function(rho.herm(), MatrixFunction::Sqrt)?;
    let s = matrix_function(sigma.herm(), MatrixFunction::Sqrt)?;
    norm(&r.mat().mul(s.mat()), NormKind::Trace)
}

/// Holevo fidelity `F_H(ρ,σ) = tr(ρ^{1/4} σ^{1/2} ρ^{1/4})`.
///
/// Computed as `tr(ρ^{1/2} σ^{1/2})` by cyclicity of the trace; the product of
/// the two PSD roots has real trace up to rounding.
///
/// # Errors
///
/// [`Error::DimensionMismatch`]; eigensolver failures propagate.
pub fn holevo_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let r = matrix_function(rho.herm(), MatrixFunction::Sqrt)?;
    let s = matrix_function(sigma.herm(), MatrixFunction::Sqrt)?;
    Ok(r.mat().mul(s.mat()).trace().re)
}

/// Matsumoto fidelity `F_GM(ρ,σ) = tr(ρ # σ)`.
///
/// # Errors
///
/// [`Error::DimensionMismatch`]; [`Error::EpsPathStalled`] in the
/// doubly-singular overlapping-image case; eigensolver failures propagate.
pub fn matsumoto_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    Ok(geometric_mean(rho.herm(), sigma.herm())?.trace())
}

/// Trace distance `Δ(ρ,σ) = ½ ‖ρ − σ‖₁`.
///
/// # Errors
///
/// [`Error::DimensionMismatch`]; eigensolver failures propagate.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    Ok(0.5 * norm(&rho.mat().sub(sigma.mat()), NormKind::Trace)?)
}

/// All three fidelities of a positive-definite state against a pure state, in
/// closed form:
///
/// ```text
/// F    = ⟨ψ|ρ|ψ⟩^{1/2}
/// F_H  = ⟨ψ|ρ^{1/2}|ψ⟩
/// F_GM = ⟨ψ|ρ^{−1}|ψ⟩^{−1/2}
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureMixedFidelities {
    /// Uhlmann fidelity.
    pub uhlmann: f64,
    /// Holevo fidelity.
    pub holevo: f64,
    /// Matsumoto fidelity.
    pub matsumoto: f64,
}

/// Evaluate the pure-against-mixed closed forms. `ρ` must be positive
/// definite (the Matsumoto form needs `ρ⁻¹`); `ψ` must be a unit vector of
/// matching dimension.
///
/// # Errors
///
/// [`Error::DimensionMismatch`], [`Error::NotNormalized`],
/// [`Error::SingularInput`] if `ρ` is singular.
pub fn pure_mixed_fidelities(
    rho: &DensityMatrix,
    psi: &[Complex64],
) -> Result<PureMixedFidelities> {
    if psi.len() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: psi.len(),
        });
    }
    let nrm = libm::sqrt(psi.iter().map(|z| z.norm_sqr()).sum());
    if (nrm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm: nrm });
    }
    let root = matrix_function(rho.herm(), MatrixFunction::Sqrt)?;
    let inv = matrix_function(rho.herm(), MatrixFunction::Inv)?;
    let uhlmann = libm::sqrt(quadratic_form(rho.herm(), psi));
    let holevo = quadratic_form(&root, psi);
    let matsumoto = 1.0 / libm::sqrt(quadratic_form(&inv, psi));
    Ok(PureMixedFidelities {
        uhlmann,
        holevo,
        matsumoto,
    })
}

/// Real quadratic form `⟨ψ|H|ψ⟩` of a Hermitian matrix.
fn quadratic_form(h: &HermMat, psi: &[Complex64]) -> f64 {
    let hv = h.mat().mul_vec(psi);
    psi.iter()
        .zip(hv.iter())
        .map(|(a, b)| (a.conj() * b).re)
        .sum()
}

/// Alberti's variational objective for the squared Uhlmann fidelity at a
/// positive-definite trial point `τ`:
///
/// ```text
/// g(τ) = tr(ρ τ) · tr(σ τ⁻¹),
/// ```
///
/// minimized over PD `τ` at the value `F(ρ,σ)²`, attained at `τ* ∝ ρ⁻¹ # σ`.
///
/// # Errors
///
/// [`Error::DimensionMismatch`]; [`Error::SingularInput`] if `τ` is singular.
pub fn alberti_objective(rho: &DensityMatrix, sigma: &DensityMatrix, tau: &HermMat) -> Result<f64> {
    check_dims(rho, sigma)?;
    if tau.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: tau.dim(),
        });
    }
    let tau_inv = matrix_function(tau, MatrixFunction::Inv)?;
    Ok(rho.herm().inner(tau) * sigma.herm().inner(&tau_inv))
}

/// Gradient of the Uhlmann fidelity in its first argument at a
/// positive-definite pair:
///
/// ```text
/// ∇_ρ F(ρ,σ) = ½ ρ⁻¹ # σ,
/// ```
///
/// so that `F(ρ + tH, σ) = F(ρ,σ) + t·tr(∇_ρF · H) + O(t²)` for Hermitian
/// directions `H` (trace-preserving or not).
///
/// # Errors
///
/// [`Error::DimensionMismatch`]; [`Error::SingularInput`] if `ρ` is singular.
pub fn uhlmann_gradient(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<HermMat> {
    check_dims(rho, sigma)?;
    let rho_inv = matrix_function(rho.herm(), MatrixFunction::Inv)?;
    Ok(geometric_mean(&rho_inv, sigma.herm())?.scale(0.5))
}

/// A positive-operator-valued measure: PSD elements summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<HermMat>,
}

impl Povm {
    /// Validate and wrap a set of POVM elements.
    ///
    /// # Errors
    ///
    /// [`Error::DimensionMismatch`] on an empty set or inconsistent
    /// dimensions, [`Error::NotPsd`] if an element has a significantly
    /// negative eigenvalue, [`Error::IncompleteMeasurement`] if the elements
    /// do not sum to the identity within `1e−10 · dim`.
    pub fn new(elements: Vec<HermMat>) -> Result<Self> {
        let dim = match elements.first() {
            Some(e) => e.dim(),
            None => {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    found: 0,
                })
            }
        };
        let mut sum = HermMat::zeros(dim);
        for e in &elements {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim(),
                });
            }
            let report = linalg::psd_check(e, None)?;
            if !report.is_psd {
                return Err(Error::NotPsd {
                    min_eigenvalue: report.min_eigenvalue,
                });
            }
            sum = sum.add(e);
        }
        let residual = sum.sub(&HermMat::identity(dim)).frobenius_norm();
        if residual > 1e-10 * dim as f64 {
            return Err(Error::IncompleteMeasurement { residual });
        }
        Ok(Povm { elements })
    }

    /// The elements.
    pub fn elements(&self) -> &[HermMat] {
        &self.elements
    }

    /// Outcome distribution `pᵢ = tr(Eᵢ ρ)` of measuring a state.
    ///
    /// # Errors
    ///
    /// [`Error::DimensionMismatch`]; distribution validation errors if the
    /// elements were degenerate enough to produce an invalid vector.
    pub fn measure(&self, rho: &DensityMatrix) -> Result<linalg::ProbVector> {
        let dim = self.elements.first().map(|e| e.dim()).unwrap_or(0);
        if rho.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: rho.dim(),
            });
        }
        let p: Vec<f64> = self.elements.iter().map(|e| e.inner(rho.herm())).collect();
        linalg::ProbVector::new(p)
    }
}

/// The measurement that achieves the Uhlmann fidelity: the projective
/// measurement in the eigenbasis of the geometric mean `ρ⁻¹ # σ` (for PD
/// inputs). Measuring both states with it yields classical distributions
/// whose classical fidelity equals `F(ρ,σ)`; every other POVM yields a larger
/// classical fidelity.
///
/// # Errors
///
/// [`Error::DimensionMismatch`]; [`Error::SingularInput`] if `ρ` is singular.
pub fn optimal_povm(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Povm> {
    check_dims(rho, sigma)?;
    let rho_inv = matrix_function(rho.herm(), MatrixFunction::Inv)?;
    let mean = geometric_mean(&rho_inv, sigma.herm())?;
    let (_, v) = linalg::eig_herm(&mean)?;
    let n = rho.dim();
    let elements = (0..n)
        .map(|k| {
            let col: Vec<Complex64> = (0..n).map(|i| v.mat()[(i, k)]).collect();
            // Rank-one projector |v_k⟩⟨v_k|; exactly Hermitian after
            // hermitization of the outer product.
            CMat::from_fn(n, n, |i, j| col[i] * col[j].conj()).hermitize()
        })
        .collect();
    Povm::new(elements)
}

/// The unitary that rotates `σ^{1/2}` onto `ρ^{1/2}` in the polar sense,
/// realizing the Matsumoto fidelity as an overlap:
///
/// ```text
/// U = ρ^{−1/2} (σ # ρ) σ^{−1/2},     F_GM(ρ,σ) = tr(ρ^{1/2} U σ^{1/2} U†)…
/// ```
///
/// more precisely `tr(ρ^{1/2} · U · σ^{1/2})` with the returned `U`, which is
/// unitary for positive-definite inputs. Returns the pair `(U, value)`.
///
/// # Errors
///
/// [`Error::DimensionMismatch`]; [`Error::SingularInput`] if either state is
/// singular; [`Error::NotUnitary`] if conditioning destroyed unitarity.
pub fn matsumoto_via_rotation(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<(UnitaryMatrix, f64)> {
    check_dims(rho, sigma)?;
    let rho_inv_root = matrix_function(rho.herm(), MatrixFunction::InvSqrt)?;
    let sigma_inv_root = matrix_function(sigma.herm(), MatrixFunction::InvSqrt)?;
    let mean = geometric_mean(sigma.herm(), rho.herm())?;
    let u = rho_inv_root.mat().mul(mean.mat()).mul(sigma_inv_root.mat());
    let unitary = UnitaryMatrix::new(u)?;
    let rho_root = matrix_function(rho.herm(), MatrixFunction::Sqrt)?;
    let sigma_root = matrix_function(sigma.herm(), MatrixFunction::Sqrt)?;
    let value = rho_root
        .mat()
        .mul(unitary.mat())
        .mul(sigma_root.mat())
        .trace()
        .re;
    Ok((unitary, value))
}

/// All similarity measures of a pair of states, cross-validated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    /// Uhlmann fidelity `F`.
    pub uhlmann: f64,
    /// Holevo fidelity `F_H`.
    pub holevo: f64,
    /// Matsumoto fidelity `F_GM`.
    pub matsumoto: f64,
    /// Trace distance `Δ`.
    pub trace_distance: f64,
}

/// Compute all three fidelities plus the trace distance, and validate the
/// ordering invariant `F_GM ≤ F_H + 1e−8 ≤ F + 2e−8` as well as the range
/// `[−1e−8, 1 + 1e−8]` for each measure. Values are reported exactly as
/// computed — never clamped — so violations surface instead of being masked.
///
/// # Errors
///
/// [`Error::OrderingViolation`] if the invariant fails (a numerical defect
/// upstream, not a property of the inputs); otherwise as the individual
/// measures.
pub fn fidelity_report(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<FidelityReport> {
    let uhlmann = uhlmann_fidelity(rho, sigma)?;
    let holevo = holevo_fidelity(rho, sigma)?;
    let matsumoto = matsumoto_fidelity(rho, sigma)?;
    let trace_distance = trace_distance(rho, sigma)?;
    let in_range = |x: f64| (-1e-8..=1.0 + 1e-8).contains(&x);
    let ordered = matsumoto <= holevo + 1e-8 && holevo <= uhlmann + 1e-8;
    if !(ordered && in_range(uhlmann) && in_range(holevo) && in_range(matsumoto)) {
        return Err(Error::OrderingViolation {
            uhlmann,
            holevo,
            matsumoto,
        });
    }
    Ok(FidelityReport {
        uhlmann,
        holevo,
        matsumoto,
        trace_distance,
    })
}

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ProbVector;
    use alloc::vec;

    const TOL: f64 = 1e-9;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_state(d: &[f64]) -> DensityMatrix {
        DensityMatrix::new(HermMat::from_diag(d)).unwrap()
    }

    fn plus_state() -> DensityMatrix {
        let isq = 1.0 / libm::sqrt(2.0);
        DensityMatrix::pure(&[c(isq, 0.0), c(isq, 0.0)]).unwrap()
    }

    fn zero_state() -> DensityMatrix {
        DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn classical_fidelity_halves_vs_quarters() {
        let p = ProbVector::new(vec![0.5, 0.5]).unwrap();
        let q = ProbVector::new(vec![0.25, 0.75]).unwrap();
        let f = classical_fidelity(&p, &q).unwrap();
        assert!((f - 0.9659258262890683).abs() < 1e-12);
    }

    #[test]
    fn commuting_pair_agrees_with_classical() {
        // Commuting diagonal states coincide with the classical value for all
        // three measures.
        let rho = diag_state(&[0.5, 0.5]);
        let sigma = diag_state(&[0.25, 0.75]);
        let expect = 0.9659258262890683;
        assert!((uhlmann_fidelity(&rho, &sigma).unwrap() - expect).abs() < TOL);
        assert!((holevo_fidelity(&rho, &sigma).unwrap() - expect).abs() < TOL);
        assert!((matsumoto_fidelity(&rho, &sigma).unwrap() - expect).abs() < TOL);
    }

    #[test]
    fn strict_ordering_on_noncommuting_pair() {
        // ρ = diag(3/4, 1/4) against |+⟩⟨+|: the three measures separate.
        let rho = diag_state(&[0.75, 0.25]);
        let plus = plus_state();
        let f = uhlmann_fidelity(&rho, &plus).unwrap();
        let fh = holevo_fidelity(&rho, &plus).unwrap();
        let fgm = matsumoto_fidelity(&rho, &plus).unwrap();
        assert!((fh - 0.6830127018922193).abs() < TOL);
        assert!((fgm - libm::sqrt(3.0 / 8.0)).abs() < TOL);
        assert!(fgm < fh && fh < f);
    }

    #[test]
    fn pure_mixed_closed_forms_at_maximally_mixed() {
        // ρ = I/2 against any pure state: all three equal 1/√2.
        let rho = DensityMatrix::maximally_mixed(2);
        let isq = 1.0 / libm::sqrt(2.0);
        let trio = pure_mixed_fidelities(&rho, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((trio.uhlmann - isq).abs() < 1e-12);
        assert!((trio.holevo - isq).abs() < 1e-12);
        assert!((trio.matsumoto - isq).abs() < 1e-12);
    }

    #[test]
    fn pure_mixed_commuting_case_collapses() {
        // ρ = diag(3/4, 1/4) against |0⟩: eigenvector of ρ, so all three
        // equal √(3/4).
        let rho = diag_state(&[0.75, 0.25]);
        let trio = pure_mixed_fidelities(&rho, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let expect = libm::sqrt(0.75);
        assert!((trio.uhlmann - expect).abs() < 1e-12);
        assert!((trio.holevo - expect).abs() < 1e-12);
        assert!((trio.matsumoto - expect).abs() < 1e-12);
    }

    #[test]
    fn pure_mixed_matches_general_path() {
        let rho = diag_state(&[0.75, 0.25]);
        let plus = plus_state();
        let isq = 1.0 / libm::sqrt(2.0);
        let trio = pure_mixed_fidelities(&rho, &[c(isq, 0.0), c(isq, 0.0)]).unwrap();
        assert!((trio.uhlmann - uhlmann_fidelity(&rho, &plus).unwrap()).abs() < 1e-10);
        assert!((trio.holevo - holevo_fidelity(&rho, &plus).unwrap()).abs() < 1e-10);
        assert!((trio.matsumoto - matsumoto_fidelity(&rho, &plus).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn distinct_pure_states_have_zero_matsumoto() {
        let f = matsumoto_fidelity(&zero_state(), &plus_state()).unwrap();
        assert!(f.abs() <= 1e-12);
        // …while Uhlmann sees the overlap 1/√2.
        let u = uhlmann_fidelity(&zero_state(), &plus_state()).unwrap();
        assert!((u - 1.0 / libm::sqrt(2.0)).abs() < TOL);
    }

    #[test]
    fn trace_distance_of_near_orthogonal_pures() {
        // Pure pair with overlap cos(0.05): Δ = sin(0.05).
        let a = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let b = DensityMatrix::pure(&[c(libm::cos(0.05), 0.0), c(libm::sin(0.05), 0.0)]).unwrap();
        let d = trace_distance(&a, &b).unwrap();
        assert!((d - libm::sin(0.05)).abs() < 1e-12);
    }

    #[test]
    fn gradient_at_equal_maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed(2);
        let grad = uhlmann_gradient(&rho, &rho).unwrap();
        // ½ (I/2)⁻¹ # (I/2) = ½ I.
        assert!(grad.sub(&HermMat::identity(2).scale(0.5)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn alberti_identity_at_tau_identity() {
        // At ρ = σ the optimal τ is I and the objective is F² = 1.
        let rho = diag_state(&[0.5, 0.5]);
        let val = alberti_objective(&rho, &rho, &HermMat::identity(2)).unwrap();
        assert!((val - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alberti_minimum_is_squared_fidelity() {
        let rho = diag_state(&[0.75, 0.25]);
        let sigma = diag_state(&[0.25, 0.75]);
        let f = uhlmann_fidelity(&rho, &sigma).unwrap();
        // τ* ∝ ρ⁻¹ # σ.
        let rho_inv = matrix_function(rho.herm(), MatrixFunction::Inv).unwrap();
        let tau = geometric_mean(&rho_inv, sigma.herm()).unwrap();
        let val = alberti_objective(&rho, &sigma, &tau).unwrap();
        assert!((val - f * f).abs() < 1e-10);
        // Perturbing τ cannot go below the minimum.
        let perturbed = tau.add_scaled_identity(0.1);
        assert!(alberti_objective(&rho, &sigma, &perturbed).unwrap() >= f * f - 1e-10);
    }

    #[test]
    fn optimal_measurement_achieves_uhlmann() {
        let rho = diag_state(&[0.75, 0.25]);
        let sigma = DensityMatrix::new(
            HermMat::new(CMat::from_fn(2, 2, |i, j| {
                if i == j {
                    c(0.5, 0.0)
                } else {
                    c(0.2, 0.1)
                }
            }))
            .unwrap(),
        )
        .unwrap();
        let f = uhlmann_fidelity(&rho, &sigma).unwrap();
        let povm = optimal_povm(&rho, &sigma).unwrap();
        let p = povm.measure(&rho).unwrap();
        let q = povm.measure(&sigma).unwrap();
        let fc = classical_fidelity(&p, &q).unwrap();
        assert!((fc - f).abs() < 1e-10);
    }

    #[test]
    fn rotation_identity_recovers_matsumoto() {
        let rho = diag_state(&[0.75, 0.25]);
        let sigma = diag_state(&[0.25, 0.75]);
        let (u, value) = matsumoto_via_rotation(&rho, &sigma).unwrap();
        let fgm = matsumoto_fidelity(&rho, &sigma).unwrap();
        assert!((value - fgm).abs() < 1e-10);
        assert!(
            u.mat()
                .dagger()
                .mul(u.mat())
                .sub(&CMat::identity(2))
                .frobenius_norm()
                < 1e-10
        );
    }

    #[test]
    fn report_carries_all_measures() {
        let rho = diag_state(&[0.5, 0.5]);
        let sigma = diag_state(&[0.25, 0.75]);
        let report = fidelity_report(&rho, &sigma).unwrap();
        assert!((report.uhlmann - 0.9659258262890683).abs() < TOL);
        assert!(report.matsumoto <= report.holevo + 1e-8);
        assert!(report.holevo <= report.uhlmann + 1e-8);
        assert!(report.trace_distance >= 0.0);
    }
}
