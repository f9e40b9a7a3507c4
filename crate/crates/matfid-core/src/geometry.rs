//! Riemannian geometry of the positive-definite cone, and the hyperbolic
//! coordinate chart on the qubit cone.
//!
//! # The invariant metric
//!
//! The cone of positive-definite matrices carries the congruence-invariant
//! metric `⟨H₁, H₂⟩_M = tr(M⁻¹ H₁ M⁻¹ H₂)` at the base point `M`. Under it:
//!
//! * the geodesic from `A` to `B` is
//!   `γ(t) = A^{1/2} (A^{−1/2} B A^{−1/2})^t A^{1/2}`,
//! * its midpoint `γ(1/2)` is the geometric mean `A # B`, so the Matsumoto
//!   fidelity of two states is the trace of the geodesic midpoint,
//! * the distance is `δ(A,B) = ‖log(A^{−1/2} B A^{−1/2})‖_F`.
//!
//! # The qubit chart
//!
//! Positive-definite `2×2` matrices are parametrized by [`QubitCoords`]
//! `(α, r, θ, φ)` as `ρ = U D U†` with
//!
//! ```text
//! D = diag(e^{−(α+r)/√2}, e^{−(α−r)/√2}),
//! U = e^{iφσ_z} e^{iθσ_y},
//! ```
//!
//! so `α` moves the overall scale, `r ≥ 0` the eigenvalue splitting, and the
//! half-angles `(θ, φ)` the eigenframe (the Bloch-sphere angles of the
//! eigenbasis are `2θ` and `2φ`). Pulling the invariant metric back through
//! the chart gives
//!
//! ```text
//! ds² = dα² + dr² + 8 sinh²(r/√2) (dθ² + sin²(2θ) dφ²),
//! ```
//!
//! an `(α, r)`-plane flat factor times a sphere of exponentially growing
//! radius: at fixed `α` and `θ = π/4` (Bloch equator) the `(r, φ)` half-plane
//! is a hyperbolic plane of curvature `−1/2`. The unit-trace slice is the
//! graph `α = α_q(r)` of [`alpha_q`].
//!
//! # Curvature −1 model quantities
//!
//! [`midpoint_radius`] and [`hyperbolic_geodesic_r`] describe geodesics of
//! the standard curvature `−1` upper half-plane in `(r, φ)` coordinates:
//! the geodesic between `(r₀, 0)` and `(r₀, Δφ)` dips to its minimum radius
//! `arctanh(tanh r₀ · cos(Δφ/2))` at the halfway angle. They are model-level
//! descriptions of how large-`r` geodesics cut corners; the asymptotic trace
//! formula [`fgm_asymptotic`] plays the same role for the fidelity of the
//! corresponding unit-trace states and is accurate to `O(e^{−2 r₀/√2})`
//! relative error.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{matrix_function, pd_tol, CMat, HermMat, MatrixFunction};
use crate::{Error, Result};

const SQRT2: f64 = core::f64::consts::SQRT_2;

/// The invariant inner product `⟨H₁, H₂⟩_M = tr(M⁻¹ H₁ M⁻¹ H₂)` of two
/// Hermitian tangents at a positive-definite base point.
///
/// # Errors
///
/// [`Error::SingularInput`] if the base point is not PD;
/// [`Error::DimensionMismatch`].
pub fn metric_inner(base: &HermMat, h1: &HermMat, h2: &HermMat) -> Result<f64> {
    let n = base.dim();
    if h1.dim() != n || h2.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if h1.dim() != n { h1.dim() } else { h2.dim() },
        });
    }
    let inv = matrix_function(base, MatrixFunction::Inv)?;
    let prod = inv.mat().mul(h1.mat()).mul(inv.mat()).mul(h2.mat());
    Ok(prod.trace().re)
}

/// Geodesic distance `δ(A,B) = ‖log(A^{−1/2} B A^{−1/2})‖_F` between
/// positive-definite matrices.
///
/// # Errors
///
/// [`Error::SingularInput`] if either input is singular;
/// [`Error::DimensionMismatch`].
pub fn spd_distance(a: &HermMat, b: &HermMat) -> Result<f64> {
    let inv_root = matrix_function(a, MatrixFunction::InvSqrt)?;
    let inner = b.conjugate_by(inv_root.mat());
    let log = matrix_function(&inner, MatrixFunction::Log)?;
    Ok(log.frobenius_norm())
}

/// Point `γ(t) = A^{1/2} (A^{−1/2} B A^{−1/2})^t A^{1/2}` of the geodesic
/// from `A` (at `t = 0`) to `B` (at `t = 1`); `γ(1/2) = A # B`.
///
/// `A` must be positive definite; `B` may be semidefinite when `t ≥ 0`.
///
/// # Errors
///
/// [`Error::SingularInput`] if `A` is singular (or the conjugated `B` is,
/// for `t < 0`); [`Error::DimensionMismatch`].
pub fn geodesic_point(a: &HermMat, b: &HermMat, t: f64) -> Result<HermMat> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let root = matrix_function(a, MatrixFunction::Sqrt)?;
    let inv_root = matrix_function(a, MatrixFunction::InvSqrt)?;
    let inner = b.conjugate_by(inv_root.mat());
    let powered = matrix_function(&inner, MatrixFunction::Power(t))?;
    Ok(powered.conjugate_by(root.mat()))
}

/// Length of a curve of positive-definite matrices under the invariant
/// metric, integrated numerically.
///
/// The curve is sampled at `samples + 1` equally spaced parameters in
/// `[0, 1]`; on each subinterval the speed is evaluated from the
/// finite-difference tangent at the averaged base point (midpoint rule,
/// `O(samples⁻²)` accurate for smooth curves).
///
/// # Errors
///
/// [`Error::DomainError`] if `samples < 2`; errors from the curve or the
/// metric propagate.
pub fn path_length(curve: impl Fn(f64) -> Result<HermMat>, samples: usize) -> Result<f64> {
    if samples < 2 {
        return Err(Error::DomainError {
            value: samples as f64,
        });
    }
    let dt = 1.0 / samples as f64;
    let mut points = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        points.push(curve(i as f64 * dt)?);
    }
    let mut length = 0.0;
    for w in points.windows(2) {
        let base = w[0].add(&w[1]).scale(0.5);
        let tangent = w[1].sub(&w[0]).scale(1.0 / dt);
        let speed_sq = metric_inner(&base, &tangent, &tangent)?;
        length += libm::sqrt(speed_sq.max(0.0)) * dt;
    }
    Ok(length)
}

/// Coordinates `(α, r, θ, φ)` of the hyperbolic chart on positive-definite
/// `2×2` matrices; see the module docs for the chart map.
///
/// Canonical ranges enforced on construction: `r ≥ 0`, `θ ∈ [0, π]`,
/// `φ ∈ [0, 2π)`; `α` is unrestricted. The chart is `π`-periodic in `φ` and
/// coordinate extraction returns `θ ∈ [0, π/2]`, `φ ∈ [0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitCoords {
    alpha: f64,
    r: f64,
    theta: f64,
    phi: f64,
}

impl QubitCoords {
    /// Validate and build a coordinate tuple.
    ///
    /// # Errors
    ///
    /// [`Error::DomainError`] if `r < 0`, `θ ∉ [0, π]`, or `φ ∉ [0, 2π)`.
    pub fn new(alpha: f64, r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::DomainError { value: alpha });
        }
        if r < 0.0 || r.is_nan() {
            return Err(Error::DomainError { value: r });
        }
        if !(0.0..=core::f64::consts::PI).contains(&theta) {
            return Err(Error::DomainError { value: theta });
        }
        if !(0.0..core::f64::consts::TAU).contains(&phi) {
            return Err(Error::DomainError { value: phi });
        }
        Ok(QubitCoords {
            alpha,
            r,
            theta,
            phi,
        })
    }

    /// Scale coordinate.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Eigenvalue-splitting radius.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Eigenframe half-polar angle.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Eigenframe half-azimuthal angle.
    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Evaluate the chart: the positive-definite matrix at the given
/// coordinates.
pub fn qubit_from_coords(c: &QubitCoords) -> HermMat {
    let d1 = libm::exp(-(c.alpha + c.r) / SQRT2);
    let d2 = libm::exp(-(c.alpha - c.r) / SQRT2);
    let (ct, st) = (libm::cos(c.theta), libm::sin(c.theta));
    // ρ₀₀ = c²d₁ + s²d₂, ρ₁₁ = s²d₁ + c²d₂, ρ₀₁ = e^{2iφ} sc (d₂ − d₁).
    let rho00 = ct * ct * d1 + st * st * d2;
    let rho11 = st * st * d1 + ct * ct * d2;
    let off = st * ct * (d2 - d1);
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = Complex64::new(rho00, 0.0);
    m[(1, 1)] = Complex64::new(rho11, 0.0);
    m[(0, 1)] = Complex64::new(off * libm::cos(2.0 * c.phi), off * libm::sin(2.0 * c.phi));
    m[(1, 0)] = m[(0, 1)].conj();
    m.hermitize()
}

/// Invert the chart on a positive-definite `2×2` matrix.
///
/// Returns the canonical coordinates (`r ≥ 0`, `θ ∈ [0, π/2]`, `φ ∈ [0, π)`)
/// and a flag that is `true` when the matrix is scalar, where `r = 0` and the
/// angles are conventionally zero (every angle reproduces the matrix).
///
/// # Errors
///
/// [`Error::DimensionMismatch`] if the matrix is not `2×2`;
/// [`Error::SingularInput`] if it is not positive definite.
pub fn coords_from_qubit(m: &HermMat) -> Result<(QubitCoords, bool)> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: m.dim(),
        });
    }
    // Closed-form eigenvalues of a 2×2 Hermitian matrix.
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let off = m.get(0, 1);
    let mean = 0.5 * (a + d);
    let half_gap = libm::sqrt(0.25 * (a - d) * (a - d) + off.norm_sqr());
    let (lam1, lam2) = (mean - half_gap, mean + half_gap); // λ₁ ≤ λ₂
    if lam1 <= pd_tol(lam2.abs()) {
        return Err(Error::SingularInput {
            min_eigenvalue: lam1,
        });
    }
    let alpha = -(libm::log(lam1) + libm::log(lam2)) / SQRT2;
    let r = (libm::log(lam2) - libm::log(lam1)) / SQRT2;
    let delta = lam2 - lam1;
    if delta <= 1e-12 * lam2 {
        // Scalar matrix: eigenframe unconstrained.
        return Ok((QubitCoords::new(alpha, 0.0, 0.0, 0.0)?, true));
    }
    // ρ₀₀ − ρ₁₁ = −cos(2θ)·δ and |ρ₀₁| = sin(2θ)/2·δ fix θ ∈ [0, π/2];
    // arg(ρ₀₁) = 2φ fixes φ up to the chart's π-periodicity.
    let cos2t = (d - a) / delta;
    let sin2t = 2.0 * off.norm() / delta;
    let theta = 0.5 * libm::atan2(sin2t, cos2t);
    let phi = if off.norm() <= 1e-15 * delta {
        0.0
    } else {
        let mut p = 0.5 * libm::atan2(off.im, off.re);
        if p < 0.0 {
            p += core::f64::consts::PI;
        }
        // Guard the closed half-open range against rounding at the seam.
        if p >= core::f64::consts::PI {
            p = 0.0;
        }
        p
    };
    Ok((QubitCoords::new(alpha, r, theta, phi)?, false))
}

/// The scale coordinate of the unit-trace slice: `α_q(r)` is the unique `α`
/// with `tr ρ(α, r, ·, ·) = 1`, namely
///
/// ```text
/// α_q(r) = √2 · log(2 cosh(r/√2)),
/// ```
///
/// evaluated in overflow-safe form. Monotone increasing in `|r|`, with
/// `α_q(0) = √2 log 2`, and approaching the asymptote `α_q(r) → |r|` from
/// above as `|r| → ∞`.
pub fn alpha_q(r: f64) -> f64 {
    let x = libm::fabs(r) / SQRT2;
    // log(2 cosh x) = x + log(1 + e^{−2x}).
    SQRT2 * (x + libm::log1p(libm::exp(-2.0 * x)))
}

/// `arctanh` with an explicit domain guard.
///
/// # Errors
///
/// [`Error::DomainError`] if `|x| ≥ 1 − 1e−15`.
pub fn arctanh(x: f64) -> Result<f64> {
    if libm::fabs(x) >= 1.0 - 1e-15 {
        return Err(Error::DomainError { value: x });
    }
    Ok(libm::atanh(x))
}

/// Minimum radius reached by the curvature `−1` geodesic joining `(r₀, 0)`
/// and `(r₀, Δφ)` in hyperbolic polar coordinates:
///
/// ```text
/// r_mid = arctanh(tanh r₀ · cos(Δφ/2)),
/// ```
///
/// attained at the halfway angle `φ = Δφ/2`.
///
/// # Errors
///
/// [`Error::DomainError`] if the arctanh argument leaves `(−1, 1)` (it cannot
/// for finite `r₀`, but the guard is kept explicit).
pub fn midpoint_radius(r0: f64, dphi: f64) -> Result<f64> {
    arctanh(libm::tanh(r0) * libm::cos(0.5 * dphi))
}

/// Radial profile `r(φ)` of the same curvature `−1` geodesic:
///
/// ```text
/// r(φ) = arctanh( tanh r₀ / (cos φ − sin φ · (cos Δφ − 1)/sin Δφ) ),
/// ```
///
/// which passes through `(r₀, 0)`, `(r₀, Δφ)` and has its minimum
/// [`midpoint_radius`] at `φ = Δφ/2`.
///
/// # Errors
///
/// [`Error::DomainError`] if `Δφ` sits at a parametrization singularity
/// (`sin Δφ = 0` away from `Δφ = 0`) or the arctanh argument leaves
/// `(−1, 1)` (the profile has left the geodesic's angular range).
pub fn hyperbolic_geodesic_r(phi: f64, r0: f64, dphi: f64) -> Result<f64> {
    let s = libm::sin(dphi);
    let k = if libm::fabs(s) > 1e-12 {
        (libm::cos(dphi) - 1.0) / s
    } else if libm::fabs(libm::cos(dphi) - 1.0) < 1e-12 {
        0.0
    } else {
        return Err(Error::DomainError { value: dphi });
    };
    let denom = libm::cos(phi) - libm::sin(phi) * k;
    arctanh(libm::tanh(r0) / denom)
}

/// Asymptotic Matsumoto fidelity of the unit-trace qubit pair at equal
/// radius `r₀` and Bloch-azimuth separation `Δφ` on the Bloch equator:
///
/// ```text
/// F_GM ≈ 2 e^{−r₀/√2} / sin(Δφ/2),
/// ```
///
/// valid for large `r₀` with relative error `O(e^{−√2 r₀})`. The exact value
/// for this family is `1/√(cos²(Δφ/2) + sin²(Δφ/2) cosh²(r₀/√2))`.
///
/// # Errors
///
/// [`Error::DomainError`] if `sin(Δφ/2) ≤ 0` (separation outside `(0, 2π)`).
pub fn fgm_asymptotic(r0: f64, dphi: f64) -> Result<f64> {
    let s = libm::sin(0.5 * dphi);
    if s <= 0.0 {
        return Err(Error::DomainError { value: dphi });
    }
    Ok(2.0 * libm::exp(-r0 / SQRT2) / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomean::geometric_mean;

    const TOL: f64 = 1e-10;

    #[test]
    fn distance_between_scaled_identities() {
        // δ(I, 4I) in dim 2 = ‖log 4I‖_F = √2 · log 4.
        let a = HermMat::identity(2);
        let b = HermMat::identity(2).scale(4.0);
        let d = spd_distance(&a, &b).unwrap();
        assert!((d - SQRT2 * libm::log(4.0)).abs() < TOL);
    }

    #[test]
    fn geodesic_endpoints_and_midpoint() {
        let a = HermMat::from_diag(&[1.0, 4.0]);
        let b = HermMat::from_diag(&[4.0, 1.0]);
        assert!(
            geodesic_point(&a, &b, 0.0)
                .unwrap()
                .sub(&a)
                .frobenius_norm()
                < TOL
        );
        assert!(
            geodesic_point(&a, &b, 1.0)
                .unwrap()
                .sub(&b)
                .frobenius_norm()
                < TOL
        );
        let mid = geodesic_point(&a, &b, 0.5).unwrap();
        let mean = geometric_mean(&a, &b).unwrap();
        assert!(mid.sub(&mean).frobenius_norm() < TOL);
    }

    #[test]
    fn equidistance_of_midpoint() {
        let a = HermMat::from_diag(&[1.0, 2.0]);
        let b = HermMat::from_diag(&[3.0, 0.5]);
        let mid = geometric_mean(&a, &b).unwrap();
        let left = spd_distance(&a, &mid).unwrap();
        let right = spd_distance(&mid, &b).unwrap();
        let whole = spd_distance(&a, &b).unwrap();
        assert!((left - right).abs() < TOL);
        assert!((left + right - whole).abs() < TOL);
    }

    #[test]
    fn path_length_matches_distance_on_geodesic() {
        let a = HermMat::from_diag(&[1.0, 2.0]);
        let b = HermMat::from_diag(&[3.0, 0.5]);
        let len = path_length(|t| geodesic_point(&a, &b, t), 1000).unwrap();
        let d = spd_distance(&a, &b).unwrap();
        assert!((len - d).abs() < 1e-6);
    }

    #[test]
    fn chart_round_trip() {
        let cases = [
            (0.3, 1.2, 0.6, 0.4),
            (-0.5, 2.0, 1.2, 2.9),
            (1.0, 0.7, 0.01, 1.5),
            (0.0, 3.0, 1.5, 0.0),
        ];
        for &(alpha, r, theta, phi) in &cases {
            let c = QubitCoords::new(alpha, r, theta, phi).unwrap();
            let m = qubit_from_coords(&c);
            let (back, degenerate) = coords_from_qubit(&m).unwrap();
            assert!(!degenerate);
            assert!((back.alpha() - alpha).abs() < 1e-9);
            assert!((back.r() - r).abs() < 1e-9);
            // Extraction canonicalizes θ into [0, π/2] and φ into [0, π):
            // the listed cases are already canonical.
            assert!((back.theta() - theta).abs() < 1e-9);
            assert!(
                (back.phi() - phi).abs() < 1e-9,
                "phi: {} vs {}",
                back.phi(),
                phi
            );
            // Full round trip through the chart again.
            let m2 = qubit_from_coords(&back);
            assert!(m.sub(&m2).frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn chart_scalar_matrix_is_degenerate() {
        let m = HermMat::identity(2).scale(0.5);
        let (c, degenerate) = coords_from_qubit(&m).unwrap();
        assert!(degenerate);
        assert!(c.r() == 0.0 && c.theta() == 0.0 && c.phi() == 0.0);
        assert!((c.alpha() - SQRT2 * libm::log(2.0)).abs() < TOL);
    }

    #[test]
    fn chart_is_pi_periodic_in_phi() {
        let c1 = QubitCoords::new(0.2, 1.0, 0.7, 0.9).unwrap();
        let c2 = QubitCoords::new(0.2, 1.0, 0.7, 0.9 + core::f64::consts::PI).unwrap();
        let diff = qubit_from_coords(&c1).sub(&qubit_from_coords(&c2));
        assert!(diff.frobenius_norm() < 1e-12);
    }

    #[test]
    fn alpha_q_normalizes_trace() {
        for &r in &[0.0, 1.0, 5.0, 10.0] {
            let c = QubitCoords::new(alpha_q(r), r, 0.8, 0.3).unwrap();
            assert!((qubit_from_coords(&c).trace() - 1.0).abs() < 1e-12);
        }
        assert!((alpha_q(0.0) - SQRT2 * libm::log(2.0)).abs() < 1e-15);
        // Monotone increasing, approaching |r| from above. The excess is
        // √2·e^{−√2 r}: representable at r = 15 (≈ 8.6e−10), but sunk below
        // the rounding of √2·(r/√2) itself by r = 30, where only closeness
        // to the asymptote remains testable.
        assert!(alpha_q(1.0) > alpha_q(0.0));
        assert!(alpha_q(10.0) > alpha_q(5.0));
        assert!(alpha_q(15.0) - 15.0 > 0.0);
        assert!(alpha_q(15.0) - 15.0 < 1e-8);
        assert!((alpha_q(30.0) - 30.0).abs() < 1e-12);
    }

    #[test]
    fn pullback_metric_is_the_advertised_diagonal_form() {
        // Finite-difference tangents of the chart against
        // ds² = dα² + dr² + 8 sinh²(r/√2)(dθ² + sin²(2θ) dφ²).
        let (alpha, r, theta, phi) = (0.3, 1.2, 0.6, 0.4);
        let h = 1e-5;
        let at = |da: f64, dr: f64, dth: f64, dph: f64| {
            qubit_from_coords(
                &QubitCoords::new(alpha + da, r + dr, theta + dth, phi + dph).unwrap(),
            )
        };
        let base = at(0.0, 0.0, 0.0, 0.0);
        let tangent = |p: HermMat, m: HermMat| p.sub(&m).scale(0.5 / h);
        let t_alpha = tangent(at(h, 0.0, 0.0, 0.0), at(-h, 0.0, 0.0, 0.0));
        let t_r = tangent(at(0.0, h, 0.0, 0.0), at(0.0, -h, 0.0, 0.0));
        let t_theta = tangent(at(0.0, 0.0, h, 0.0), at(0.0, 0.0, -h, 0.0));
        let t_phi = tangent(at(0.0, 0.0, 0.0, h), at(0.0, 0.0, 0.0, -h));
        let g = |u: &HermMat, v: &HermMat| metric_inner(&base, u, v).unwrap();
        let sh = libm::sinh(r / SQRT2);
        let radial = 8.0 * sh * sh;
        let s2t = libm::sin(2.0 * theta);
        assert!((g(&t_alpha, &t_alpha) - 1.0).abs() < 1e-6);
        assert!((g(&t_r, &t_r) - 1.0).abs() < 1e-6);
        assert!((g(&t_theta, &t_theta) - radial).abs() < 1e-5 * radial.max(1.0));
        assert!((g(&t_phi, &t_phi) - radial * s2t * s2t).abs() < 1e-5 * radial.max(1.0));
        // Off-diagonal terms vanish.
        assert!(g(&t_alpha, &t_r).abs() < 1e-6);
        assert!(g(&t_alpha, &t_theta).abs() < 1e-6);
        assert!(g(&t_r, &t_theta).abs() < 1e-6);
        assert!(g(&t_r, &t_phi).abs() < 1e-6);
        assert!(g(&t_theta, &t_phi).abs() < 1e-6);
    }

    #[test]
    fn midpoint_radius_matches_profile_minimum() {
        let (r0, dphi) = (10.0, 0.1);
        let mid = midpoint_radius(r0, dphi).unwrap();
        assert!((mid - 3.6886694421607724).abs() < 1e-12);
        let at_half = hyperbolic_geodesic_r(0.5 * dphi, r0, dphi).unwrap();
        assert!((mid - at_half).abs() < 1e-12);
        // Endpoints of the profile hit r₀. The reconstruction runs through
        // arctanh∘tanh at r₀, whose condition number is e^{2r₀}·ε ≈ 5e−8
        // at r₀ = 10, so the endpoint tolerance is looser than the midpoint's.
        assert!((hyperbolic_geodesic_r(0.0, r0, dphi).unwrap() - r0).abs() < 1e-7);
        assert!((hyperbolic_geodesic_r(dphi, r0, dphi).unwrap() - r0).abs() < 1e-7);
    }

    #[test]
    fn asymptotic_fidelity_matches_exact_family_value() {
        // Exact value for the equal-radius equator family:
        // F_GM = 1/√(cos²(Δφ/2) + sin²(Δφ/2) cosh²(r₀/√2)).
        let (r0, dphi): (f64, f64) = (12.0, 0.5);
        let ch = libm::cosh(r0 / SQRT2);
        let (c, s) = (libm::cos(0.25), libm::sin(0.25));
        let exact = 1.0 / libm::sqrt(c * c + s * s * ch * ch);
        let approx = fgm_asymptotic(r0, dphi).unwrap();
        assert!(((approx - exact) / exact).abs() < 1e-3);
    }

    #[test]
    fn arctanh_domain_guard() {
        assert!(arctanh(0.5).is_ok());
        assert!(matches!(arctanh(1.0), Err(Error::DomainError { .. })));
        assert!(matches!(arctanh(-1.5), Err(Error::DomainError { .. })));
    }

    #[test]
    fn coords_validation() {
        assert!(QubitCoords::new(0.0, -0.1, 0.0, 0.0).is_err());
        assert!(QubitCoords::new(0.0, 0.0, 4.0, 0.0).is_err());
        assert!(QubitCoords::new(0.0, 0.0, 0.0, 7.0).is_err());
    }
}
