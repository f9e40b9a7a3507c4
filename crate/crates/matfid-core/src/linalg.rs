//! Dense complex matrices, Hermitian eigendecomposition, and the spectral
//! toolbox the rest of the crate is built on.
//!
//! # Implementation Details
//!
//! * [`CMat`] is a dense row-major `Vec<Complex64>` with explicit dimensions;
//!   no attempt is made at a general-purpose linear algebra surface — only the
//!   operations the fidelity and SDP code actually needs are exposed.
//! * Eigendecomposition uses a cyclic complex Jacobi iteration. Matrices here
//!   are small (dimension ≤ 32 for the direct sums and Choi matrices that
//!   appear in practice), where Jacobi is simple, accurate to machine
//!   precision, and has no convergence pathologies on Hermitian input.
//! * Singular values are obtained from the Hermitian eigenvalues of the
//!   Jordan–Wielandt embedding `[[0, M], [M†, 0]]`, whose nonnegative spectrum
//!   is exactly the singular values of `M` padded with zeros. Unlike `M†M`,
//!   this preserves absolute accuracy `~1e−15·σ_max` for the *small* singular
//!   values, which the rank decisions below rely on.
//! * Matrices that are Hermitian by mathematical necessity but computed via
//!   non-symmetric products are re-hermitized as `(M + M†)/2` before use.
//!
//! # Tolerances
//!
//! All comparisons are relative to the scale of the input:
//!
//! * [`psd_tol`]: `1e−10 · max(1, ‖H‖_op)` — slack when certifying `H ⪰ 0`;
//! * [`pd_tol`]: `1e−10 · max(1, ‖H‖_op)` — margin when requiring `H ≻ 0`
//!   (kept an order of magnitude below the smallest identity shift any
//!   caller applies on purpose, so deliberate regularization always clears
//!   the gate);
//! * [`rank_tol`]: `1e−9 · σ_max` — cutoff between zero and nonzero singular
//!   values in rank decisions;
//! * [`spectral_noise_tol`]: `1e−14 · ‖H‖_op` — eigenvalues this close to
//!   zero are rounding noise on an exact zero and are flushed before the
//!   PSD-domain spectral functions are applied (see [`matrix_function`]).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::{Error, Result};

/// Slack for certifying positive semidefiniteness: `1e−10 · max(1, ‖H‖_op)`.
pub fn psd_tol(op_norm: f64) -> f64 {
    1e-10 * op_norm.max(1.0)
}

/// Margin for requiring strict positive definiteness: `1e−10 · max(1, ‖H‖_op)`.
pub fn pd_tol(op_norm: f64) -> f64 {
    1e-10 * op_norm.max(1.0)
}

/// Rank cutoff between zero and nonzero singular values: `1e−9 · σ_max`.
pub fn rank_tol(sigma_max: f64) -> f64 {
    1e-9 * sigma_max
}

/// Noise floor below which a computed eigenvalue is indistinguishable from an
/// exact zero: `1e−14 · ‖H‖_op`.
///
/// The Jacobi eigensolver delivers eigenvalues with absolute error a small
/// multiple of `ε·‖H‖_op`, so anything inside this band carries no
/// information about the true eigenvalue beyond "it is zero at working
/// precision". The PSD-domain spectral functions flush such values to zero
/// rather than clamping only the negative side: the root functions have
/// unbounded slope at the origin, so a stray `+1e−16` on the kernel of a
/// projector would otherwise surface as `√1e−16 = 1e−8` in the square root —
/// exactly the scale at which fidelities of pure states are compared.
pub fn spectral_noise_tol(op_norm: f64) -> f64 {
    1e-14 * op_norm
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build a matrix entrywise from a closure.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build a square matrix from a flat row-major slice.
    ///
    /// # Errors
    ///
    /// [`Error::DimensionMismatch`] if the slice length is not `dim²`.
    pub fn from_flat(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(CMat {
            rows: dim,
            cols: dim,
            data,
        })
    }

    /// Diagonal square matrix with the given real diagonal.
    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMat::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Whether the matrix is square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Flat row-major view of the entries.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose `M†`.
    pub fn dagger(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Plain transpose `Mᵀ` (no conjugation).
    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix sum. Panics on shape mismatch (an internal programming error,
    /// not a data error: all public entry points validate shapes first).
    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        out
    }

    /// Matrix difference.
    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        out
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> CMat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// Real scalar multiple.
    pub fn scale_re(&self, s: f64) -> CMat {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Trace (square matrices).
    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm `√(Σ |m_ij|²)`.
    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hermitian average `(M + M†)/2` of a square matrix.
    pub fn hermitize(&self) -> HermMat {
        debug_assert!(self.is_square());
        let n = self.rows;
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(self[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (self[(i, j)] + self[(j, i)].conj()).scale_c(0.5);
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        HermMat { mat: m }
    }

    /// Largest entrywise asymmetry `max |M[i][j] − conj(M[j][i])|`.
    pub fn max_asymmetry(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Copy `block` into `self` with its upper-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &CMat) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Extract the `rows × cols` block with upper-left corner at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        CMat::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMat) -> CMat {
        let (ra, ca) = (self.rows, self.cols);
        let (rb, cb) = (other.rows, other.cols);
        CMat::from_fn(ra * rb, ca * cb, |i, j| {
            self[(i / rb, j / cb)] * other[(i % rb, j % cb)]
        })
    }

    /// Direct sum `self ⊕ other` (block diagonal).
    pub fn dirsum(&self, other: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }
}

/// Small helper: complex scaling by a real factor without constructing a
/// `Complex64` at every call site.
trait ScaleC {
    fn scale_c(self, s: f64) -> Self;
}

impl ScaleC for Complex64 {
    fn scale_c(self, s: f64) -> Self {
        Complex64::new(self.re * s, self.im * s)
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Hermitian matrix: square, with `M = M†` enforced by hermitization on
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermMat {
    mat: CMat,
}

impl HermMat {
    /// Wrap a square matrix, hermitizing it as `(M + M†)/2`.
    ///
    /// # Errors
    ///
    /// [`Error::NotSquare`] if the matrix is rectangular.
    pub fn new(mat: CMat) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows,
                cols: mat.cols,
            });
        }
        Ok(mat.hermitize())
    }

    /// Wrap a square matrix, rejecting it if any entry deviates from
    /// Hermiticity by more than `tol` (instead of silently averaging).
    ///
    /// # Errors
    ///
    /// [`Error::NotSquare`] or [`Error::NotHermitian`].
    pub fn new_strict(mat: CMat, tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows,
                cols: mat.cols,
            });
        }
        let asymmetry = mat.max_asymmetry();
        if asymmetry > tol {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(mat.hermitize())
    }

    /// Zero matrix.
    pub fn zeros(n: usize) -> Self {
        HermMat {
            mat: CMat::zeros(n, n),
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        HermMat {
            mat: CMat::identity(n),
        }
    }

    /// Diagonal matrix with the given real diagonal.
    pub fn from_diag(diag: &[f64]) -> Self {
        HermMat {
            mat: CMat::from_diag(diag),
        }
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.mat.rows
    }

    /// Underlying matrix.
    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// Entry access.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    /// Sum (exactly Hermitian: real-linear combinations preserve Hermiticity
    /// entrywise, no re-hermitization needed).
    pub fn add(&self, other: &HermMat) -> HermMat {
        HermMat {
            mat: self.mat.add(&other.mat),
        }
    }

    /// Difference.
    pub fn sub(&self, other: &HermMat) -> HermMat {
        HermMat {
            mat: self.mat.sub(&other.mat),
        }
    }

    /// Real scalar multiple.
    pub fn scale(&self, s: f64) -> HermMat {
        HermMat {
            mat: self.mat.scale_re(s),
        }
    }

    /// `self + s·I`.
    pub fn add_scaled_identity(&self, s: f64) -> HermMat {
        let mut mat = self.mat.clone();
        for i in 0..mat.rows {
            mat[(i, i)] += Complex64::new(s, 0.0);
        }
        HermMat { mat }
    }

    /// The Hilbert–Schmidt inner product `tr(self · other)`, real for
    /// Hermitian operands.
    pub fn inner(&self, other: &HermMat) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                // tr(AB) = Σ_ij A_ij B_ji = Σ_ij A_ij conj(B_ij) for Hermitian B.
                acc += (self.get(i, j) * other.get(i, j).conj()).re;
            }
        }
        acc
    }

    /// Conjugation `X · self · X†`, re-hermitized (the product is Hermitian up
    /// to rounding).
    pub fn conjugate_by(&self, x: &CMat) -> HermMat {
        x.mul(&self.mat).mul(&x.dagger()).hermitize()
    }
}

/// Density matrix: Hermitian, positive semidefinite within [`psd_tol`], and
/// unit trace within `1e−12`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: HermMat,
}

impl DensityMatrix {
    /// Validate and wrap a Hermitian matrix as a quantum state.
    ///
    /// # Errors
    ///
    /// [`Error::NotPsd`] if an eigenvalue is below `−psd_tol`, or
    /// [`Error::InvalidTrace`] if `|tr − 1| > 1e−12`.
    pub fn new(mat: HermMat) -> Result<Self> {
        let trace = mat.trace();
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidTrace { trace });
        }
        let report = psd_check(&mat, None)?;
        if !report.is_psd {
            return Err(Error::NotPsd {
                min_eigenvalue: report.min_eigenvalue,
            });
        }
        Ok(DensityMatrix { mat })
    }

    /// The pure state `|ψ⟩⟨ψ|` of a unit vector.
    ///
    /// # Errors
    ///
    /// [`Error::NotNormalized`] if `‖ψ‖` deviates from 1 by more than `1e−10`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = libm::sqrt(psi.iter().map(|z| z.norm_sqr()).sum());
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
        let n = psi.len();
        let mat = CMat::from_fn(n, n, |i, j| psi[i] * psi[j].conj()).hermitize();
        // Normalize the trace exactly so the 1e−12 trace gate is met even for
        // inputs at the edge of the 1e−10 norm tolerance.
        let tr = mat.trace();
        DensityMatrix::new(mat.scale(1.0 / tr))
    }

    /// Diagonal state from a probability vector.
    pub fn from_probs(p: &ProbVector) -> Self {
        DensityMatrix {
            mat: HermMat::from_diag(p.probs()),
        }
    }

    /// Maximally mixed state `I/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix {
            mat: HermMat::identity(n).scale(1.0 / n as f64),
        }
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// The underlying Hermitian matrix.
    pub fn herm(&self) -> &HermMat {
        &self.mat
    }

    /// The underlying raw matrix.
    pub fn mat(&self) -> &CMat {
        self.mat.mat()
    }
}

/// Unitary matrix: square with `‖U†U − I‖_F ≤ 1e−12 · dim` checked on
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    mat: CMat,
}

impl UnitaryMatrix {
    /// Validate and wrap a unitary.
    ///
    /// # Errors
    ///
    /// [`Error::NotSquare`] or [`Error::NotUnitary`].
    pub fn new(mat: CMat) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows,
                cols: mat.cols,
            });
        }
        let n = mat.rows;
        let residual = mat
            .dagger()
            .mul(&mat)
            .sub(&CMat::identity(n))
            .frobenius_norm();
        if residual > 1e-12 * n as f64 {
            return Err(Error::NotUnitary { residual });
        }
        Ok(UnitaryMatrix { mat })
    }

    /// Identity.
    pub fn identity(n: usize) -> Self {
        UnitaryMatrix {
            mat: CMat::identity(n),
        }
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.mat.rows
    }

    /// Underlying matrix.
    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    /// Conjugate a Hermitian matrix: `U · H · U†`.
    pub fn conjugate(&self, h: &HermMat) -> HermMat {
        h.conjugate_by(&self.mat)
    }
}

/// Discrete probability distribution: nonnegative entries summing to 1 within
/// `1e−12`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    p: Vec<f64>,
}

impl ProbVector {
    /// Validate and wrap a probability vector. Entries in `[−1e−12, 0)` are
    /// clamped to zero (harmless rounding from quadratic forms); anything more
    /// negative is rejected.
    ///
    /// # Errors
    ///
    /// [`Error::NegativeProbability`] or [`Error::ProbabilitySum`].
    pub fn new(p: Vec<f64>) -> Result<Self> {
        let mut clamped = p;
        for x in clamped.iter_mut() {
            if *x < 0.0 {
                if *x < -1e-12 {
                    return Err(Error::NegativeProbability { value: *x });
                }
                *x = 0.0;
            }
        }
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::ProbabilitySum { sum });
        }
        Ok(ProbVector { p: clamped })
    }

    /// Number of outcomes.
    pub fn len(&self) -> usize {
        self.p.len()
    }

    /// Whether the distribution is empty (it never is after validation, but
    /// the method keeps clippy's `len`-without-`is_empty` lint honest).
    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// The entries.
    pub fn probs(&self) -> &[f64] {
        &self.p
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// iteration.
///
/// Returns eigenvalues in ascending order and the unitary `V` whose columns
/// are the matching eigenvectors, so `H = V · diag(λ) · V†`.
///
/// # Implementation Details
///
/// Each sweep annihilates every off-diagonal pair `(p, q)` with a complex
/// Givens rotation; for Hermitian input the iteration converges
/// quadratically once the off-diagonal mass is small. The sweep cap of 100 is
/// far beyond what dimensions ≤ 32 need (6–10 sweeps in practice).
///
/// # Errors
///
/// [`Error::NonConvergence`] if the off-diagonal residual has not dropped to
/// `1e−14 · ‖H‖_F` after 100 sweeps.
pub fn eig_herm(h: &HermMat) -> Result<(Vec<f64>, UnitaryMatrix)> {
    const MAX_SWEEPS: usize = 100;
    let n = h.dim();
    if n == 0 {
        return Ok((Vec::new(), UnitaryMatrix::identity(0)));
    }
    let mut a = h.mat().clone();
    let mut v = CMat::identity(n);
    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = 1e-14 * scale;

    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);
    while off > target {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NonConvergence {
                sweeps,
                residual: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq.scale_c(1.0 / mag);
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                // Smaller-angle root of t² + 2τt − 1 = 0 keeps |θ| ≤ π/4.
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                let sp = phase.scale_c(s);

                // Row update A ← J†A: row p ← c·row p − s·e^{iφ}·row q,
                //                     row q ← s·e^{−iφ}·row p + c·row q.
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj.scale_c(c) - sp * aqj;
                    a[(q, j)] = sp.conj() * apj + aqj.scale_c(c);
                }
                // Column update A ← AJ and accumulate V ← VJ.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip.scale_c(c) - sp.conj() * aiq;
                    a[(i, q)] = sp * aip + aiq.scale_c(c);

                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip.scale_c(c) - sp.conj() * viq;
                    v[(i, q)] = sp * vip + viq.scale_c(c);
                }
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    // Sort eigenvalues ascending, permuting eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("real eigenvalues")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    let unitary = UnitaryMatrix::new(vectors)?;
    Ok((eigenvalues, unitary))
}

fn off_diagonal_norm(a: &CMat) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            acc += 2.0 * a[(p, q)].norm_sqr();
        }
    }
    libm::sqrt(acc)
}

/// Spectral functions applied through the eigendecomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixFunction {
    /// Principal square root (input must be PSD; eigenvalues
    /// indistinguishable from zero are flushed to zero, see
    /// [`matrix_function`]).
    Sqrt,
    /// Inverse square root (input must be PD).
    InvSqrt,
    /// Matrix logarithm (input must be PD).
    Log,
    /// Inverse (input must be PD).
    Inv,
    /// Real matrix power `H^t` (PSD input for `t ≥ 0` with flushing as for
    /// `Sqrt`; PD input required for `t < 0`).
    Power(f64),
}

/// Apply a spectral function: `f(H) = V · f(Λ) · V†`, re-hermitized.
///
/// For the PSD-domain functions (`Sqrt` and `Power(t)` with `t ≥ 0`),
/// eigenvalues within [`spectral_noise_tol`] of zero are flushed to an exact
/// zero before `f` is applied, and remaining negative rounding noise is
/// clamped to zero. The flush matters for rank-deficient input: the root
/// functions have unbounded slope at the origin, so noise `ε` on a kernel
/// eigenvalue would otherwise be amplified to `√ε`.
///
/// # Errors
///
/// [`Error::NotPsd`] if a PSD-domain function meets an eigenvalue below
/// `−psd_tol`; [`Error::SingularInput`] if a PD-domain function meets an
/// eigenvalue below [`pd_tol`]; [`Error::NonConvergence`] from the
/// eigensolver.
pub fn matrix_function(h: &HermMat, f: MatrixFunction) -> Result<HermMat> {
    let (eigenvalues, v) = eig_herm(h)?;
    let op_norm = eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let mapped = map_spectrum(&eigenvalues, op_norm, f)?;
    Ok(reassemble(&mapped, v.mat()))
}

/// Apply a spectral function to an eigendecomposition already in hand.
fn map_spectrum(eigenvalues: &[f64], op_norm: f64, f: MatrixFunction) -> Result<Vec<f64>> {
    let needs_pd = matches!(
        f,
        MatrixFunction::InvSqrt | MatrixFunction::Log | MatrixFunction::Inv
    ) || matches!(f, MatrixFunction::Power(t) if t < 0.0);
    let min = eigenvalues.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    if needs_pd {
        if min <= pd_tol(op_norm) {
            return Err(Error::SingularInput {
                min_eigenvalue: min,
            });
        }
    } else if min < -psd_tol(op_norm) {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    let noise_floor = spectral_noise_tol(op_norm);
    let mapped = eigenvalues
        .iter()
        .map(|&lambda| {
            // For the PSD-domain functions, flush eigenvalues inside the
            // noise floor to an exact zero (not merely clamping the negative
            // side): the root functions amplify positive noise `ε` to `√ε`.
            let x = if needs_pd {
                lambda
            } else if lambda.abs() <= noise_floor {
                0.0
            } else {
                lambda.max(0.0)
            };
            match f {
                MatrixFunction::Sqrt => libm::sqrt(x),
                MatrixFunction::InvSqrt => 1.0 / libm::sqrt(x),
                MatrixFunction::Log => libm::log(x),
                MatrixFunction::Inv => 1.0 / x,
                MatrixFunction::Power(t) => {
                    if x == 0.0 && t == 0.0 {
                        1.0
                    } else {
                        libm::pow(x, t)
                    }
                }
            }
        })
        .collect();
    Ok(mapped)
}

fn reassemble(eigenvalues: &[f64], v: &CMat) -> HermMat {
    let lambda = CMat::from_diag(eigenvalues);
    v.mul(&lambda).mul(&v.dagger()).hermitize()
}

/// Result of a positive-semidefiniteness check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    /// Whether `min eigenvalue ≥ −tol`.
    pub is_psd: bool,
    /// The smallest eigenvalue found.
    pub min_eigenvalue: f64,
    /// The tolerance that was applied.
    pub tol: f64,
}

/// Check `H ⪰ 0` within a tolerance (default: [`psd_tol`] at the matrix's own
/// operator norm). The smallest eigenvalue is always reported so callers can
/// quantify the violation.
///
/// # Errors
///
/// [`Error::NonConvergence`] from the eigensolver.
pub fn psd_check(h: &HermMat, tol: Option<f64>) -> Result<PsdReport> {
    let (eigenvalues, _) = eig_herm(h)?;
    let op_norm = eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let tol = tol.unwrap_or_else(|| psd_tol(op_norm));
    let min_eigenvalue = eigenvalues.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    Ok(PsdReport {
        is_psd: min_eigenvalue >= -tol,
        min_eigenvalue,
        tol,
    })
}

/// Smallest eigenvalue of a Hermitian matrix.
///
/// # Errors
///
/// [`Error::NonConvergence`] from the eigensolver.
pub fn min_eigenvalue(h: &HermMat) -> Result<f64> {
    let (eigenvalues, _) = eig_herm(h)?;
    Ok(eigenvalues.first().copied().unwrap_or(0.0))
}

/// Feasibility of the block matrix `[[A, X], [X†, B]] ⪰ 0`, decided through
/// the Schur complement `A − X B⁻¹ X†` when `B` is positive definite, and
/// through the assembled block matrix otherwise.
///
/// The two routes agree within tolerance whenever both apply; the suite
/// checks this agreement explicitly.
///
/// # Errors
///
/// Propagates eigensolver failures.
pub fn schur_feasibility(a: &HermMat, x: &CMat, b: &HermMat) -> Result<bool> {
    let n = a.dim();
    if x.rows() != n || x.cols() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.rows(),
        });
    }
    let (eig_b, _) = eig_herm(b)?;
    let b_op = eig_b.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let b_min = eig_b.first().copied().unwrap_or(0.0);
    if b_min > pd_tol(b_op) {
        let b_inv = matrix_function(b, MatrixFunction::Inv)?;
        let schur = a
            .mat()
            .sub(&x.mul(b_inv.mat()).mul(&x.dagger()))
            .hermitize();
        // The Schur complement inherits the scale of the whole block, not just
        // its own: tolerate relative to max of the block norms.
        let scale = a
            .frobenius_norm()
            .max(b.frobenius_norm())
            .max(x.frobenius_norm());
        Ok(psd_check(&schur, Some(psd_tol(scale)))?.is_psd)
    } else {
        let block = assemble_block(a, x, b);
        Ok(psd_check(&block, None)?.is_psd)
    }
}

/// Assemble the Hermitian block matrix `[[A, X], [X†, B]]`.
pub fn assemble_block(a: &HermMat, x: &CMat, b: &HermMat) -> HermMat {
    let n = a.dim();
    let m = b.dim();
    let mut block = CMat::zeros(n + m, n + m);
    block.set_block(0, 0, a.mat());
    block.set_block(0, n, x);
    block.set_block(n, 0, &x.dagger());
    block.set_block(n, n, b.mat());
    // Exactly Hermitian by construction; hermitize only normalizes the
    // diagonal imaginary parts of A and B, which are zero already.
    block.hermitize()
}

/// Singular values of a (possibly rectangular) matrix, descending.
///
/// Computed from the Hermitian eigenvalues of the Jordan–Wielandt embedding
/// `[[0, M], [M†, 0]]`, whose spectrum is `{±σ_i}` padded with zeros; this
/// keeps absolute accuracy `~1e−15·σ_max` even for the smallest singular
/// values.
///
/// # Errors
///
/// [`Error::NonConvergence`] from the eigensolver.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    let (r, c) = (m.rows(), m.cols());
    let k = r.min(c);
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut embed = CMat::zeros(r + c, r + c);
    embed.set_block(0, r, m);
    embed.set_block(r, 0, &m.dagger());
    let h = HermMat { mat: embed };
    let (eigenvalues, _) = eig_herm(&h)?;
    // Ascending spectrum {−σ_k, …, −σ_1, 0…0, σ_1, …, σ_k}: the top k entries
    // are the singular values, largest last.
    let mut sv: Vec<f64> = eigenvalues[r + c - k..]
        .iter()
        .map(|&x| x.max(0.0))
        .collect();
    sv.reverse();
    Ok(sv)
}

/// Matrix norms used by the fidelity formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// Trace norm `‖M‖₁ = Σ σ_i`.
    Trace,
    /// Frobenius norm `‖M‖₂ = √(Σ σ_i²)`.
    Frobenius,
    /// Operator norm `‖M‖_∞ = σ_max`.
    Operator,
}

/// Compute a matrix norm.
///
/// # Errors
///
/// [`Error::NonConvergence`] from the eigensolver (trace and operator norms
/// only; the Frobenius norm is entrywise).
pub fn norm(m: &CMat, kind: NormKind) -> Result<f64> {
    match kind {
        NormKind::Frobenius => Ok(m.frobenius_norm()),
        NormKind::Trace => Ok(singular_values(m)?.iter().sum()),
        NormKind::Operator => Ok(singular_values(m)?.first().copied().unwrap_or(0.0)),
    }
}

/// Structure-preserving compositions of Hermitian matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    /// Kronecker (tensor) product.
    Kron,
    /// Direct sum (block diagonal).
    DirSum,
}

/// Compose two Hermitian matrices; both compositions of Hermitian inputs are
/// exactly Hermitian entrywise.
pub fn compose(a: &HermMat, b: &HermMat, how: Composition) -> HermMat {
    let mat = match how {
        Composition::Kron => a.mat().kron(b.mat()),
        Composition::DirSum => a.mat().dirsum(b.mat()),
    };
    HermMat { mat }
}

/// Whether the images (column spaces) of two PSD matrices intersect only in
/// the zero vector.
///
/// Ranks are decided with [`rank_tol`] against each matrix's own largest
/// eigenvalue magnitude; the intersection is decided by comparing
/// `rank [U_A | U_B]` (via singular values of the stacked image bases) with
/// `rank A + rank B`.
///
/// # Errors
///
/// Propagates eigensolver failures.
pub fn image_intersection_trivial(a: &HermMat, b: &HermMat) -> Result<bool> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    let basis_a = image_basis(a)?;
    let basis_b = image_basis(b)?;
    let (ra, rb) = (basis_a.cols(), basis_b.cols());
    if ra == 0 || rb == 0 {
        return Ok(true);
    }
    if ra + rb > n {
        return Ok(false);
    }
    let mut stacked = CMat::zeros(n, ra + rb);
    stacked.set_block(0, 0, &basis_a);
    stacked.set_block(0, ra, &basis_b);
    let sv = singular_values(&stacked)?;
    let cutoff = rank_tol(sv.first().copied().unwrap_or(0.0));
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    Ok(rank == ra + rb)
}

/// Orthonormal basis for the image of a PSD matrix: eigenvectors whose
/// eigenvalues exceed [`rank_tol`] relative to the spectral radius.
fn image_basis(h: &HermMat) -> Result<CMat> {
    let (eigenvalues, v) = eig_herm(h)?;
    let scale = eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let cutoff = rank_tol(scale);
    let keep: Vec<usize> = (0..eigenvalues.len())
        .filter(|&i| eigenvalues[i] > cutoff)
        .collect();
    let n = h.dim();
    Ok(CMat::from_fn(n, keep.len(), |i, j| v.mat()[(i, keep[j])]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> HermMat {
        HermMat::new(CMat::from_fn(2, 2, |i, j| {
            if i == j {
                c(0.0, 0.0)
            } else {
                c(1.0, 0.0)
            }
        }))
        .unwrap()
    }

    #[test]
    fn eig_pauli_x_eigenpairs() {
        let (vals, v) = eig_herm(&pauli_x()).unwrap();
        assert!((vals[0] + 1.0).abs() < TOL);
        assert!((vals[1] - 1.0).abs() < TOL);
        // Eigenvectors (|0⟩ ∓ |1⟩)/√2 up to phase: check overlap magnitude.
        let isq = 1.0 / libm::sqrt(2.0);
        let minus = [c(isq, 0.0), c(-isq, 0.0)];
        let plus = [c(isq, 0.0), c(isq, 0.0)];
        let overlap_minus: Complex64 = (0..2).map(|i| minus[i].conj() * v.mat()[(i, 0)]).sum();
        let overlap_plus: Complex64 = (0..2).map(|i| plus[i].conj() * v.mat()[(i, 1)]).sum();
        assert!((overlap_minus.norm() - 1.0).abs() < TOL);
        assert!((overlap_plus.norm() - 1.0).abs() < TOL);
    }

    #[test]
    fn eig_reconstructs_complex_matrix() {
        // A fixed non-trivial Hermitian matrix with complex off-diagonals.
        let h = HermMat::new(CMat::from_fn(3, 3, |i, j| {
            let (fi, fj) = (i as f64, j as f64);
            if i == j {
                c(fi + 1.0, 0.0)
            } else {
                c(0.3 * (fi + fj), 0.2 * (fj - fi))
            }
        }))
        .unwrap();
        let (vals, v) = eig_herm(&h).unwrap();
        let recon = reassemble(&vals, v.mat());
        assert!(recon.mat().sub(h.mat()).frobenius_norm() < 1e-13);
        // Ascending order.
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sqrt_squares_back() {
        let h = HermMat::new(CMat::from_fn(2, 2, |i, j| {
            if i == j {
                c(1.0 + i as f64, 0.0)
            } else {
                c(0.5, 0.25)
            }
        }))
        .unwrap();
        let root = matrix_function(&h, MatrixFunction::Sqrt).unwrap();
        let squared = root.mat().mul(root.mat());
        assert!(squared.sub(h.mat()).frobenius_norm() < 1e-13);
    }

    #[test]
    fn inv_sqrt_rejects_singular() {
        let h = HermMat::from_diag(&[1.0, 0.0]);
        let err = matrix_function(&h, MatrixFunction::InvSqrt).unwrap_err();
        assert!(matches!(err, Error::SingularInput { .. }));
    }

    #[test]
    fn sqrt_clamps_rounding_noise() {
        let h = HermMat::from_diag(&[1.0, -1e-14]);
        let root = matrix_function(&h, MatrixFunction::Sqrt).unwrap();
        assert!((root.get(1, 1).re).abs() < TOL);
    }

    #[test]
    fn sqrt_rejects_genuinely_negative() {
        let h = HermMat::from_diag(&[1.0, -0.5]);
        assert!(matches!(
            matrix_function(&h, MatrixFunction::Sqrt),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn norms_of_fixed_matrix() {
        // M = diag(2, −1): singular values (2, 1).
        let m = CMat::from_diag(&[2.0, -1.0]);
        assert!((norm(&m, NormKind::Trace).unwrap() - 3.0).abs() < TOL);
        assert!((norm(&m, NormKind::Operator).unwrap() - 2.0).abs() < TOL);
        assert!((norm(&m, NormKind::Frobenius).unwrap() - libm::sqrt(5.0)).abs() < TOL);
    }

    #[test]
    fn singular_values_rectangular() {
        // M = [[1, 0, 0], [0, 2, 0]]: singular values (2, 1).
        let mut m = CMat::zeros(2, 3);
        m[(0, 0)] = c(1.0, 0.0);
        m[(1, 1)] = c(2.0, 0.0);
        let sv = singular_values(&m).unwrap();
        assert_eq!(sv.len(), 2);
        assert!((sv[0] - 2.0).abs() < TOL);
        assert!((sv[1] - 1.0).abs() < TOL);
    }

    #[test]
    fn kron_and_dirsum_shapes() {
        let a = HermMat::from_diag(&[1.0, 2.0]);
        let b = HermMat::from_diag(&[3.0, 4.0]);
        let k = compose(&a, &b, Composition::Kron);
        assert_eq!(k.dim(), 4);
        for (i, expect) in [3.0, 4.0, 6.0, 8.0].iter().enumerate() {
            assert!((k.get(i, i).re - expect).abs() < TOL);
        }
        let d = compose(&a, &b, Composition::DirSum);
        assert_eq!(d.dim(), 4);
        for (i, expect) in [1.0, 2.0, 3.0, 4.0].iter().enumerate() {
            assert!((d.get(i, i).re - expect).abs() < TOL);
        }
    }

    #[test]
    fn schur_matches_block_assembly() {
        let a = HermMat::from_diag(&[1.0, 0.5]);
        let b = HermMat::from_diag(&[1.0, 2.0]);
        // Feasible: X small.
        let x_ok = CMat::from_diag(&[0.3, 0.3]);
        assert!(schur_feasibility(&a, &x_ok, &b).unwrap());
        assert!(
            psd_check(&assemble_block(&a, &x_ok, &b), None)
                .unwrap()
                .is_psd
        );
        // Infeasible: X too large.
        let x_bad = CMat::from_diag(&[2.0, 2.0]);
        assert!(!schur_feasibility(&a, &x_bad, &b).unwrap());
        assert!(
            !psd_check(&assemble_block(&a, &x_bad, &b), None)
                .unwrap()
                .is_psd
        );
    }

    #[test]
    fn image_intersection_cases() {
        // Disjoint coordinate supports.
        let a = HermMat::from_diag(&[1.0, 0.0, 0.0]);
        let b = HermMat::from_diag(&[0.0, 1.0, 0.5]);
        assert!(image_intersection_trivial(&a, &b).unwrap());
        // Shared support direction.
        let b2 = HermMat::from_diag(&[0.7, 1.0, 0.0]);
        assert!(!image_intersection_trivial(&a, &b2).unwrap());
        // Full-rank pair always intersects (dimension count).
        let f1 = HermMat::from_diag(&[1.0, 1.0, 1.0]);
        assert!(!image_intersection_trivial(&f1, &f1).unwrap());
        // Zero matrix: trivially disjoint from everything.
        let z = HermMat::zeros(3);
        assert!(image_intersection_trivial(&z, &f1).unwrap());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(HermMat::from_diag(&[0.5, 0.5])).is_ok());
        assert!(matches!(
            DensityMatrix::new(HermMat::from_diag(&[0.6, 0.5])),
            Err(Error::InvalidTrace { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(HermMat::from_diag(&[1.5, -0.5])),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn unitary_validation() {
        assert!(UnitaryMatrix::new(CMat::identity(3)).is_ok());
        assert!(matches!(
            UnitaryMatrix::new(CMat::from_diag(&[1.0, 2.0])),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn prob_vector_validation() {
        assert!(ProbVector::new(vec![0.25, 0.75]).is_ok());
        // Tiny negative is clamped.
        let p = ProbVector::new(vec![1.0 + 1e-13 - 1e-13, -1e-13 + 1e-13]).unwrap();
        assert!(p.probs()[1] >= 0.0);
        assert!(matches!(
            ProbVector::new(vec![1.1, -0.1]),
            Err(Error::NegativeProbability { .. })
        ));
        assert!(matches!(
            ProbVector::new(vec![0.3, 0.3]),
            Err(Error::ProbabilitySum { .. })
        ));
    }

    #[test]
    fn hermitize_averages_asymmetry() {
        let mut m = CMat::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(0.0, 0.0);
        let h = m.hermitize();
        assert!((h.get(0, 1).re - 0.5).abs() < TOL);
        assert!((h.get(1, 0).re - 0.5).abs() < TOL);
        assert!(HermMat::new_strict(m, 1e-9).is_err());
    }
}
