//! Dense interior-point solver for the block semidefinite programs behind the
//! Matsumoto and Uhlmann fidelities, with checkable dual certificates.
//!
//! # The programs
//!
//! For states `ρ, σ` of dimension `n`, both fidelities are values of block
//! SDPs over the `2n × 2n` cone:
//!
//! ```text
//! F_GM(ρ,σ) = max { tr W        : [[ρ, W], [W, σ]] ⪰ 0, W Hermitian }
//! F(ρ,σ)    = max { Re tr X     : [[ρ, X], [X†, σ]] ⪰ 0, X arbitrary }
//! ```
//!
//! The Uhlmann program relaxes the Hermiticity restriction of the Matsumoto
//! program, which is the structural reason `F_GM ≤ F`. The common dual is
//!
//! ```text
//! min ½(⟨Y,ρ⟩ + ⟨Z,σ⟩)  s.t.  [[Y, X], [X†, Z]] ⪰ 0,  X = I + A,
//! ```
//!
//! with `A` anti-Hermitian for the Matsumoto program (`X + X† = 2I`) and
//! `A = 0` — `X = I` exactly — for the Uhlmann program. The point
//! `(Y, Z, A) = (2I, 2I, 0)` is strictly feasible for both, with objective 2.
//!
//! # The solver
//!
//! A log-barrier method on the primal. With the constraint slack
//! `S(w) = diag(ρ,σ) + Σ w_k E_k` (where `E_k = [[0, B_k], [B_k†, 0]]` runs
//! over a real basis `B_k` of the variable space), the solver maximizes
//! `cᵀw + μ log det S(w)` by damped Newton steps, shrinking `μ` by 10 after
//! each centering. The centering criterion is the *gradient* of the barrier
//! objective, not the Newton decrement: the dual certificate's quality is
//! proportional to the gradient residual, and the decrement permits that
//! residual to grow as `μ` shrinks.
//!
//! Every quantity in Newton's method reduces to traces of `D = μ S⁻¹`
//! against the sparse `E_k` (at most four entries each): the gradient is
//! `c_k + ⟨E_k, D⟩` and the Hessian `⟨E_k D E_j⟩-type traces / μ`. `D` is
//! computed from the Jacobi eigendecomposition of `S`; a Cholesky
//! factorization serves as the fast strict-cone membership test during
//! line-search backtracking.
//!
//! At each center, `D` is dual feasible up to the gradient residual;
//! projecting its off-diagonal block exactly onto the dual's affine
//! constraint (and shifting by the tiny negative eigenvalue this can
//! introduce, which leaves the affine constraint untouched) yields a genuine
//! dual certificate whose gap against the primal value is reported, logged,
//! and required to reach `gap_tol` before the solver declares success.
//!
//! # Reaching tight gaps
//!
//! Merely assembling `S(w)` in floating point perturbs its entries by ~`ε`,
//! which perturbs `D = μ S⁻¹` by ~`ε/μ` — no inversion method can do better —
//! so certificates read off the path directly floor out near `gap ≈ √ε`.
//! The solver therefore exploits analyticity of the central path: under
//! strict complementarity (which holds for these programs on definite
//! states), `w(μ)` and `D(μ)` extend analytically to `μ = 0`, and a linear
//! Richardson extrapolation from the last two centers carries error
//! `O(μ_prev · μ_cur)` — far below the floor while `μ` is still moderate.
//! Whenever a center's own certificate misses `gap_tol`, the solver also
//! tries the extrapolated pair, recording its gap in the trace log against
//! the nominal weight `μ = 0`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::geomean::geometric_mean;
use crate::linalg::{
    self, assemble_block, eig_herm, matrix_function, pd_tol, CMat, DensityMatrix, HermMat,
    MatrixFunction,
};
use crate::{Error, Result};

/// Which fidelity program to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpKind {
    /// `max tr W` over Hermitian `W` — the Matsumoto fidelity.
    Matsumoto,
    /// `max Re tr X` over arbitrary `X` — the Uhlmann fidelity.
    Uhlmann,
}

/// A fidelity SDP instance: the program kind and the two states.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySdp {
    kind: SdpKind,
    rho: DensityMatrix,
    sigma: DensityMatrix,
}

impl FidelitySdp {
    /// Bundle a program instance.
    ///
    /// # Errors
    ///
    /// [`Error::DimensionMismatch`] if the states differ in dimension.
    pub fn new(kind: SdpKind, rho: DensityMatrix, sigma: DensityMatrix) -> Result<Self> {
        if rho.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                found: sigma.dim(),
            });
        }
        Ok(FidelitySdp { kind, rho, sigma })
    }

    /// The program kind.
    pub fn kind(&self) -> SdpKind {
        self.kind
    }

    /// First state.
    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    /// Second state.
    pub fn sigma(&self) -> &DensityMatrix {
        &self.sigma
    }

    /// State dimension `n` (the SDP cone has dimension `2n`).
    pub fn dim(&self) -> usize {
        self.rho.dim()
    }
}

/// Solver options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    /// Required duality gap of the returned certificate.
    pub gap_tol: f64,
    /// Cap on the total number of Newton steps.
    pub max_iter: usize,
    /// ε used to shift singular inputs onto the interior,
    /// `ρ ← (ρ + εI)/(1 + nε)`; `0` disables the shift, making singular
    /// inputs an error.
    pub regularize_eps: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            gap_tol: 1e-8,
            max_iter: 200,
            regularize_eps: 1e-7,
        }
    }
}

/// A converged solve: primal and dual solutions with their certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    /// Which program was solved.
    pub kind: SdpKind,
    /// The primal variable: Hermitian `W` for [`SdpKind::Matsumoto`], general
    /// `X` for [`SdpKind::Uhlmann`].
    pub primal: CMat,
    /// Primal objective `tr W` / `Re tr X`.
    pub primal_value: f64,
    /// Dual block `Y`.
    pub dual_y: HermMat,
    /// Dual block `Z`.
    pub dual_z: HermMat,
    /// Anti-Hermitian dual offset `A` (`X = I + A`); exactly zero for the
    /// Uhlmann program.
    pub dual_a: CMat,
    /// Dual objective `½(⟨Y,ρ⟩ + ⟨Z,σ⟩)`.
    pub dual_value: f64,
    /// Certified duality gap `dual_value − primal_value`.
    pub gap: f64,
    /// Total Newton steps taken.
    pub iterations: usize,
    /// `(μ, gap)` after each outer centering.
    pub trace_log: Vec<(f64, f64)>,
    /// The ε that was applied to shift singular inputs, if any.
    pub regularization: Option<f64>,
}

/// Solve a fidelity SDP to the requested duality gap.
///
/// # Errors
///
/// [`Error::InfeasibleStart`] if an input block is singular and
/// regularization is disabled; [`Error::MaxIterations`] (carrying the
/// `(μ, gap)` trace) if the Newton budget runs out; eigensolver failures
/// propagate.
pub fn solve(problem: &FidelitySdp, opts: &SdpOptions) -> Result<SdpSolution> {
    let n = problem.dim();

    // The analytic center start W = 0 needs both diagonal blocks strictly
    // positive; shift singular inputs onto the interior if allowed.
    let mut regularization = None;
    let (rho, sigma) = {
        let min_rho = spectrum_min(problem.rho.herm())?;
        let min_sigma = spectrum_min(problem.sigma.herm())?;
        let rho_singular = min_rho.0 <= pd_tol(min_rho.1);
        let sigma_singular = min_sigma.0 <= pd_tol(min_sigma.1);
        if rho_singular || sigma_singular {
            let eps = opts.regularize_eps;
            if eps <= 0.0 {
                let (block, min_eigenvalue) = if rho_singular {
                    ("rho", min_rho.0)
                } else {
                    ("sigma", min_sigma.0)
                };
                return Err(Error::InfeasibleStart {
                    block,
                    min_eigenvalue,
                });
            }
            regularization = Some(eps);
            let shift = |m: &HermMat| {
                m.add_scaled_identity(eps)
                    .scale(1.0 / (1.0 + n as f64 * eps))
            };
            (shift(problem.rho.herm()), shift(problem.sigma.herm()))
        } else {
            (problem.rho.herm().clone(), problem.sigma.herm().clone())
        }
    };

    let basis = Basis::for_kind(problem.kind, n);
    let m = basis.len();
    let mut s0 = CMat::zeros(2 * n, 2 * n);
    s0.set_block(0, 0, rho.mat());
    s0.set_block(n, n, sigma.mat());

    let mut w = vec![0.0f64; m];
    let mut mu = 1.0f64;
    let mut iterations = 0usize;
    let mut trace_log: Vec<(f64, f64)> = Vec::new();
    // The previous round's center `(μ, w, D)`, kept for path extrapolation.
    let mut prev_center: Option<(f64, Vec<f64>, HermMat)> = None;

    let budget_exceeded = |iterations: usize, trace_log: &Vec<(f64, f64)>| {
        Err(Error::MaxIterations {
            iterations,
            trace_log: trace_log.clone(),
        })
    };

    // Centering is declared when the barrier gradient — not merely the Newton
    // decrement — is small: the certificate's constraint residual is exactly
    // the gradient residual, and the decrement alone would let it grow like
    // 1/√μ as the barrier weight shrinks.
    const GRAD_TOL: f64 = 1e-10;

    loop {
        // Center at the current μ by damped Newton steps, keeping the dual
        // matrix D = μ S⁻¹ of the accepted center for the certificate.
        let d_center;
        loop {
            if iterations >= opts.max_iter {
                return budget_exceeded(iterations, &trace_log);
            }
            let s = assemble_slack(&s0, &basis, &w).hermitize();
            let (vals, vecs) = eig_herm(&s)?;
            if vals.first().copied().unwrap_or(0.0) <= 0.0 {
                // The iterate left the cone — numerically impossible with the
                // backtracking below, but never silently ignored.
                return budget_exceeded(iterations, &trace_log);
            }
            // D = μ S⁻¹ from the eigendecomposition.
            let inv_scaled: Vec<f64> = vals.iter().map(|&l| mu / l).collect();
            let d = vecs.conjugate(&HermMat::from_diag(&inv_scaled));

            // Gradient of cᵀw + μ log det S: c_k + ⟨E_k, D⟩.
            let mut grad = vec![0.0f64; m];
            let mut grad_inf = 0.0f64;
            for (k, g) in grad.iter_mut().enumerate() {
                *g = basis.c[k] + basis.trace_against(k, &d);
                grad_inf = grad_inf.max(g.abs());
            }
            // (Negated) Hessian: μ tr(S⁻¹E_j S⁻¹E_k) = tr(D E_j D E_k) / μ.
            let mut hess = vec![0.0f64; m * m];
            for j in 0..m {
                for k in j..m {
                    let v = basis.second_order(j, k, &d) / mu;
                    hess[j * m + k] = v;
                    hess[k * m + j] = v;
                }
            }
            // Tikhonov damping keeps the factorization stable when the
            // Hessian is near-singular far from the central path.
            for j in 0..m {
                hess[j * m + j] += 1e-12;
            }
            let delta = solve_spd_real(&mut hess, &grad, m).ok_or(Error::MaxIterations {
                iterations,
                trace_log: trace_log.clone(),
            })?;
            let lambda_sq: f64 = grad.iter().zip(delta.iter()).map(|(g, d)| g * d).sum();
            let lambda = libm::sqrt(lambda_sq.max(0.0));
            iterations += 1;

            // Centered: gradient at its target, or a Newton displacement too
            // small to improve it further — the gradient bottoms out near
            // ε/μ, set by the rounding of S(w) itself (see the module docs).
            // The gap test below still gates overall success either way.
            if grad_inf <= GRAD_TOL || lambda <= 1e-9 {
                d_center = d;
                break;
            }
            // Long step: backtrack from the full Newton step. Far from the
            // center the step must also make Armijo progress on the barrier
            // merit cᵀw + μ log det S; inside the quadratic basin (λ ≤ ¼) the
            // merit differences sink below float noise, so only strict cone
            // membership is enforced there — damped-Newton theory already
            // guarantees contraction for the full step.
            let merit = |trial: &[f64], logdet: f64| -> f64 {
                let value: f64 = basis
                    .c
                    .iter()
                    .zip(trial.iter())
                    .map(|(ck, wk)| ck * wk)
                    .sum();
                value + mu * logdet
            };
            let logdet_here: f64 = vals.iter().map(|&l| libm::log(l)).sum();
            let merit_here = merit(&w, logdet_here);
            let mut alpha = 1.0f64;
            let mut accepted = false;
            for _ in 0..60 {
                let trial: Vec<f64> = w
                    .iter()
                    .zip(delta.iter())
                    .map(|(wi, di)| wi + alpha * di)
                    .collect();
                let s_trial = assemble_slack(&s0, &basis, &trial);
                if let Some(logdet_trial) = cone_logdet(&s_trial) {
                    let sufficient = merit_here + 0.01 * alpha * lambda_sq;
                    if lambda <= 0.25 || merit(&trial, logdet_trial) >= sufficient {
                        w = trial;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                return budget_exceeded(iterations, &trace_log);
            }
        }

        // Dual certificate at the center: D = μ S⁻¹, projected exactly onto
        // the dual's affine constraint.
        let (dual_y, dual_z, dual_a, dual_value) =
            dual_certificate(problem.kind, &d_center, &rho, &sigma)?;
        let primal_value: f64 = basis.c.iter().zip(w.iter()).map(|(ck, wk)| ck * wk).sum();
        let gap = dual_value - primal_value;
        trace_log.push((mu, gap));

        if gap <= opts.gap_tol {
            let primal = basis.primal_matrix(&w, n);
            return Ok(SdpSolution {
                kind: problem.kind,
                primal,
                primal_value,
                dual_y,
                dual_z,
                dual_a,
                dual_value,
                gap,
                iterations,
                trace_log,
                regularization,
            });
        }

        // Linear extrapolation of the analytic central path to μ = 0 from
        // the last two centers. The extrapolated pair carries error
        // O(μ_prev·μ_cur), well below the ε/μ certificate floor of either
        // center alone once μ is moderately small. The extrapolated primal is
        // only trusted after an explicit eigenvalue check of its slack block.
        let mut best_w = w.clone();
        let mut best_primal_value = primal_value;
        if let Some((mu_prev, w_prev, d_prev)) = &prev_center {
            let t = mu_prev / (mu_prev - mu);
            let w_ex: Vec<f64> = w_prev
                .iter()
                .zip(w.iter())
                .map(|(wp, wc)| wp + t * (wc - wp))
                .collect();
            let ex_primal_value: f64 = basis
                .c
                .iter()
                .zip(w_ex.iter())
                .map(|(ck, wk)| ck * wk)
                .sum();
            let slack_min =
                linalg::min_eigenvalue(&assemble_slack(&s0, &basis, &w_ex).hermitize())?;
            if ex_primal_value > best_primal_value && slack_min >= -1e-9 {
                let d_ex = d_prev.scale(1.0 - t).add(&d_center.scale(t));
                let (ex_y, ex_z, ex_a, ex_dual_value) =
                    dual_certificate(problem.kind, &d_ex, &rho, &sigma)?;
                let ex_gap = ex_dual_value - ex_primal_value;
                if ex_gap <= opts.gap_tol {
                    trace_log.push((0.0, ex_gap));
                    let primal = basis.primal_matrix(&w_ex, n);
                    return Ok(SdpSolution {
                        kind: problem.kind,
                        primal,
                        primal_value: ex_primal_value,
                        dual_y: ex_y,
                        dual_z: ex_z,
                        dual_a: ex_a,
                        dual_value: ex_dual_value,
                        gap: ex_gap,
                        iterations,
                        trace_log,
                        regularization,
                    });
                }
                best_w = w_ex;
                best_primal_value = ex_primal_value;
            }
        }

        // Variational fallback for ill-conditioned instances (states shifted
        // from singularity by a tiny ε): the path certificates above degrade
        // with the dual optimum's norm ~ε^{-1/2}, but the dual optimum itself
        // is expressible through one geometric mean — Z = σ⁻¹#ρ, Y = Z⁻¹ for
        // the Uhlmann program, and the complementary-slackness construction
        // of `closed_dual_matrix` for the Matsumoto program. The resulting
        // certificate is still verified like any other: projected, shifted
        // PSD, and gap-checked against the independently computed primal.
        if mu < 5e-7 {
            if let Ok(d_closed) = closed_dual_matrix(problem.kind, &rho, &sigma) {
                let (cl_y, cl_z, cl_a, cl_dual_value) =
                    dual_certificate(problem.kind, &d_closed, &rho, &sigma)?;
                let cl_gap = cl_dual_value - best_primal_value;
                if cl_gap <= opts.gap_tol {
                    trace_log.push((0.0, cl_gap));
                    let primal = basis.primal_matrix(&best_w, n);
                    return Ok(SdpSolution {
                        kind: problem.kind,
                        primal,
                        primal_value: best_primal_value,
                        dual_y: cl_y,
                        dual_z: cl_z,
                        dual_a: cl_a,
                        dual_value: cl_dual_value,
                        gap: cl_gap,
                        iterations,
                        trace_log,
                        regularization,
                    });
                }
            }
        }
        prev_center = Some((mu, w.clone(), d_center));

        if mu < 1e-18 {
            return budget_exceeded(iterations, &trace_log);
        }
        mu /= 10.0;
    }
}

/// Closed-form dual optimum `D* = ½[[Y, −X],[−X†, Z]]`, assembled as the
/// `2n × 2n` block matrix `[[P, G],[G†, R]]` that `dual_certificate` expects.
///
/// For the Uhlmann program the minimizer of `½(tr(Z⁻¹ρ) + tr(Zσ))` is the
/// Riccati solution `Z = σ⁻¹ # ρ` with `Y = Z⁻¹` (Schur equality, so the
/// block is singular PSD). For the Matsumoto program, complementary
/// slackness forces the dual range into the kernel of the optimal primal
/// block `[[ρ, T], [T, σ]]` with `T = ρ#σ`, i.e. `D = J C J†` for
/// `J = [I; −T⁻¹ρ]`; the affine constraint `Herm(G) = −I/2` then reads
/// `C(ρT⁻¹) + (T⁻¹ρ)C = I`, a Lyapunov equation solved spectrally after the
/// congruence `C' N + N C' = T`, `N = T^{-1/2} ρ T^{-1/2} ≻ 0`, whose
/// integral solution is automatically positive definite. Both constructions
/// give dual value exactly equal to the primal optimum in exact arithmetic.
fn closed_dual_matrix(kind: SdpKind, rho: &HermMat, sigma: &HermMat) -> Result<HermMat> {
    let n = rho.dim();
    let mut d = CMat::zeros(2 * n, 2 * n);
    match kind {
        SdpKind::Uhlmann => {
            let sigma_inv = matrix_function(sigma, MatrixFunction::Inv)?;
            let z = geometric_mean(&sigma_inv, rho)?;
            let y = matrix_function(&z, MatrixFunction::Inv)?;
            let minus_half = CMat::identity(n).scale_re(-0.5);
            d.set_block(0, 0, &y.mat().scale_re(0.5));
            d.set_block(0, n, &minus_half);
            d.set_block(n, 0, &minus_half);
            d.set_block(n, n, &z.mat().scale_re(0.5));
        }
        SdpKind::Matsumoto => {
            let t = geometric_mean(rho, sigma)?;
            let t_inv = matrix_function(&t, MatrixFunction::Inv)?;
            let t_inv_half = matrix_function(&t, MatrixFunction::InvSqrt)?;
            let n_mat = rho.conjugate_by(t_inv_half.mat());
            let (n_vals, n_vecs) = eig_herm(&n_mat)?;
            // C' N + N C' = T in N's eigenframe: entrywise division by λ_i+λ_j.
            let mut c_frame = n_vecs.mat().dagger().mul(t.mat()).mul(n_vecs.mat());
            for i in 0..n {
                for j in 0..n {
                    c_frame[(i, j)] = c_frame[(i, j)].unscale(n_vals[i] + n_vals[j]);
                }
            }
            let c_prime = n_vecs
                .mat()
                .mul(&c_frame)
                .mul(&n_vecs.mat().dagger())
                .hermitize();
            let c = c_prime.conjugate_by(t_inv_half.mat());
            let g = c.mat().mul(rho.mat()).mul(t_inv.mat()).scale_re(-1.0);
            let m = t_inv.mat().mul(rho.mat());
            let r = m.mul(c.mat()).mul(&m.dagger());
            d.set_block(0, 0, c.mat());
            d.set_block(0, n, &g);
            d.set_block(n, 0, &g.dagger());
            d.set_block(n, n, &r);
        }
    }
    Ok(d.hermitize())
}

fn spectrum_min(h: &HermMat) -> Result<(f64, f64)> {
    let (vals, _) = eig_herm(h)?;
    let min = vals.first().copied().unwrap_or(0.0);
    let op = vals.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    Ok((min, op))
}

/// Independent check of a solution against its problem: feasibility of both
/// blocks, the dual affine constraint, and weak duality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport {
    /// Smallest eigenvalue of the primal block `[[ρ, W], [W†, σ]]`.
    pub primal_min_eigenvalue: f64,
    /// Smallest eigenvalue of the dual block `[[Y, I+A], [(I+A)†, Z]]`.
    pub dual_min_eigenvalue: f64,
    /// `‖X + X† − 2I‖_F` for `X = I + A` (the dual affine constraint).
    pub dual_constraint_residual: f64,
    /// `dual_value − primal_value`, recomputed from the stored blocks.
    pub gap: f64,
    /// `primal_min_eigenvalue ≥ −1e−8`.
    pub primal_feasible: bool,
    /// `dual_min_eigenvalue ≥ −1e−8` and the affine residual is ≤ `1e−10`.
    pub dual_feasible: bool,
    /// `gap ≥ −1e−8` (weak duality holds numerically).
    pub weak_duality: bool,
}

impl VerificationReport {
    /// All checks passed.
    pub fn all_ok(&self) -> bool {
        self.primal_feasible && self.dual_feasible && self.weak_duality
    }
}

/// Verify a solution against the *original* (unregularized) problem when no
/// shift was recorded, or against the shifted states when one was.
///
/// # Errors
///
/// Eigensolver failures propagate.
pub fn verify_solution(problem: &FidelitySdp, sol: &SdpSolution) -> Result<VerificationReport> {
    let n = problem.dim();
    let (rho, sigma) = match sol.regularization {
        Some(eps) => {
            let shift = |m: &HermMat| {
                m.add_scaled_identity(eps)
                    .scale(1.0 / (1.0 + n as f64 * eps))
            };
            (shift(problem.rho.herm()), shift(problem.sigma.herm()))
        }
        None => (problem.rho.herm().clone(), problem.sigma.herm().clone()),
    };
    let primal_block = assemble_block(&rho, &sol.primal, &sigma);
    let primal_min_eigenvalue = linalg::min_eigenvalue(&primal_block)?;

    let x = CMat::identity(n).add(&sol.dual_a);
    let dual_block = assemble_block(&sol.dual_y, &x, &sol.dual_z);
    let dual_min_eigenvalue = linalg::min_eigenvalue(&dual_block)?;
    let dual_constraint_residual = x
        .add(&x.dagger())
        .sub(&CMat::identity(n).scale_re(2.0))
        .frobenius_norm();

    let dual_value = 0.5 * (sol.dual_y.inner(&rho) + sol.dual_z.inner(&sigma));
    let primal_value = match sol.kind {
        SdpKind::Matsumoto | SdpKind::Uhlmann => sol.primal.trace().re,
    };
    let gap = dual_value - primal_value;

    Ok(VerificationReport {
        primal_min_eigenvalue,
        dual_min_eigenvalue,
        dual_constraint_residual,
        gap,
        primal_feasible: primal_min_eigenvalue >= -1e-8,
        dual_feasible: dual_min_eigenvalue >= -1e-8 && dual_constraint_residual <= 1e-10,
        weak_duality: gap >= -1e-8,
    })
}

/// Assemble the dual block `[[Y, I+A], [(I+A)†, Z]]` for an arbitrary dual
/// point — used to check candidate duals such as the strictly feasible start
/// `(2I, 2I, 0)`.
pub fn dual_block(y: &HermMat, z: &HermMat, a: &CMat) -> HermMat {
    let x = CMat::identity(y.dim()).add(a);
    assemble_block(y, &x, z)
}

/// Dual certificate from the barrier center: `D = μS⁻¹` with its off-diagonal
/// block projected exactly onto the affine constraint, then shifted PSD if
/// the projection introduced a negative eigenvalue (the shift only touches
/// the diagonal blocks, so the affine constraint survives it).
fn dual_certificate(
    kind: SdpKind,
    d_raw: &HermMat,
    rho: &HermMat,
    sigma: &HermMat,
) -> Result<(HermMat, HermMat, CMat, f64)> {
    let n = rho.dim();
    let p = d_raw.mat().block(0, 0, n, n).hermitize();
    let g = d_raw.mat().block(0, n, n, n);
    let r = d_raw.mat().block(n, n, n, n).hermitize();

    // Project G onto the affine constraint: Herm(G) = −I/2, keeping the
    // anti-Hermitian part for the Matsumoto program and dropping it for the
    // Uhlmann program (whose dual pins X = I, i.e. G = −I/2 exactly).
    let g_proj = match kind {
        SdpKind::Matsumoto => {
            let anti = g.sub(&g.dagger()).scale_re(0.5);
            anti.sub(&CMat::identity(n).scale_re(0.5))
        }
        SdpKind::Uhlmann => CMat::identity(n).scale_re(-0.5),
    };

    let mut d = CMat::zeros(2 * n, 2 * n);
    d.set_block(0, 0, p.mat());
    d.set_block(0, n, &g_proj);
    d.set_block(n, 0, &g_proj.dagger());
    d.set_block(n, n, r.mat());
    let mut d = d.hermitize();

    let min_eig = linalg::min_eigenvalue(&d)?;
    if min_eig < 0.0 {
        d = d.add_scaled_identity(-min_eig * (1.0 + 1e-9));
    }

    let p_final = d.mat().block(0, 0, n, n).hermitize();
    let r_final = d.mat().block(n, n, n, n).hermitize();
    let dual_value = p_final.inner(rho) + r_final.inner(sigma);

    // Report in the (Y, Z, A) parametrization: D = ½[[Y, −X], [−X†, Z]] with
    // X = I + A, so Y = 2P, Z = 2R, A = −2G − I.
    let dual_y = p_final.scale(2.0);
    let dual_z = r_final.scale(2.0);
    let dual_a = g_proj.scale_re(-2.0).sub(&CMat::identity(n));
    Ok((dual_y, dual_z, dual_a, dual_value))
}

/// Sparse real basis of the primal variable space, stored as the entries of
/// the lifted `E_k = [[0, B_k], [B_k†, 0]]`.
struct Basis {
    /// Entries `(row, col, coeff)` of each `E_k` in the `2n × 2n` frame;
    /// at most four per element.
    elems: Vec<Vec<(usize, usize, Complex64)>>,
    /// Objective coefficients `c_k = Re tr B_k`.
    c: Vec<f64>,
}

impl Basis {
    fn for_kind(kind: SdpKind, n: usize) -> Basis {
        let mut elems = Vec::new();
        let mut c = Vec::new();
        let one = Complex64::new(1.0, 0.0);
        let i_unit = Complex64::new(0.0, 1.0);
        match kind {
            SdpKind::Matsumoto => {
                // Hermitian basis: diagonal units, symmetric pairs, i-antisymmetric pairs.
                for i in 0..n {
                    elems.push(vec![(i, n + i, one), (n + i, i, one)]);
                    c.push(1.0);
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        elems.push(vec![
                            (i, n + j, one),
                            (n + j, i, one),
                            (j, n + i, one),
                            (n + i, j, one),
                        ]);
                        c.push(0.0);
                        elems.push(vec![
                            (i, n + j, i_unit),
                            (n + j, i, -i_unit),
                            (j, n + i, -i_unit),
                            (n + i, j, i_unit),
                        ]);
                        c.push(0.0);
                    }
                }
            }
            SdpKind::Uhlmann => {
                // Real basis of all complex matrices: e_pq and i·e_pq.
                for p in 0..n {
                    for q in 0..n {
                        elems.push(vec![(p, n + q, one), (n + q, p, one)]);
                        c.push(if p == q { 1.0 } else { 0.0 });
                        elems.push(vec![(p, n + q, i_unit), (n + q, p, -i_unit)]);
                        c.push(0.0);
                    }
                }
            }
        }
        Basis { elems, c }
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    /// `tr(S⁻¹ E_k)` — real because both are Hermitian.
    fn trace_against(&self, k: usize, s_inv: &HermMat) -> f64 {
        let mut acc = 0.0;
        for &(p, q, a) in &self.elems[k] {
            acc += (a * s_inv.get(q, p)).re;
        }
        acc
    }

    /// `tr(S⁻¹ E_j S⁻¹ E_k)`, expanded over the sparse entries via
    /// `tr(X e_pq X e_rs) = X_sp X_qr`.
    fn second_order(&self, j: usize, k: usize, s_inv: &HermMat) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(p, q, a) in &self.elems[j] {
            for &(r, s, b) in &self.elems[k] {
                acc += a * b * s_inv.get(s, p) * s_inv.get(q, r);
            }
        }
        acc.re
    }

    /// Reconstruct the primal matrix `Σ w_k B_k` from the coordinates.
    fn primal_matrix(&self, w: &[f64], n: usize) -> CMat {
        let mut out = CMat::zeros(n, n);
        for (k, entries) in self.elems.iter().enumerate() {
            for &(row, col, coeff) in entries {
                if row < n {
                    // Upper-right block entries are exactly B_k.
                    out[(row, col - n)] += coeff.scale(w[k]);
                }
            }
        }
        out
    }
}

fn assemble_slack(s0: &CMat, basis: &Basis, w: &[f64]) -> CMat {
    let mut s = s0.clone();
    for (k, entries) in basis.elems.iter().enumerate() {
        for &(row, col, coeff) in entries {
            s[(row, col)] += coeff.scale(w[k]);
        }
    }
    s
}

/// Strict positive-definiteness test by complex Cholesky factorization
/// `S = L L†`, returning `log det S = Σ log L_jj²` on success and `None` as
/// soon as a pivot fails to be strictly positive (the matrix left the cone).
fn cone_logdet(s: &CMat) -> Option<f64> {
    let n = s.rows();
    let mut l = CMat::zeros(n, n);
    let mut logdet = 0.0f64;
    for j in 0..n {
        let mut d = s[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        logdet += libm::log(d);
        let djj = libm::sqrt(d);
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut v = s[(i, j)];
            for k in 0..j {
                let correction = l[(i, k)] * l[(j, k)].conj();
                v -= correction;
            }
            l[(i, j)] = v.unscale(djj);
        }
    }
    Some(logdet)
}

/// Solve the real SPD system `H δ = g` in place (Cholesky without pivoting);
/// `None` if a pivot fails.
fn solve_spd_real(h: &mut [f64], g: &[f64], m: usize) -> Option<Vec<f64>> {
    // Factor H = L Lᵀ in the lower triangle of h.
    for j in 0..m {
        let mut d = h[j * m + j];
        for k in 0..j {
            d -= h[j * m + k] * h[j * m + k];
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let djj = libm::sqrt(d);
        h[j * m + j] = djj;
        for i in (j + 1)..m {
            let mut v = h[i * m + j];
            for k in 0..j {
                v -= h[i * m + k] * h[j * m + k];
            }
            h[i * m + j] = v / djj;
        }
    }
    // Forward/back substitution.
    let mut y = vec![0.0f64; m];
    for i in 0..m {
        let mut v = g[i];
        for k in 0..i {
            v -= h[i * m + k] * y[k];
        }
        y[i] = v / h[i * m + i];
    }
    let mut x = vec![0.0f64; m];
    for i in (0..m).rev() {
        let mut v = y[i];
        for k in (i + 1)..m {
            v -= h[k * m + i] * x[k];
        }
        x[i] = v / h[i * m + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidelity::{matsumoto_fidelity, uhlmann_fidelity};
    use crate::linalg::psd_check;

    fn diag_state(d: &[f64]) -> DensityMatrix {
        DensityMatrix::new(HermMat::from_diag(d)).unwrap()
    }

    #[test]
    fn identity_pair_reaches_one_with_identity_witness() {
        let rho = DensityMatrix::maximally_mixed(2);
        let problem = FidelitySdp::new(SdpKind::Matsumoto, rho.clone(), rho).unwrap();
        let sol = solve(&problem, &SdpOptions::default()).unwrap();
        assert!((sol.primal_value - 1.0).abs() < 1e-7);
        // The optimal W for identical states is the state itself: I/2.
        for i in 0..2 {
            assert!((sol.primal[(i, i)].re - 0.5).abs() < 1e-5);
        }
        assert!(sol.gap <= 1e-8 && sol.gap >= -1e-10);
        assert!(sol.iterations <= 200);
    }

    #[test]
    fn matsumoto_program_matches_closed_form() {
        let rho = diag_state(&[0.5, 0.5]);
        let sigma = diag_state(&[0.25, 0.75]);
        let problem = FidelitySdp::new(SdpKind::Matsumoto, rho.clone(), sigma.clone()).unwrap();
        let sol = solve(&problem, &SdpOptions::default()).unwrap();
        let expect = matsumoto_fidelity(&rho, &sigma).unwrap();
        assert!((sol.primal_value - expect).abs() < 1e-6);
        let report = verify_solution(&problem, &sol).unwrap();
        assert!(report.all_ok(), "{report:?}");
    }

    #[test]
    fn uhlmann_program_matches_closed_form() {
        let rho = diag_state(&[0.75, 0.25]);
        let sigma = DensityMatrix::new(
            HermMat::new(CMat::from_fn(2, 2, |i, j| match (i, j) {
                (0, 1) => Complex64::new(0.2, 0.1),
                (1, 0) => Complex64::new(0.2, -0.1),
                _ => Complex64::new(0.5, 0.0),
            }))
            .unwrap(),
        )
        .unwrap();
        let problem = FidelitySdp::new(SdpKind::Uhlmann, rho.clone(), sigma.clone()).unwrap();
        let sol = solve(&problem, &SdpOptions::default()).unwrap();
        let expect = uhlmann_fidelity(&rho, &sigma).unwrap();
        assert!((sol.primal_value - expect).abs() < 1e-6);
        assert!(sol.dual_a.frobenius_norm() < 1e-12); // X = I exactly
        let report = verify_solution(&problem, &sol).unwrap();
        assert!(report.all_ok(), "{report:?}");
    }

    #[test]
    fn hermitian_restriction_is_dominated() {
        // Same pair, both programs: the Uhlmann value dominates.
        let rho = diag_state(&[0.75, 0.25]);
        let sigma = DensityMatrix::pure(&[
            Complex64::new(1.0 / libm::sqrt(2.0), 0.0),
            Complex64::new(1.0 / libm::sqrt(2.0), 0.0),
        ])
        .unwrap();
        let opts = SdpOptions::default();
        let mats = solve(
            &FidelitySdp::new(SdpKind::Matsumoto, rho.clone(), sigma.clone()).unwrap(),
            &opts,
        )
        .unwrap();
        let uhl = solve(
            &FidelitySdp::new(SdpKind::Uhlmann, rho, sigma).unwrap(),
            &opts,
        )
        .unwrap();
        // σ is singular: both solves were shifted by the same recorded ε.
        assert_eq!(mats.regularization, Some(1e-7));
        assert_eq!(uhl.regularization, Some(1e-7));
        assert!(mats.primal_value <= uhl.primal_value + 1e-8);
    }

    #[test]
    fn singular_input_errors_when_regularization_disabled() {
        let rho = diag_state(&[1.0, 0.0]);
        let sigma = DensityMatrix::maximally_mixed(2);
        let problem = FidelitySdp::new(SdpKind::Matsumoto, rho, sigma).unwrap();
        let opts = SdpOptions {
            regularize_eps: 0.0,
            ..SdpOptions::default()
        };
        let err = solve(&problem, &opts).unwrap_err();
        assert!(matches!(err, Error::InfeasibleStart { block: "rho", .. }));
    }

    #[test]
    fn dual_start_point_is_strictly_feasible() {
        // (Y, Z, A) = (2I, 2I, 0) from the module docs.
        let n = 3;
        let block = dual_block(
            &HermMat::identity(n).scale(2.0),
            &HermMat::identity(n).scale(2.0),
            &CMat::zeros(n, n),
        );
        let report = psd_check(&block, None).unwrap();
        assert!(report.is_psd);
        assert!(report.min_eigenvalue > 0.9); // eigenvalues {1, 3}
    }

    #[test]
    fn trace_log_records_descent() {
        let rho = diag_state(&[0.6, 0.4]);
        let sigma = diag_state(&[0.3, 0.7]);
        let problem = FidelitySdp::new(SdpKind::Matsumoto, rho, sigma).unwrap();
        let sol = solve(&problem, &SdpOptions::default()).unwrap();
        assert!(!sol.trace_log.is_empty());
        // μ decreases tenfold per entry; the final gap meets the tolerance.
        for pair in sol.trace_log.windows(2) {
            assert!(pair[1].0 < pair[0].0);
        }
        assert!(sol.trace_log.last().unwrap().1 <= 1e-8);
    }

    #[test]
    fn corrupted_solution_fails_verification() {
        let rho = diag_state(&[0.6, 0.4]);
        let sigma = diag_state(&[0.3, 0.7]);
        let problem = FidelitySdp::new(SdpKind::Matsumoto, rho, sigma).unwrap();
        let mut sol = solve(&problem, &SdpOptions::default()).unwrap();
        // Inflate the primal well past feasibility.
        sol.primal = sol.primal.scale_re(10.0);
        let report = verify_solution(&problem, &sol).unwrap();
        assert!(!report.primal_feasible);
        assert!(!report.all_ok());
    }
}
