//! `matfid`: fidelities between positive-semidefinite matrices from the
//! command line.
//!
//! Five subcommands over the `matfid-core` library:
//!
//! * `compute` — all three fidelities plus the trace distance of two states
//!   read from matrix JSON files;
//! * `sweep` — CSV tabulation of the three fidelities between a fixed qubit
//!   and the Bloch family `σ(θ, λ)`;
//! * `sdp` — one fidelity semidefinite program, solved and verified;
//! * `geodesic` — the hyperbolic geodesic profile `r(φ)` with its midpoint
//!   radius and asymptotic Matsumoto fidelity;
//! * `suite` — the full property suite, reported per lemma.
//!
//! Exit codes: 0 success, 1 property violation or convergence failure,
//! 2 parse error, 3 invalid state.

mod io;

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use matfid_core::ensembles::Seed;
use matfid_core::fidelity::{
    fidelity_report, matsumoto_fidelity, pure_mixed_fidelities, uhlmann_fidelity,
};
use matfid_core::geometry::{fgm_asymptotic, hyperbolic_geodesic_r, midpoint_radius};
use matfid_core::linalg::{CMat, DensityMatrix, HermMat};
use matfid_core::sdp::{solve, verify_solution, FidelitySdp, SdpKind, SdpOptions};
use matfid_core::suite::{run_suite, SuiteConfig, SuiteReport};

use crate::io::{csv_string, emit, json_string, load_density, sig9, Failure};

/// Similarity measures between positive-semidefinite matrices: closed forms,
/// a verified SDP solver, cone geometry, and a property suite.
#[derive(Parser)]
#[command(name = "matfid", version, about)]
struct Cli {
    /// Master seed for every randomized subcommand.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Duality gap the SDP solver must certify.
    #[arg(long, global = true, default_value_t = 1e-8)]
    gap_tol: f64,

    /// Newton-iteration budget for the SDP solver.
    #[arg(long, global = true, default_value_t = 200)]
    max_iter: usize,

    /// ε of the shift (ρ+εI)/(1+nε). `compute` applies it to the loaded
    /// states; `sdp` hands it to the solver, which shifts only when an input
    /// is singular (default ε = 1e-7 there; 0 makes singular inputs an
    /// error).
    #[arg(long, global = true)]
    regularize: Option<f64>,

    /// Write the artifact to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format. Defaults per subcommand: json for compute/sdp, csv for
    /// sweep/geodesic, a human-readable table for suite.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// The fixed first state of the sweep.
#[derive(Clone, Copy, ValueEnum)]
enum FixedState {
    /// `ρ = |0⟩⟨0|`.
    Pure,
    /// `ρ = diag(3/4, 1/4)`.
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Uhlmann,
    Matsumoto,
}

impl From<Kind> for SdpKind {
    fn from(k: Kind) -> SdpKind {
        match k {
            Kind::Uhlmann => SdpKind::Uhlmann,
            Kind::Matsumoto => SdpKind::Matsumoto,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Uhlmann, Holevo, and Matsumoto fidelities plus the trace
    /// distance of two states read from matrix JSON files.
    Compute {
        /// First state, as `{"dim": n, "re": [[..]], "im": [[..]]}`.
        rho: PathBuf,
        /// Second state, same format.
        sigma: PathBuf,
    },
    /// Tabulate the three fidelities between a fixed qubit and the family
    /// σ(θ, λ) = (1+λ)/2·|θ⟩⟨θ| + (1−λ)/2·|θ⊥⟩⟨θ⊥| over a (θ, λ) grid.
    Sweep {
        /// Which fixed state to sweep against.
        #[arg(long, value_enum, default_value_t = FixedState::Pure)]
        fixed: FixedState,
        /// Grid points on θ ∈ [0, π/2] (endpoints included).
        #[arg(long, default_value_t = 101)]
        theta_steps: usize,
        /// Grid points on λ ∈ [0, 1] (endpoints included).
        #[arg(long, default_value_t = 101)]
        lambda_steps: usize,
    },
    /// Solve one fidelity SDP and independently verify its certificate.
    Sdp {
        /// First state file.
        rho: PathBuf,
        /// Second state file.
        sigma: PathBuf,
        /// Which program to solve.
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Sample the hyperbolic geodesic profile r(φ) between (r0, 0) and
    /// (r0, Δφ), with its midpoint radius and asymptotic Matsumoto fidelity.
    Geodesic {
        /// Radius of both endpoints (must be positive).
        #[arg(long, allow_negative_numbers = true)]
        r0: f64,
        /// Angular separation Δφ of the endpoints.
        #[arg(long, allow_negative_numbers = true)]
        dphi: f64,
        /// Number of profile samples (= CSV row count, at least 2).
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Run the property suite and report a per-lemma verdict table.
    Suite {
        /// Trials per suite row; 0 produces an empty passing report.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Dimensions the dimension-generic rows cycle through.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 3, 4, 5, 6])]
        dims: Vec<usize>,
    },
}

/// Global flags, detached from the parsed subcommand so both can be passed
/// around independently.
struct Ctx {
    seed: u64,
    gap_tol: f64,
    max_iter: usize,
    regularize: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Ctx {
        seed: cli.seed,
        gap_tol: cli.gap_tol,
        max_iter: cli.max_iter,
        regularize: cli.regularize,
        out: cli.out,
        format: cli.format,
    };
    if let Some(eps) = ctx.regularize {
        if !eps.is_finite() || eps < 0.0 {
            return Err(Failure::Parse(format!(
                "--regularize must be a finite ε ≥ 0, got {eps}"
            )));
        }
    }
    match cli.command {
        Command::Compute { rho, sigma } => cmd_compute(&ctx, &rho, &sigma),
        Command::Sweep {
            fixed,
            theta_steps,
            lambda_steps,
        } => cmd_sweep(&ctx, fixed, theta_steps, lambda_steps),
        Command::Sdp { rho, sigma, kind } => cmd_sdp(&ctx, &rho, &sigma, kind),
        Command::Geodesic { r0, dphi, samples } => cmd_geodesic(&ctx, r0, dphi, samples),
        Command::Suite { trials, dims } => cmd_suite(&ctx, trials, dims),
    }
}

// ---------------------------------------------------------------------------
// compute

#[derive(Serialize)]
struct FidelityDto {
    uhlmann: f64,
    holevo: f64,
    matsumoto: f64,
    trace_distance: f64,
}

fn cmd_compute(ctx: &Ctx, rho_path: &Path, sigma_path: &Path) -> Result<(), Failure> {
    let rho = load_density(rho_path, ctx.regularize)?;
    let sigma = load_density(sigma_path, ctx.regularize)?;
    let report = fidelity_report(&rho, &sigma)?;
    let dto = FidelityDto {
        uhlmann: report.uhlmann,
        holevo: report.holevo,
        matsumoto: report.matsumoto,
        trace_distance: report.trace_distance,
    };
    let artifact = match ctx.format.unwrap_or(Format::Json) {
        Format::Json => json_string(&dto)?,
        Format::Csv => csv_string(
            &["uhlmann", "holevo", "matsumoto", "trace_distance"],
            &[vec![
                sig9(dto.uhlmann),
                sig9(dto.holevo),
                sig9(dto.matsumoto),
                sig9(dto.trace_distance),
            ]],
        )?,
    };
    emit(ctx.out.as_deref(), &artifact)
}

// ---------------------------------------------------------------------------
// sweep

#[derive(Serialize)]
struct SweepRow {
    theta: f64,
    lambda: f64,
    uhlmann: f64,
    holevo: f64,
    matsumoto: f64,
}

fn cmd_sweep(
    ctx: &Ctx,
    fixed: FixedState,
    theta_steps: usize,
    lambda_steps: usize,
) -> Result<(), Failure> {
    if theta_steps == 0 || lambda_steps == 0 {
        return Err(Failure::Parse(
            "--theta-steps and --lambda-steps must be at least 1".into(),
        ));
    }
    let rho = match fixed {
        FixedState::Pure => {
            DensityMatrix::pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])?
        }
        FixedState::Mixed => DensityMatrix::new(HermMat::from_diag(&[0.75, 0.25]))?,
    };
    let thetas = grid(0.0, FRAC_PI_2, theta_steps);
    let lambdas = grid(0.0, 1.0, lambda_steps);
    let mut rows = Vec::with_capacity(thetas.len() * lambdas.len());
    for &theta in &thetas {
        for &lambda in &lambdas {
            let (uhlmann, holevo, matsumoto) = sweep_point(&rho, fixed, theta, lambda)?;
            rows.push(SweepRow {
                theta,
                lambda,
                uhlmann,
                holevo,
                matsumoto,
            });
        }
    }
    let artifact = match ctx.format.unwrap_or(Format::Csv) {
        Format::Json => json_string(&rows)?,
        Format::Csv => csv_string(
            &["theta", "lambda", "uhlmann", "holevo", "matsumoto"],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        sig9(r.theta),
                        sig9(r.lambda),
                        sig9(r.uhlmann),
                        sig9(r.holevo),
                        sig9(r.matsumoto),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
    };
    emit(ctx.out.as_deref(), &artifact)
}

/// One sweep cell. At λ = 1 the second state is pure and the exact
/// pure-state paths are used — pure-against-pure fidelities from the
/// overlap, pure-against-mixed from the closed quadratic forms — so the
/// Matsumoto column reads an exact 0 or 1 instead of an ε-path artifact.
fn sweep_point(
    rho: &DensityMatrix,
    fixed: FixedState,
    theta: f64,
    lambda: f64,
) -> Result<(f64, f64, f64), Failure> {
    if lambda >= 1.0 {
        let psi = [
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(theta.sin(), 0.0),
        ];
        return match fixed {
            FixedState::Pure => {
                let overlap = theta.cos().abs();
                let matsumoto = if overlap >= 1.0 - 1e-12 { 1.0 } else { 0.0 };
                Ok((overlap, overlap * overlap, matsumoto))
            }
            FixedState::Mixed => {
                let pm = pure_mixed_fidelities(rho, &psi)?;
                Ok((pm.uhlmann, pm.holevo, pm.matsumoto))
            }
        };
    }
    let sigma = bloch_sigma(theta, lambda)?;
    let report = fidelity_report(rho, &sigma)?;
    Ok((report.uhlmann, report.holevo, report.matsumoto))
}

/// `σ(θ, λ) = (1+λ)/2 · |θ⟩⟨θ| + (1−λ)/2 · |θ⊥⟩⟨θ⊥|` with
/// `|θ⟩ = (cos θ, sin θ)`.
fn bloch_sigma(theta: f64, lambda: f64) -> Result<DensityMatrix, Failure> {
    let (s, c) = theta.sin_cos();
    let p = 0.5 * (1.0 + lambda);
    let q = 0.5 * (1.0 - lambda);
    let mat = CMat::from_fn(2, 2, |i, j| match (i, j) {
        (0, 0) => Complex64::new(p * c * c + q * s * s, 0.0),
        (1, 1) => Complex64::new(p * s * s + q * c * c, 0.0),
        _ => Complex64::new((p - q) * c * s, 0.0),
    });
    Ok(DensityMatrix::new(HermMat::new(mat)?)?)
}

/// `steps` equally spaced points covering `[lo, hi]`, both endpoints
/// included (a single step collapses to `lo`).
fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect()
}

// ---------------------------------------------------------------------------
// sdp

#[derive(Serialize)]
struct SdpDto {
    kind: &'static str,
    dim: usize,
    primal_value: f64,
    dual_value: f64,
    gap: f64,
    iterations: usize,
    regularization: Option<f64>,
    closed_form: f64,
    deviation: f64,
    verification: VerificationDto,
    trace_log: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct VerificationDto {
    primal_min_eigenvalue: f64,
    dual_min_eigenvalue: f64,
    dual_constraint_residual: f64,
    gap: f64,
    primal_feasible: bool,
    dual_feasible: bool,
    weak_duality: bool,
    all_ok: bool,
}

fn cmd_sdp(ctx: &Ctx, rho_path: &Path, sigma_path: &Path, kind: Kind) -> Result<(), Failure> {
    let rho = load_density(rho_path, None)?;
    let sigma = load_density(sigma_path, None)?;
    let problem = FidelitySdp::new(kind.into(), rho, sigma)?;
    let opts = SdpOptions {
        gap_tol: ctx.gap_tol,
        max_iter: ctx.max_iter,
        regularize_eps: ctx
            .regularize
            .unwrap_or(SdpOptions::default().regularize_eps),
    };
    let sol = solve(&problem, &opts)?;
    let verification = verify_solution(&problem, &sol)?;

    // Closed-form cross-check against the states the solver actually solved
    // (the shifted pair when a regularization was recorded).
    let (rho_eff, sigma_eff) = match sol.regularization {
        Some(eps) => (
            shifted_state(problem.rho(), eps)?,
            shifted_state(problem.sigma(), eps)?,
        ),
        None => (problem.rho().clone(), problem.sigma().clone()),
    };
    let closed_form = match sol.kind {
        SdpKind::Uhlmann => uhlmann_fidelity(&rho_eff, &sigma_eff)?,
        SdpKind::Matsumoto => matsumoto_fidelity(&rho_eff, &sigma_eff)?,
    };

    let dto = SdpDto {
        kind: match sol.kind {
            SdpKind::Uhlmann => "uhlmann",
            SdpKind::Matsumoto => "matsumoto",
        },
        dim: problem.dim(),
        primal_value: sol.primal_value,
        dual_value: sol.dual_value,
        gap: sol.gap,
        iterations: sol.iterations,
        regularization: sol.regularization,
        closed_form,
        deviation: (sol.primal_value - closed_form).abs(),
        verification: VerificationDto {
            primal_min_eigenvalue: verification.primal_min_eigenvalue,
            dual_min_eigenvalue: verification.dual_min_eigenvalue,
            dual_constraint_residual: verification.dual_constraint_residual,
            gap: verification.gap,
            primal_feasible: verification.primal_feasible,
            dual_feasible: verification.dual_feasible,
            weak_duality: verification.weak_duality,
            all_ok: verification.all_ok(),
        },
        trace_log: sol.trace_log.clone(),
    };
    let artifact = match ctx.format.unwrap_or(Format::Json) {
        Format::Json => json_string(&dto)?,
        // The CSV view is the convergence trace: one (μ, gap) row per outer
        // centering, with μ = 0 marking an extrapolated certificate.
        Format::Csv => csv_string(
            &["mu", "gap"],
            &dto.trace_log
                .iter()
                .map(|&(mu, gap)| vec![sig9(mu), sig9(gap)])
                .collect::<Vec<_>>(),
        )?,
    };
    emit(ctx.out.as_deref(), &artifact)
}

/// `(ρ + εI)/(1 + nε)` — the same interior shift the solver applies.
fn shifted_state(state: &DensityMatrix, eps: f64) -> Result<DensityMatrix, Failure> {
    let n = state.dim() as f64;
    Ok(DensityMatrix::new(
        state
            .herm()
            .add_scaled_identity(eps)
            .scale(1.0 / (1.0 + n * eps)),
    )?)
}

// ---------------------------------------------------------------------------
// geodesic

#[derive(Serialize)]
struct GeodesicDto {
    r0: f64,
    dphi: f64,
    midpoint_radius: f64,
    fgm_asymptotic: f64,
    samples: Vec<GeodesicSample>,
}

#[derive(Serialize)]
struct GeodesicSample {
    phi: f64,
    r: f64,
}

fn cmd_geodesic(ctx: &Ctx, r0: f64, dphi: f64, samples: usize) -> Result<(), Failure> {
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(Failure::State(format!("--r0 must be positive, got {r0}")));
    }
    if samples < 2 {
        return Err(Failure::Parse(
            "--samples must be at least 2 (both endpoints are sampled)".into(),
        ));
    }
    let mid = midpoint_radius(r0, dphi)?;
    let asym = fgm_asymptotic(r0, dphi)?;
    let mut points = Vec::with_capacity(samples);
    for &phi in &grid(0.0, dphi, samples) {
        points.push(GeodesicSample {
            phi,
            r: hyperbolic_geodesic_r(phi, r0, dphi)?,
        });
    }
    let artifact = match ctx.format.unwrap_or(Format::Csv) {
        Format::Json => json_string(&GeodesicDto {
            r0,
            dphi,
            midpoint_radius: mid,
            fgm_asymptotic: asym,
            samples: points,
        })?,
        Format::Csv => csv_string(
            &["phi", "r", "midpoint_radius", "fgm_asymptotic"],
            &points
                .iter()
                .map(|p| vec![sig9(p.phi), sig9(p.r), sig9(mid), sig9(asym)])
                .collect::<Vec<_>>(),
        )?,
    };
    emit(ctx.out.as_deref(), &artifact)
}

// ---------------------------------------------------------------------------
// suite

#[derive(Serialize)]
struct SuiteDto {
    seed: u64,
    trials: usize,
    dims: Vec<usize>,
    all_pass: bool,
    entries: Vec<SuiteEntryDto>,
}

#[derive(Serialize)]
struct SuiteEntryDto {
    name: &'static str,
    trials: usize,
    max_violation: f64,
    tolerance: f64,
    pass: bool,
    worst: Option<WorstDto>,
}

#[derive(Serialize)]
struct WorstDto {
    dim: usize,
    trial: usize,
}

fn cmd_suite(ctx: &Ctx, trials: usize, dims: Vec<usize>) -> Result<(), Failure> {
    if trials > 0 && (dims.is_empty() || dims.iter().any(|&d| d < 2)) {
        return Err(Failure::Parse(
            "--dims must be a nonempty list of dimensions ≥ 2".into(),
        ));
    }
    let config = SuiteConfig {
        seed: Seed(ctx.seed),
        trials,
        dims,
    };
    let report = run_suite(&config)?;

    let dto = SuiteDto {
        seed: ctx.seed,
        trials,
        dims: config.dims.clone(),
        all_pass: report.all_pass(),
        entries: report
            .entries
            .iter()
            .map(|e| SuiteEntryDto {
                name: e.name,
                trials: e.trials,
                max_violation: e.max_violation,
                tolerance: e.tolerance,
                pass: e.pass,
                worst: e.worst.map(|w| WorstDto {
                    dim: w.dim,
                    trial: w.trial,
                }),
            })
            .collect(),
    };
    let machine = |format: Format| -> Result<String, Failure> {
        match format {
            Format::Json => json_string(&dto),
            Format::Csv => csv_string(
                &[
                    "name",
                    "trials",
                    "max_violation",
                    "tolerance",
                    "pass",
                    "worst_dim",
                    "worst_trial",
                ],
                &dto.entries
                    .iter()
                    .map(|e| {
                        vec![
                            e.name.to_string(),
                            e.trials.to_string(),
                            sig9(e.max_violation),
                            sig9(e.tolerance),
                            e.pass.to_string(),
                            e.worst
                                .as_ref()
                                .map_or(String::new(), |w| w.dim.to_string()),
                            e.worst
                                .as_ref()
                                .map_or(String::new(), |w| w.trial.to_string()),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ),
        }
    };

    // The human table is the default view; a machine format replaces it on
    // stdout when requested without --out, and goes to the file (table still
    // on stdout) when --out is given.
    match (ctx.format, ctx.out.as_deref()) {
        (None, None) => emit(None, &suite_table(&report, &config))?,
        (None, Some(path)) => {
            emit(Some(path), &machine(Format::Json)?)?;
            emit(None, &suite_table(&report, &config))?;
        }
        (Some(format), None) => emit(None, &machine(format)?)?,
        (Some(format), Some(path)) => {
            emit(Some(path), &machine(format)?)?;
            emit(None, &suite_table(&report, &config))?;
        }
    }

    suite_verdict(&report, &config)
}

/// Exit verdict: every row must pass, and (for a nonempty run) every
/// headline property row must be present.
fn suite_verdict(report: &SuiteReport, config: &SuiteConfig) -> Result<(), Failure> {
    if config.trials > 0 && !report.table_complete() {
        return Err(Failure::Violation(
            "suite report is missing a headline property row".into(),
        ));
    }
    if report.all_pass() {
        return Ok(());
    }
    let mut lines = Vec::new();
    for e in report.entries.iter().filter(|e| !e.pass) {
        let at = e.worst.map_or(String::new(), |w| {
            format!(" at dim {}, trial {}", w.dim, w.trial)
        });
        lines.push(format!(
            "{}: max violation {:.3e} exceeds tolerance {:.1e}{at} (replay: --seed {} --trials {})",
            e.name, e.max_violation, e.tolerance, config.seed.0, config.trials
        ));
    }
    Err(Failure::Violation(format!(
        "suite violations:\n  {}",
        lines.join("\n  ")
    )))
}

fn suite_table(report: &SuiteReport, config: &SuiteConfig) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    if report.entries.is_empty() {
        let _ = writeln!(out, "0 rows (trials = 0): nothing to check");
        return out;
    }
    let name_w = report
        .entries
        .iter()
        .map(|e| e.name.len())
        .max()
        .unwrap_or(3)
        .max(3);
    let _ = writeln!(
        out,
        "{:<name_w$}  {:>6}  {:>13}  {:>9}  {:<6}  worst case",
        "row", "trials", "max violation", "tolerance", "status"
    );
    for e in &report.entries {
        let worst = e.worst.map_or("-".to_string(), |w| {
            format!("dim {}, trial {}", w.dim, w.trial)
        });
        let _ = writeln!(
            out,
            "{:<name_w$}  {:>6}  {:>13}  {:>9}  {:<6}  {}",
            e.name,
            e.trials,
            format!("{:.3e}", e.max_violation),
            format!("{:.1e}", e.tolerance),
            if e.pass { "pass" } else { "FAIL" },
            worst
        );
    }
    let failed = report.entries.iter().filter(|e| !e.pass).count();
    let verdict = if failed == 0 {
        format!("all {} rows pass", report.entries.len())
    } else {
        format!("{failed} of {} rows FAILED", report.entries.len())
    };
    let _ = writeln!(
        out,
        "\n{verdict}  (seed {}, {} trials, dims {:?})",
        config.seed.0, config.trials, config.dims
    );
    out
}
