//! File formats and process-level plumbing: matrix JSON input, output sinks,
//! CSV assembly, and the classification of failures into exit codes.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use matfid_core::linalg::{CMat, DensityMatrix, HermMat};

/// Largest entrywise deviation from `M = M†` an input file may carry; beyond
/// it the matrix is rejected as malformed rather than silently averaged.
pub const HERMITICITY_TOL: f64 = 1e-9;

/// How far the trace of an input state may sit from 1 before the file is
/// rejected; within it the trace is divided out exactly, so decimal rounding
/// in handwritten files never trips the strict unit-trace invariant.
pub const TRACE_TOL: f64 = 1e-6;

/// A command failure, classified by the exit code it maps to:
///
/// | code | class |
/// |------|-------|
/// | 1 | property violation, or a computation that failed to converge |
/// | 2 | parse error: malformed file, non-Hermitian matrix, bad flag value |
/// | 3 | invalid state: non-PSD, wrong trace, argument out of domain |
#[derive(Debug)]
pub enum Failure {
    /// Exit 1: a property the run was asked to certify does not hold.
    Violation(String),
    /// Exit 1: an internal computation failed (iteration budgets, stalls).
    Runtime(String),
    /// Exit 2: the input could not be parsed into a well-formed matrix.
    Parse(String),
    /// Exit 3: the matrix parsed but is not a valid state, or an argument
    /// lies outside its mathematical domain.
    State(String),
}

impl Failure {
    /// The process exit code this failure maps to.
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Violation(_) | Failure::Runtime(_) => 1,
            Failure::Parse(_) => 2,
            Failure::State(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Violation(msg)
            | Failure::Runtime(msg)
            | Failure::Parse(msg)
            | Failure::State(msg) => f.write_str(msg),
        }
    }
}

impl From<matfid_core::Error> for Failure {
    fn from(e: matfid_core::Error) -> Self {
        use matfid_core::Error::*;
        match e {
            NotSquare { .. } | DimensionMismatch { .. } | NotHermitian { .. } => {
                Failure::Parse(e.to_string())
            }
            NotPsd { .. }
            | InvalidTrace { .. }
            | SingularInput { .. }
            | NegativeProbability { .. }
            | ProbabilitySum { .. }
            | NotNormalized { .. }
            | DomainError { .. }
            | RankOutOfRange { .. }
            | InfeasibleStart { .. } => Failure::State(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

/// On-disk matrix format: row-major real and imaginary parts,
///
/// ```json
/// {"dim": 2, "re": [[1.0, 0.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}
/// ```
///
/// with `"im"` optional (omitted for real matrices). Unknown fields are
/// rejected so typos fail loudly instead of being ignored.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    dim: usize,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

/// Read, validate, and normalize a density matrix from a JSON file.
///
/// Gates, in order: well-formed JSON of the documented shape and Hermiticity
/// within [`HERMITICITY_TOL`] (exit 2); trace within [`TRACE_TOL`] of 1,
/// which is then divided out exactly (exit 3); the optional shift
/// `(ρ + εI)/(1 + nε)`; positive semidefiniteness (exit 3).
pub fn load_density(path: &Path, regularize: Option<f64>) -> Result<DensityMatrix, Failure> {
    let at = |f: Failure| match f {
        Failure::Parse(m) => Failure::Parse(format!("{}: {m}", path.display())),
        Failure::State(m) => Failure::State(format!("{}: {m}", path.display())),
        other => other,
    };
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let mat = matrix_from_file(&file).map_err(at)?;
    let herm = HermMat::new_strict(mat, HERMITICITY_TOL).map_err(|e| at(Failure::from(e)))?;

    let trace = herm.trace();
    if (trace - 1.0).abs() > TRACE_TOL || trace.is_nan() {
        return Err(at(Failure::State(format!(
            "trace must be 1 within {TRACE_TOL:e}, found {trace}"
        ))));
    }
    let mut herm = herm.scale(1.0 / trace);
    if let Some(eps) = regularize {
        let n = herm.dim() as f64;
        herm = herm.add_scaled_identity(eps).scale(1.0 / (1.0 + n * eps));
    }
    DensityMatrix::new(herm).map_err(|e| at(Failure::from(e)))
}

fn matrix_from_file(file: &MatrixFile) -> Result<CMat, Failure> {
    let n = file.dim;
    if n == 0 {
        return Err(Failure::Parse("matrix dimension must be at least 1".into()));
    }
    check_grid("re", &file.re, n)?;
    if let Some(im) = &file.im {
        check_grid("im", im, n)?;
    }
    Ok(CMat::from_fn(n, n, |i, j| {
        let re = file.re[i][j];
        let im = file.im.as_ref().map_or(0.0, |im| im[i][j]);
        Complex64::new(re, im)
    }))
}

fn check_grid(name: &str, grid: &[Vec<f64>], n: usize) -> Result<(), Failure> {
    if grid.len() != n {
        return Err(Failure::Parse(format!(
            "field \"{name}\" must have {n} rows, found {}",
            grid.len()
        )));
    }
    for (i, row) in grid.iter().enumerate() {
        if row.len() != n {
            return Err(Failure::Parse(format!(
                "field \"{name}\" row {i} must have {n} entries, found {}",
                row.len()
            )));
        }
        if let Some(bad) = row.iter().find(|x| !x.is_finite()) {
            return Err(Failure::Parse(format!(
                "field \"{name}\" row {i} contains a non-finite entry {bad}"
            )));
        }
    }
    Ok(())
}

/// Write a fully assembled artifact to `--out`, or to standard output when no
/// path was given.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())
                .and_then(|()| lock.flush())
                .map_err(|e| Failure::Runtime(e.to_string()))
        }
    }
}

/// CSV float format: scientific with 9 significant digits.
pub fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Assemble an RFC-4180-style CSV document: header row first, `\n` record
/// terminator, quoting only where a field requires it.
pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    for row in rows {
        w.write_record(row)
            .map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Runtime(e.to_string()))
}

/// Serialize a report as pretty-printed JSON with a trailing newline.
pub fn json_string<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::Runtime(e.to_string()))
}
