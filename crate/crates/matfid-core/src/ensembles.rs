//! Seeded random ensembles: Ginibre-induced states, Haar unitaries, Kraus
//! channels, and commuting pairs.
//!
//! Every generator is a pure function of its parameters and a [`Seed`]; the
//! property suite and the CLI rely on this to make failures replayable from
//! a `(seed, dimension, trial)` triple alone. Randomness comes from the
//! ChaCha12 stream cipher, which is stable across platforms and Rust
//! versions, unlike `thread_rng`-style sources.
//!
//! # Distributions
//!
//! * [`random_density`]: `ρ = GG†/tr(GG†)` with `G` a `dim × rank` standard
//!   complex Ginibre matrix — the natural trace-normalized ensemble of fixed
//!   rank.
//! * [`random_unitary`]: Haar-distributed, via Gram–Schmidt on a square
//!   Ginibre matrix (the factor with positive-real diagonal `R`, which is the
//!   distribution-correct convention).
//! * [`random_channel`]: a Haar isometry `V : ℂ^dim → ℂ^{dim·k}` cut into `k`
//!   Kraus operators, giving a uniform (Stinespring) random CPTP channel;
//!   with [`KrausChannel::pre_transpose`] set, the channel acts as
//!   `X ↦ Σ Kᵢ Xᵀ Kᵢ†`, which is still positive and trace-preserving but in
//!   general not completely positive.
//! * [`random_commuting_pair`]: two states diagonal in a shared Haar
//!   eigenbasis, with independent uniform-simplex spectra.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::linalg::{min_eigenvalue, CMat, DensityMatrix, HermMat, ProbVector, UnitaryMatrix};
use crate::{Error, Result};

/// Seed for the deterministic ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seed(pub u64);

impl Seed {
    /// Derive an independent stream for a sub-experiment (a trial index, a
    /// dimension, …) without correlating with other derived streams.
    pub fn derive(self, stream: u64) -> Seed {
        Seed(splitmix64(self.0 ^ splitmix64(stream)))
    }
}

/// SplitMix64 finalizer — a cheap, well-mixed 64-bit permutation.
fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng_for(seed: Seed) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed.0)
}

/// One standard normal sample (Box–Muller; the cosine branch).
fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    let u1: f64 = loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.gen();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

/// Standard complex Gaussian entry: independent `N(0,1)` real and imaginary
/// parts (the overall variance convention cancels in every normalized
/// ensemble below).
fn standard_complex(rng: &mut ChaCha12Rng) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> CMat {
    let mut m = CMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = standard_complex(rng);
        }
    }
    m
}

/// Uniform sample from the probability simplex (normalized exponentials).
fn simplex(dim: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let mut e: Vec<f64> = (0..dim)
        .map(|_| {
            let u: f64 = loop {
                let u: f64 = rng.gen();
                if u > 0.0 {
                    break u;
                }
            };
            -libm::log(u)
        })
        .collect();
    let sum: f64 = e.iter().sum();
    for x in e.iter_mut() {
        *x /= sum;
    }
    e
}

/// Random density matrix of the given rank: `GG†/tr(GG†)` with `G` a
/// `dim × rank` Ginibre matrix.
///
/// # Errors
///
/// [`Error::RankOutOfRange`] unless `1 ≤ rank ≤ dim`.
pub fn random_density(dim: usize, rank: usize, seed: Seed) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    let mut rng = rng_for(seed);
    let g = ginibre(dim, rank, &mut rng);
    let m = g.mul(&g.dagger()).hermitize();
    let tr = m.trace();
    DensityMatrix::new(m.scale(1.0 / tr))
}

/// Haar-random unitary matrix.
///
/// # Errors
///
/// [`Error::NotUnitary`] if orthogonalization failed to reach the `1e−12·dim`
/// gate (never observed at these dimensions; the error is the honest
/// propagation of the constructor's check).
pub fn random_unitary(dim: usize, seed: Seed) -> Result<UnitaryMatrix> {
    let mut rng = rng_for(seed);
    let g = ginibre(dim, dim, &mut rng);
    UnitaryMatrix::new(gram_schmidt(&g))
}

/// Modified Gram–Schmidt with a second re-orthogonalization pass ("twice is
/// enough"), normalizing each pivot against its own norm — equivalently the
/// QR factor with positive-real diagonal `R`, the convention under which a
/// Ginibre input yields a Haar-distributed `Q`.
fn gram_schmidt(g: &CMat) -> CMat {
    let n = g.rows();
    let mut cols: Vec<Vec<Complex64>> = (0..g.cols())
        .map(|j| (0..n).map(|i| g[(i, j)]).collect())
        .collect();
    for j in 0..cols.len() {
        for _pass in 0..2 {
            let (settled, rest) = cols.split_at_mut(j);
            let pivot = &mut rest[0];
            for prior in settled.iter() {
                let proj: Complex64 = prior
                    .iter()
                    .zip(pivot.iter())
                    .map(|(p, q)| p.conj() * q)
                    .sum();
                for (q, p) in pivot.iter_mut().zip(prior.iter()) {
                    *q -= proj * p;
                }
            }
        }
        let nrm = libm::sqrt(cols[j].iter().map(|z| z.norm_sqr()).sum());
        for z in cols[j].iter_mut() {
            *z = z.unscale(nrm);
        }
    }
    CMat::from_fn(n, cols.len(), |i, j| cols[j][i])
}

/// Haar-random unit vector.
pub fn random_ket(dim: usize, seed: Seed) -> Vec<Complex64> {
    let mut rng = rng_for(seed);
    let mut v: Vec<Complex64> = (0..dim).map(|_| standard_complex(&mut rng)).collect();
    let nrm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
    for z in v.iter_mut() {
        *z = z.unscale(nrm);
    }
    v
}

/// GUE-style random Hermitian matrix: the Hermitian part of a square Ginibre
/// sample. Entries are mean-zero with `O(1)` variance; no definiteness or
/// trace normalization is imposed.
pub fn random_hermitian(dim: usize, seed: Seed) -> HermMat {
    let mut rng = rng_for(seed);
    ginibre(dim, dim, &mut rng).hermitize()
}

/// Uniform random point on the probability simplex.
///
/// # Errors
///
/// Constructor failures propagate (not expected: the sample is normalized
/// and nonnegative by construction).
pub fn random_probs(dim: usize, seed: Seed) -> Result<ProbVector> {
    let mut rng = rng_for(seed);
    ProbVector::new(simplex(dim, &mut rng))
}

/// Two states diagonal in a shared Haar-random eigenbasis, with independent
/// uniform-simplex spectra.
///
/// # Errors
///
/// Constructor failures propagate (not expected for this construction).
pub fn random_commuting_pair(dim: usize, seed: Seed) -> Result<(DensityMatrix, DensityMatrix)> {
    let u = random_unitary(dim, seed.derive(0))?;
    let mut rng = rng_for(seed.derive(1));
    let p = simplex(dim, &mut rng);
    let q = simplex(dim, &mut rng);
    let rho = DensityMatrix::new(u.conjugate(&HermMat::from_diag(&p)))?;
    let sigma = DensityMatrix::new(u.conjugate(&HermMat::from_diag(&q)))?;
    Ok((rho, sigma))
}

/// A channel in Kraus form: `Φ(X) = Σᵢ Kᵢ X Kᵢ†`, or with
/// [`pre_transpose`](KrausChannel::pre_transpose) set,
/// `Φ(X) = Σᵢ Kᵢ Xᵀ Kᵢ†`.
///
/// Both variants are positive and trace-preserving on Hermitian input; the
/// transposed variant is in general not completely positive, which
/// [`KrausChannel::choi`] certifies through a negative eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    ops: Vec<CMat>,
    pre_transpose: bool,
}

impl KrausChannel {
    /// Build a channel from explicit Kraus operators.
    ///
    /// # Errors
    ///
    /// [`Error::DimensionMismatch`] on empty or inconsistently sized
    /// operators; [`Error::IncompleteMeasurement`] if `Σ Kᵢ†Kᵢ` deviates from
    /// the identity by more than `1e−10 · dim` in Frobenius norm (the
    /// trace-preservation condition).
    pub fn new(ops: Vec<CMat>, pre_transpose: bool) -> Result<Self> {
        let dim = match ops.first() {
            Some(k) => k.rows(),
            None => {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    found: 0,
                })
            }
        };
        let mut sum = CMat::zeros(dim, dim);
        for k in &ops {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.rows(),
                });
            }
            sum = sum.add(&k.dagger().mul(k));
        }
        let residual = sum.sub(&CMat::identity(dim)).frobenius_norm();
        if residual > 1e-10 * dim as f64 {
            return Err(Error::IncompleteMeasurement { residual });
        }
        Ok(KrausChannel { ops, pre_transpose })
    }

    /// The Kraus operators.
    pub fn kraus_ops(&self) -> &[CMat] {
        &self.ops
    }

    /// Whether the channel transposes its input first (the PTP-not-CP
    /// construction).
    pub fn pre_transpose(&self) -> bool {
        self.pre_transpose
    }

    /// Input/output dimension.
    pub fn dim(&self) -> usize {
        self.ops.first().map(|k| k.rows()).unwrap_or(0)
    }

    /// Apply the channel to a Hermitian matrix (the output is re-hermitized;
    /// positivity is preserved by both variants).
    pub fn apply_herm(&self, h: &HermMat) -> HermMat {
        self.apply_raw(h.mat()).hermitize()
    }

    /// Apply the channel to a state.
    ///
    /// # Errors
    ///
    /// [`Error::DimensionMismatch`]; the output state re-validates its own
    /// invariants (PSD, unit trace), so constructor errors would surface a
    /// defect in the channel itself.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        DensityMatrix::new(self.apply_herm(rho.herm()))
    }

    /// The Choi matrix `(Φ ⊗ id)(|Ω⟩⟨Ω|)` with `|Ω⟩ = Σᵢ|ii⟩/√dim`:
    /// block `(i, j)` is `Φ(e_ij)/dim`. The channel is completely positive
    /// exactly when this matrix is PSD.
    pub fn choi(&self) -> HermMat {
        let d = self.dim();
        let mut j_mat = CMat::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                let mut e_ij = CMat::zeros(d, d);
                e_ij[(i, j)] = Complex64::new(1.0, 0.0);
                let phi = self.apply_raw(&e_ij);
                for k in 0..d {
                    for l in 0..d {
                        j_mat[(k * d + i, l * d + j)] = phi[(k, l)].unscale(d as f64);
                    }
                }
            }
        }
        j_mat.hermitize()
    }

    /// Certify complete positivity through the Choi spectrum: returns the
    /// smallest Choi eigenvalue (negative values witness non-CP).
    ///
    /// # Errors
    ///
    /// Eigensolver failures propagate.
    pub fn choi_min_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.choi())
    }

    /// The raw action on an arbitrary (not necessarily Hermitian) matrix,
    /// without re-hermitization — used for the Choi blocks.
    fn apply_raw(&self, x: &CMat) -> CMat {
        let input = if self.pre_transpose {
            x.transpose()
        } else {
            x.clone()
        };
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for k in &self.ops {
            out = out.add(&k.mul(&input).mul(&k.dagger()));
        }
        out
    }
}

/// Uniform random CPTP channel with `kraus_count` Kraus operators, from a
/// Haar isometry: take the first `dim` columns of a Haar unitary of dimension
/// `dim · kraus_count` and slice its rows into `kraus_count` blocks. With
/// `pre_transpose` the same operators act on the transposed input, giving a
/// positive trace-preserving map that is typically not completely positive.
///
/// # Errors
///
/// [`Error::RankOutOfRange`] if `kraus_count = 0`; constructor errors
/// propagate.
pub fn random_channel(
    dim: usize,
    kraus_count: usize,
    pre_transpose: bool,
    seed: Seed,
) -> Result<KrausChannel> {
    if kraus_count == 0 {
        return Err(Error::RankOutOfRange {
            rank: kraus_count,
            dim,
        });
    }
    let big = random_unitary(dim * kraus_count, seed)?;
    let ops = (0..kraus_count)
        .map(|i| big.mat().block(i * dim, 0, dim, dim))
        .collect();
    KrausChannel::new(ops, pre_transpose)
}
