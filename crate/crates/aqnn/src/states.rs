//! Density matrices, pure states, maximally coherent states, dephasing,
//! purification and seeded random-state sampling.
//!
//! The computational basis doubles as the incoherent (attractor) basis
//! throughout the crate, so "diagonal" always means "incoherent".

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, Keep, HERMITICITY_TOL};

/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues above this (negative) floor count as non-negative.
pub const PSD_TOL: f64 = -1e-10;
/// Eigenvalues below this are treated as zero when computing ranks.
pub const RANK_TOL: f64 = 1e-12;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates and wraps a matrix as a quantum state.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::BadDimension {
                dim: matrix.rows(),
                context: "density matrix must be square and non-empty",
            });
        }
        let dev = matrix.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::NonHermitianInput { deviation: dev });
        }
        let trace_err = (matrix.trace() - Complex64::ONE).norm();
        if trace_err > TRACE_TOL {
            return Err(Error::InvalidState {
                context: "trace deviates from one",
                residual: trace_err,
            });
        }
        let eig = herm_eig(&matrix)?;
        let min_eig = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min_eig < PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue: min_eig });
        }
        Ok(Self { dim: matrix.rows(), matrix })
    }

    /// Wraps a matrix that is valid by construction (e.g. the output of a
    /// trace-preserving positive map on a valid state), skipping the checks.
    pub fn new_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { dim: matrix.rows(), matrix }
    }

    /// Pure state `|ψ⟩⟨ψ|` from a unit vector.
    pub fn from_pure(state: &PureState) -> Self {
        let n = state.dim();
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            state.amplitudes()[i] * state.amplitudes()[j].conj()
        });
        Self::new_unchecked(m)
    }

    /// Maximally mixed state `1/N`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension { dim, context: "dimension must be positive" });
        }
        let m = ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
        Ok(Self::new_unchecked(m))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Entry `ρ[(i, j)]`.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Populations, i.e. the diagonal as real numbers.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Rank, counting eigenvalues above `RANK_TOL`.
    pub fn rank(&self) -> Result<usize> {
        let eig = herm_eig(&self.matrix)?;
        Ok(eig.eigenvalues.iter().filter(|&&l| l > RANK_TOL).count())
    }

    /// Purity `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.mul(&self.matrix).trace().re
    }
}

/// Wire format: `{"dim": N, "re": [[…]], "im": [[…]]}` with row-major nesting.
#[derive(Serialize, Deserialize)]
struct DensityMatrixWire {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (re, im) = self.matrix.to_re_im();
        DensityMatrixWire { dim: self.dim, re, im }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = DensityMatrixWire::deserialize(d)?;
        let m = ComplexMatrix::from_re_im(&wire.re, &wire.im).map_err(serde::de::Error::custom)?;
        if m.rows() != wire.dim {
            return Err(serde::de::Error::custom(format!(
                "declared dim {} does not match a {}x{} matrix",
                wire.dim,
                m.rows(),
                m.cols()
            )));
        }
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// A unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validates a vector as a pure state (unit norm within 1e-12).
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::BadDimension { dim: 0, context: "state vector must be non-empty" });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState {
                context: "state vector is not unit norm",
                residual: (norm - 1.0).abs(),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Basis vector `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::BadDimension { dim, context: "basis index out of range" });
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[k] = Complex64::ONE;
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// The projector `|ψ⟩⟨ψ|` as a density matrix.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

/// A maximally coherent state `(1/√N) Σ_k e^{iθ_k} |k⟩`, stored by its phases.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximallyCoherentState {
    phases: Vec<f64>,
}

impl MaximallyCoherentState {
    /// One phase per basis element; `dim` must match the phase count.
    pub fn new(dim: usize, phases: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadDimension { dim, context: "coherent states need dimension >= 2" });
        }
        if phases.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "phase vector length must equal the dimension",
                got: phases.len(),
                expected: dim,
            });
        }
        Ok(Self { phases })
    }

    /// The zero-phase representative `(1/√N) Σ_k |k⟩`.
    pub fn uniform(dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// The state vector realization.
    pub fn pure_state(&self) -> PureState {
        let n = self.phases.len();
        let amp = 1.0 / (n as f64).sqrt();
        PureState {
            amplitudes: self
                .phases
                .iter()
                .map(|&t| Complex64::from_polar(amp, t))
                .collect(),
        }
    }

    /// The projector onto the state.
    pub fn projector(&self) -> DensityMatrix {
        self.pure_state().projector()
    }
}

/// Removes all off-diagonal elements (the dephasing map Δ, projection onto
/// the incoherent states).
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let n = rho.dim();
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(rho.entry(i, i).re, 0.0)
        } else {
            Complex64::ZERO
        }
    });
    DensityMatrix::new_unchecked(m)
}

/// Projector onto the maximally coherent state with the given phases.
pub fn maximally_coherent(dim: usize, phases: &[f64]) -> Result<DensityMatrix> {
    Ok(MaximallyCoherentState::new(dim, phases.to_vec())?.projector())
}

/// Purifies `ρ` on system ⊗ ancilla, with the ancilla dimension equal to the
/// rank of `ρ`. Returns the purification and the ancilla dimension.
///
/// Tracing out the ancilla (`Keep::First` over dims `(N, r)`) recovers `ρ`.
pub fn purify(rho: &DensityMatrix) -> Result<(PureState, usize)> {
    let n = rho.dim();
    let eig = herm_eig(rho.matrix())?;
    let kept: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > RANK_TOL)
        .map(|(k, &l)| (l, k))
        .collect();
    let r = kept.len().max(1);
    let mut amplitudes = vec![Complex64::ZERO; n * r];
    for (slot, &(lambda, col)) in kept.iter().enumerate() {
        let w = lambda.max(0.0).sqrt();
        for i in 0..n {
            amplitudes[i * r + slot] = eig.eigenvectors[(i, col)] * w;
        }
    }
    // Round-off can leave the norm a hair away from one; renormalize exactly.
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amplitudes {
        *z /= norm;
    }
    Ok((PureState { amplitudes }, r))
}

/// Draws a random density matrix of the given rank from the Ginibre ensemble
/// `G G† / tr(G G†)`, deterministically from the seed.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::BadDimension { dim, context: "dimension must be positive" });
    }
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok(random_density_with(dim, rank, &mut rng))
}

/// Same as [`random_density`] but drawing from a caller-supplied generator,
/// for sampling many states from one stream.
pub fn random_density_with<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, rank, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gg = g.mul(&g.adjoint());
    let trace = gg.trace().re;
    DensityMatrix::new_unchecked(gg.scale(Complex64::new(1.0 / trace, 0.0)))
}

/// Partial trace specialization for density matrices on a bipartite space.
pub fn reduce(rho: &DensityMatrix, dims: (usize, usize), keep: Keep) -> Result<DensityMatrix> {
    let m = crate::linalg::partial_trace(rho.matrix(), dims, keep)?;
    Ok(DensityMatrix::new_unchecked(m))
}
