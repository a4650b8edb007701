//! Coherence measures, entropies, the closest-attractor map, decohering
//! power, and network depth (the number of channel applications needed to
//! push a maximally coherent input below a coherence tolerance).

use serde::{Deserialize, Serialize};

use crate::channels::{apply, is_cptp, ChannelSpec, ChannelVariant};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix};
use crate::states::{dephase, DensityMatrix, MaximallyCoherentState};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Eigenvalues of the reference state at or below this threshold are treated
/// as exact zeros when deciding support containment.
pub const SUPPORT_EIG_TOL: f64 = 1e-15;
/// Mass of the argument state allowed outside the reference support before
/// the relative entropy is declared infinite.
pub const SUPPORT_MASS_TOL: f64 = 1e-12;
/// Hard cap on simulated depth iterations.
pub const DEPTH_ITERATION_CAP: u64 = 1_000_000;

/// Sum of the moduli of all off-diagonal entries.
pub fn c_l1(rho: &DensityMatrix) -> f64 {
    c_l1_matrix(rho.matrix())
}

pub(crate) fn c_l1_matrix(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}

/// Von Neumann entropy in bits: `-Σ λ log₂ λ` with `0·log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_eigenvalues(
        &herm_eig(rho.matrix())
            .expect("density matrices are Hermitian")
            .eigenvalues,
    )
}

fn entropy_of_eigenvalues(eigenvalues: &[f64]) -> f64 {
    let mut s = 0.0;
    for &l in eigenvalues {
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    s
}

/// Relative entropy `S(ρ‖σ) = Tr(ρ log₂ ρ) - Tr(ρ log₂ σ)`.
///
/// Returns `f64::INFINITY` when the support of `ρ` is not contained in the
/// support of `σ` (reference eigenvalues at or below [`SUPPORT_EIG_TOL`] count
/// as exact zeros; containment fails once more than [`SUPPORT_MASS_TOL`] of
/// `ρ`'s mass sits on that kernel).
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            context: "relative entropy needs equal dimensions",
            got: sigma.dim(),
            expected: rho.dim(),
        });
    }
    let sig = herm_eig(sigma.matrix())?;
    let n = rho.dim();
    let mut kernel_mass = 0.0;
    let mut cross = 0.0;
    for k in 0..n {
        let v = sig.eigenvectors.column(k);
        // ⟨v_k| ρ |v_k⟩
        let mut p = 0.0;
        for i in 0..n {
            let mut row = num_complex::Complex64::ZERO;
            for j in 0..n {
                row += rho.matrix()[(i, j)] * v[j];
            }
            p += (v[i].conj() * row).re;
        }
        let p = p.max(0.0);
        if sig.eigenvalues[k] <= SUPPORT_EIG_TOL {
            kernel_mass += p;
        } else {
            cross += p * sig.eigenvalues[k].log2();
        }
    }
    if kernel_mass > SUPPORT_MASS_TOL {
        return Ok(f64::INFINITY);
    }
    Ok(-von_neumann_entropy(rho) - cross)
}

/// Relative entropy of coherence `S(Δ(ρ)) - S(ρ)`.
pub fn c_relative_entropy(rho: &DensityMatrix) -> f64 {
    // Δ(ρ) is diagonal, so its entropy comes straight from the populations.
    let diagonal_entropy = entropy_of_eigenvalues(&rho.populations());
    diagonal_entropy - von_neumann_entropy(rho)
}

/// The incoherent state closest to `ρ` in relative entropy, together with the
/// distance: `(Δ(ρ), C_re(ρ))`.
pub fn closest_attractor(rho: &DensityMatrix) -> (DensityMatrix, f64) {
    (dephase(rho), c_relative_entropy(rho))
}

/// One-step coherence loss maximized over maximally coherent inputs, in
/// closed form: `N - 1 - (1/N) Σ_{μ≠ν} |1 + α_{μν}|`.
///
/// Defined for the ideal family only; faulty channels have no closed form and
/// are served by [`estimate_decohering_power`].
pub fn decohering_power(spec: &ChannelSpec) -> Result<f64> {
    if spec.variant() != ChannelVariant::Ideal {
        return Err(Error::WrongVariant {
            expected: "ideal",
            got: spec.variant().name(),
        });
    }
    let n = spec.dim();
    let mut sum = 0.0;
    for mu in 0..n {
        for nu in 0..n {
            if mu != nu {
                sum += (num_complex::Complex64::ONE + spec.alpha().get(mu, nu)).norm();
            }
        }
    }
    Ok(n as f64 - 1.0 - sum / n as f64)
}

/// Brute-force decohering-power estimate for any CPTP channel: the largest
/// `C_l1(ψ) - C_l1(Λ(ψ))` over `samples` maximally coherent states with
/// seeded random phases.
pub fn estimate_decohering_power(spec: &ChannelSpec, samples: usize, seed: u64) -> Result<f64> {
    let n = spec.dim();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..samples.max(1) {
        let phases: Vec<f64> = (0..n)
            .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
            .collect();
        let psi = MaximallyCoherentState::new(n, phases)?.projector();
        let out = apply(spec, &psi)?;
        best = best.max(c_l1(&psi) - c_l1(&out));
    }
    Ok(best)
}

/// Inputs for a depth evaluation: the channel, its dimension, and the
/// coherence tolerance `η ∈ (0, 1)`.
#[derive(Debug, Clone)]
pub struct DepthQuery {
    pub dim: usize,
    pub eta: f64,
    pub spec: ChannelSpec,
}

impl DepthQuery {
    pub fn new(spec: ChannelSpec, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidState {
                context: "depth tolerance must lie strictly inside (0, 1)",
                residual: eta,
            });
        }
        Ok(Self { dim: spec.dim(), eta, spec })
    }
}

/// Result of a depth evaluation.
///
/// `analytic_bound` is present only for uniform-α channels (otherwise no
/// closed form exists and only the simulation speaks); `agreement` records
/// whether the two routes returned the same integer, and is vacuously true
/// when the analytic bound is absent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DepthReport {
    pub analytic_bound: Option<u64>,
    pub simulated_depth: u64,
    pub decohering_power: f64,
    pub agreement: bool,
}

/// Smallest `r` with `C_l1(Λ^r(Ψ_N)) ≤ η`, starting from the zero-phase
/// maximally coherent state, together with the closed-form prediction where
/// one exists.
pub fn depth(query: &DepthQuery) -> Result<DepthReport> {
    let spec = &query.spec;
    if spec.variant() != ChannelVariant::Ideal {
        return Err(Error::WrongVariant {
            expected: "ideal",
            got: spec.variant().name(),
        });
    }
    let verdict = is_cptp(spec);
    if !verdict.cptp {
        return Err(Error::NotCptp {
            min_choi_eigenvalue: verdict.min_choi_eigenvalue,
            tp_residual: verdict.tp_residual,
        });
    }
    let n = query.dim;
    let power = decohering_power(spec)?;

    let analytic_bound = spec.alpha().as_uniform().map(|a| {
        let q = (1.0 + a).abs();
        if q == 0.0 {
            1
        } else if q >= 1.0 {
            u64::MAX // never decays; the simulation will report the cap
        } else {
            let raw = ((query.eta / (n as f64 - 1.0)).ln() / q.ln()).ceil();
            (raw as i64).max(1) as u64
        }
    });

    let psi = MaximallyCoherentState::uniform(n)?.projector();
    let mut m = psi.matrix().clone();
    let mut simulated_depth = None;
    for r in 1..=DEPTH_ITERATION_CAP {
        m = spec.apply_linear(&m);
        if c_l1_matrix(&m) <= query.eta {
            simulated_depth = Some(r);
            break;
        }
    }
    let simulated_depth = simulated_depth.ok_or(Error::DepthExceeded {
        threshold: query.eta,
        cap: DEPTH_ITERATION_CAP,
    })?;

    let agreement = analytic_bound.map_or(true, |a| a == simulated_depth);
    Ok(DepthReport {
        analytic_bound,
        simulated_depth,
        decohering_power: power,
        agreement,
    })
}
