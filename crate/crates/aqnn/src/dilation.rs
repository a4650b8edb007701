//! Environment dilations: unitaries `U` on `system ⊗ ancilla` that reproduce
//! a channel as `Λ(ρ) = Tr_anc[U(ρ ⊗ |a₀⟩⟨a₀|)U†]`.
//!
//! Three constructions are provided:
//!
//! * the ideal-family dilation `U = Σ_μ |μ⟩⟨μ| ⊗ U_μ`, block diagonal in the
//!   system index, built from a Gram factorization of the coherence weights;
//! * the strictly-incoherent dilation for the `(ε, γ)` family on its
//!   boundary subfamily (`|1+α_{μν}| = 1-ε`, `|γ| = ε/(N-1)`), built from
//!   permutation operators that swap one basis pair each;
//! * the generic dilation `V = Σ_α K_α ⊗ |a_α⟩` from any Kraus set.
//!
//! Composite indices are system-major throughout: `|μ, k⟩ = μ·d_A + k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::{apply, ChannelSpec, ChannelVariant, KrausSet};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron, partial_trace, trace_norm, ComplexMatrix, Keep};
use crate::states::{random_density, DensityMatrix};

/// Eigenvalues of the Gram matrix below this threshold are treated as zero
/// modes and reduce the ancilla dimension.
pub const GRAM_RANK_CUTOFF: f64 = 1e-10;
/// Largest constraint violation tolerated by the strictly-incoherent builder.
pub const SIO_CONSTRAINT_TOL: f64 = 1e-10;
/// Base seed for the deterministic verification states.
const VERIFY_SEED: u64 = 0xD11A7E;

/// Normalized vectors `c_μ` realizing `⟨c_ν|c_μ⟩ = 1 + α_{μν}`.
#[derive(Debug, Clone)]
pub struct GramVectors {
    pub dim: usize,
    pub ancilla_dim: usize,
    pub vectors: Vec<Vec<Complex64>>,
}

impl GramVectors {
    /// Largest deviation of the realized overlaps from the requested Gram
    /// matrix (diagonal 1, off-diagonal `1 + α_{μν}`).
    pub fn max_gram_residual(&self, alpha: &crate::channels::AlphaMatrix) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..self.dim {
            for nu in 0..self.dim {
                let overlap: Complex64 = self.vectors[nu]
                    .iter()
                    .zip(&self.vectors[mu])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let target = if mu == nu {
                    Complex64::ONE
                } else {
                    Complex64::ONE + alpha.get(mu, nu)
                };
                worst = worst.max((overlap - target).norm());
            }
        }
        worst
    }
}

/// A dilation unitary together with its factor dimensions and the ancilla
/// reference state `|a₀⟩` (a basis index).
#[derive(Debug, Clone)]
pub struct DilationUnitary {
    pub system_dim: usize,
    pub ancilla_dim: usize,
    pub ancilla_start_index: usize,
    pub matrix: ComplexMatrix,
}

impl DilationUnitary {
    /// `max |U†U - 1|`.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.matrix.rows();
        self.matrix
            .adjoint()
            .mul(&self.matrix)
            .max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// Largest modulus of any entry connecting two different system indices;
    /// zero exactly for the block-diagonal ideal-family construction.
    pub fn max_cross_block_entry(&self) -> f64 {
        let (n, da) = (self.system_dim, self.ancilla_dim);
        let mut worst = 0.0f64;
        for mu in 0..n {
            for nu in 0..n {
                if mu == nu {
                    continue;
                }
                for a in 0..da {
                    for b in 0..da {
                        worst = worst.max(self.matrix[(mu * da + a, nu * da + b)].norm());
                    }
                }
            }
        }
        worst
    }
}

#[derive(Serialize, Deserialize)]
struct DilationWire {
    system_dim: usize,
    ancilla_dim: usize,
    ancilla_start_index: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for DilationUnitary {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (re, im) = self.matrix.to_re_im();
        DilationWire {
            system_dim: self.system_dim,
            ancilla_dim: self.ancilla_dim,
            ancilla_start_index: self.ancilla_start_index,
            re,
            im,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DilationUnitary {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let wire = DilationWire::deserialize(d)?;
        let matrix = ComplexMatrix::from_re_im(&wire.re, &wire.im).map_err(DeError::custom)?;
        if matrix.rows() != wire.system_dim * wire.ancilla_dim {
            return Err(DeError::custom("matrix size does not match the declared factors"));
        }
        if wire.ancilla_start_index >= wire.ancilla_dim {
            return Err(DeError::custom("ancilla start index out of range"));
        }
        Ok(DilationUnitary {
            system_dim: wire.system_dim,
            ancilla_dim: wire.ancilla_dim,
            ancilla_start_index: wire.ancilla_start_index,
            matrix,
        })
    }
}

/// Factorizes the Gram matrix `G_{μμ} = 1`, `G_{μν} = 1 + α_{μν}` into unit
/// vectors with `⟨c_ν|c_μ⟩ = G_{μν}`, reducing to the numerical rank.
pub fn gram_factorize(alpha: &crate::channels::AlphaMatrix) -> Result<GramVectors> {
    let n = alpha.dim();
    let g = ComplexMatrix::from_fn(n, n, |mu, nu| {
        if mu == nu {
            Complex64::ONE
        } else {
            Complex64::ONE + alpha.get(mu, nu)
        }
    });
    let eig = herm_eig(&g)?;
    let min_eig = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min_eig < -GRAM_RANK_CUTOFF {
        return Err(Error::NotPsd { min_eigenvalue: min_eig });
    }
    let kept: Vec<usize> = (0..n)
        .filter(|&k| eig.eigenvalues[k] > GRAM_RANK_CUTOFF)
        .collect();
    let ancilla_dim = kept.len().max(1);
    // c_μ are the rows of V√Λ restricted to the kept eigenvalues, so that
    // Σ_k c_μ[k] conj(c_ν[k]) = (VΛV†)_{μν} = G_{μν}.
    let vectors = (0..n)
        .map(|mu| {
            (0..ancilla_dim)
                .map(|slot| {
                    kept.get(slot)
                        .map(|&k| eig.eigenvectors[(mu, k)] * eig.eigenvalues[k].sqrt())
                        .unwrap_or(Complex64::ZERO)
                })
                .collect()
        })
        .collect();
    Ok(GramVectors { dim: n, ancilla_dim, vectors })
}

/// Unitary on `C^d` mapping `e₀` to the unit vector `c`, acting as the
/// identity on the orthogonal complement of `span{e₀, c}`.
fn rotation_from_e0(c: &[Complex64]) -> ComplexMatrix {
    let d = c.len();
    let beta1 = c[0];
    // v = c - ⟨e₀|c⟩ e₀ is the component orthogonal to e₀.
    let mut v: Vec<Complex64> = c.to_vec();
    v[0] = Complex64::ZERO;
    let beta2 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if beta2 <= 1e-14 {
        // c is parallel to e₀; a phase on the e₀ axis suffices.
        let phase = if beta1.norm() > 1e-14 {
            beta1 / beta1.norm()
        } else {
            Complex64::ONE
        };
        let mut u = ComplexMatrix::identity(d);
        u[(0, 0)] = phase;
        return u;
    }
    let u2: Vec<Complex64> = v.iter().map(|x| x / beta2).collect();
    // In the basis {e₀, u₂} the map is [[β₁, -β̄₂], [β₂, β̄₁]] with β₂ real;
    // outside that plane it is the identity.
    let mut u = ComplexMatrix::identity(d);
    for r in 0..d {
        let e0_r = if r == 0 { Complex64::ONE } else { Complex64::ZERO };
        for s in 0..d {
            let e0_s = if s == 0 { Complex64::ONE } else { Complex64::ZERO };
            let term = -e0_r * e0_s.conj() - u2[r] * u2[s].conj()
                + (beta1 * e0_r + beta2 * u2[r]) * e0_s.conj()
                + (-beta2 * e0_r + beta1.conj() * u2[r]) * u2[s].conj();
            u[(r, s)] += term;
        }
    }
    u
}

/// Dilation of an ideal channel: `U = Σ_μ |μ⟩⟨μ| ⊗ U_μ` with
/// `U_μ|a₀⟩ = |c_μ⟩`, the Gram vectors of the coherence weights.
pub fn build_gio_dilation(spec: &ChannelSpec) -> Result<DilationUnitary> {
    if spec.variant() != ChannelVariant::Ideal {
        return Err(Error::WrongVariant {
            expected: "ideal",
            got: spec.variant().name(),
        });
    }
    let verdict = crate::channels::is_cptp(spec);
    if !verdict.cptp {
        return Err(Error::NotCptp {
            min_choi_eigenvalue: verdict.min_choi_eigenvalue,
            tp_residual: verdict.tp_residual,
        });
    }
    let gram = gram_factorize(spec.alpha())?;
    let (n, da) = (gram.dim, gram.ancilla_dim);
    let mut u = ComplexMatrix::zeros(n * da, n * da);
    for mu in 0..n {
        let block = rotation_from_e0(&gram.vectors[mu]);
        for a in 0..da {
            for b in 0..da {
                u[(mu * da + a, mu * da + b)] = block[(a, b)];
            }
        }
    }
    Ok(DilationUnitary {
        system_dim: n,
        ancilla_dim: da,
        ancilla_start_index: 0,
        matrix: u,
    })
}

/// Dilation of a boundary `(ε, γ)` channel by swap operators.
///
/// The construction superposes the identity permutation (weight
/// `c_μ^{(0)} = √(1-ε)·e^{iφ_μ}`) with one transposition per basis pair,
/// where the transposition `(μ,ν)` carries weights of modulus `√(ε/(N-1))`
/// on exactly the two swapped states and phases reproducing `γ`. It exists
/// precisely on the boundary subfamily `|1+α_{μν}| = 1-ε`, `|γ| = ε/(N-1)`
/// (with consistent phases); interior channels get a
/// [`Error::ConstraintInfeasible`] and are served by
/// [`build_generic_dilation`] instead.
pub fn build_sio_dilation(spec: &ChannelSpec) -> Result<DilationUnitary> {
    if spec.variant() != ChannelVariant::FaultyEpsGamma {
        return Err(Error::WrongVariant {
            expected: "eps_gamma",
            got: spec.variant().name(),
        });
    }
    let verdict = crate::channels::is_cptp(spec);
    if !verdict.cptp {
        return Err(Error::NotCptp {
            min_choi_eigenvalue: verdict.min_choi_eigenvalue,
            tp_residual: verdict.tp_residual,
        });
    }
    let n = spec.dim();
    let eps = spec.epsilon();
    let gamma = spec.gamma();
    let keep_mod = (1.0 - eps).sqrt();
    let leak = eps / (n as f64 - 1.0);

    // Identity-permutation weights: c_μ^{(0)} = √(1-ε)·e^{iφ_μ} must satisfy
    // c_μ^{(0)} conj(c_ν^{(0)}) = 1 + α_{μν}. Anchor φ₀ = 0 and read the rest
    // off the first row, then verify every pair.
    let mut phases = vec![0.0f64; n];
    for nu in 1..n {
        let t = Complex64::ONE + spec.alpha().get(0, nu);
        phases[nu] = -t.arg();
    }
    for mu in 0..n {
        for nu in 0..n {
            if mu == nu {
                continue;
            }
            let realized = Complex64::from_polar(1.0 - eps, phases[mu] - phases[nu]);
            let target = Complex64::ONE + spec.alpha().get(mu, nu);
            let violation = (realized - target).norm();
            if violation > SIO_CONSTRAINT_TOL {
                return Err(Error::ConstraintInfeasible {
                    context: format!(
                        "identity-permutation weight product for pair ({mu},{nu}): \
                         need 1+α = (1-ε)·e^{{i(φ_{mu}-φ_{nu})}}"
                    ),
                    violation,
                });
            }
        }
    }

    // Transposition weights: the swap (μ,ν) carries c_μ^{(k)} conj(c_ν^{(k)})
    // = γ with both moduli √(ε/(N-1)), which pins |γ| to ε/(N-1).
    if n >= 2 && eps > 0.0 {
        let violation = (gamma.norm() - leak).abs();
        if violation > SIO_CONSTRAINT_TOL {
            return Err(Error::ConstraintInfeasible {
                context: format!(
                    "transposition weight product: need |γ| = ε/(N-1) = {leak}, got |γ| = {}",
                    gamma.norm()
                ),
                violation,
            });
        }
    }

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|mu| ((mu + 1)..n).map(move |nu| (mu, nu)))
        .collect();
    let da = 1 + pairs.len();
    let mut u = ComplexMatrix::zeros(n * da, n * da);
    let swap_mod = leak.sqrt();
    let gamma_phase = if gamma.norm() > 0.0 { gamma.arg() } else { 0.0 };
    for mu in 0..n {
        // k = 0: identity permutation.
        u[(mu * da, mu * da)] = Complex64::from_polar(keep_mod, phases[mu]);
        // k ≥ 1: the transpositions that move μ.
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if mu == a {
                // c_a^{(k)} = √(ε/(N-1))·e^{i·arg γ}, sent to |b⟩.
                u[(b * da + (k + 1), mu * da)] =
                    Complex64::from_polar(swap_mod, gamma_phase);
            } else if mu == b {
                // c_b^{(k)} = √(ε/(N-1)), sent to |a⟩.
                u[(a * da + (k + 1), mu * da)] = Complex64::new(swap_mod, 0.0);
            }
        }
    }
    let fixed: Vec<usize> = (0..n).map(|mu| mu * da).collect();
    let matrix = complete_to_unitary(u, &fixed)?;
    Ok(DilationUnitary {
        system_dim: n,
        ancilla_dim: da,
        ancilla_start_index: 0,
        matrix,
    })
}

/// Dilation of an arbitrary Kraus set: the isometry `V = Σ_α K_α ⊗ |a_α⟩`
/// on the `|·, a₀⟩` subspace, completed to a unitary.
pub fn build_generic_dilation(kraus: &KrausSet) -> Result<DilationUnitary> {
    let n = kraus.dim();
    let da = kraus.len();
    let mut u = ComplexMatrix::zeros(n * da, n * da);
    for mu in 0..n {
        for (alpha, op) in kraus.operators().iter().enumerate() {
            for r in 0..n {
                u[(r * da + alpha, mu * da)] = op[(r, mu)];
            }
        }
    }
    let fixed: Vec<usize> = (0..n).map(|mu| mu * da).collect();
    let matrix = complete_to_unitary(u, &fixed)?;
    Ok(DilationUnitary {
        system_dim: n,
        ancilla_dim: da,
        ancilla_start_index: 0,
        matrix,
    })
}

/// Extends a partially defined matrix (orthonormal columns at `fixed`) to a
/// unitary by Gram–Schmidt over canonical basis vectors in index order.
fn complete_to_unitary(mut u: ComplexMatrix, fixed: &[usize]) -> Result<ComplexMatrix> {
    let d = u.rows();
    let mut defined: Vec<Vec<Complex64>> = fixed.iter().map(|&c| u.column(c)).collect();
    for (i, col) in defined.iter().enumerate() {
        let norm: f64 = col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidState {
                context: "dilation column is not normalized",
                residual: (norm - 1.0).abs(),
            });
        }
        let _ = i;
    }
    let free: Vec<usize> = (0..d).filter(|c| !fixed.contains(c)).collect();
    let mut next_free = free.into_iter();
    for t in 0..d {
        if defined.len() == d {
            break;
        }
        let mut v: Vec<Complex64> = (0..d)
            .map(|r| if r == t { Complex64::ONE } else { Complex64::ZERO })
            .collect();
        // Two projection passes keep the loss of orthogonality at round-off
        // level even when e_t lies close to the current span.
        for _ in 0..2 {
            for col in &defined {
                let overlap: Complex64 = col.iter().zip(&v).map(|(c, x)| c.conj() * x).sum();
                for (x, c) in v.iter_mut().zip(col) {
                    *x -= overlap * c;
                }
            }
        }
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            for x in v.iter_mut() {
                *x /= norm;
            }
            let slot = next_free
                .next()
                .expect("free column slots match the remaining dimension");
            for r in 0..d {
                u[(r, slot)] = v[r];
            }
            defined.push(v);
        }
    }
    if defined.len() != d {
        return Err(Error::SolverDidNotConverge {
            context: "unitary completion ran out of basis vectors",
            residual: (d - defined.len()) as f64,
        });
    }
    Ok(u)
}

/// Largest trace-norm mismatch between the dilation round-trip and the
/// channel itself over deterministic pseudo-random input states.
pub fn verify_dilation(u: &DilationUnitary, spec: &ChannelSpec, trials: usize) -> Result<f64> {
    if u.system_dim != spec.dim() {
        return Err(Error::DimensionMismatch {
            context: "dilation system factor must match the channel",
            got: u.system_dim,
            expected: spec.dim(),
        });
    }
    let n = u.system_dim;
    let da = u.ancilla_dim;
    let mut ancilla = ComplexMatrix::zeros(da, da);
    ancilla[(u.ancilla_start_index, u.ancilla_start_index)] = Complex64::ONE;
    let mut worst = 0.0f64;
    for trial in 0..trials.max(1) {
        let rho = random_density(n, n, VERIFY_SEED + trial as u64)?;
        let joint = kron(rho.matrix(), &ancilla);
        let evolved = u.matrix.mul(&joint).mul(&u.matrix.adjoint());
        let reduced = partial_trace(&evolved, (n, da), Keep::First)?;
        let direct = apply(spec, &rho)?;
        worst = worst.max(trace_norm(&reduced.sub(direct.matrix()))?);
    }
    Ok(worst)
}

/// Round-trip of the dilation on one explicit state (used by examples and
/// tests that want the reduced output itself, not only the residual).
pub fn dilation_round_trip(u: &DilationUnitary, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != u.system_dim {
        return Err(Error::DimensionMismatch {
            context: "state dimension must match the dilation's system factor",
            got: rho.dim(),
            expected: u.system_dim,
        });
    }
    let (n, da) = (u.system_dim, u.ancilla_dim);
    let mut ancilla = ComplexMatrix::zeros(da, da);
    ancilla[(u.ancilla_start_index, u.ancilla_start_index)] = Complex64::ONE;
    let joint = kron(rho.matrix(), &ancilla);
    let evolved = u.matrix.mul(&joint).mul(&u.matrix.adjoint());
    let reduced = partial_trace(&evolved, (n, da), Keep::First)?;
    Ok(DensityMatrix::new_unchecked(reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{choi, is_cptp, kraus_from_choi, AlphaMatrix};
    use crate::states::dephase;
    use crate::testutil::{c, cr};

    fn ideal_uniform(dim: usize, a: f64) -> ChannelSpec {
        ChannelSpec::ideal(AlphaMatrix::uniform(dim, a).unwrap())
    }

    #[test]
    fn gram_of_the_identity_channel_is_rank_one() {
        let gram = gram_factorize(&AlphaMatrix::uniform(3, 0.0).unwrap()).unwrap();
        assert_eq!(gram.ancilla_dim, 1);
        for v in &gram.vectors {
            assert_eq!(v.len(), 1);
            assert!((v[0].norm() - 1.0).abs() < 1e-12);
        }
        assert!(gram.max_gram_residual(&AlphaMatrix::uniform(3, 0.0).unwrap()) < 1e-10);
    }

    #[test]
    fn gram_of_the_simplex_point_drops_one_mode() {
        let n = 3;
        let alpha = AlphaMatrix::uniform(n, -(n as f64) / (n as f64 - 1.0)).unwrap();
        let gram = gram_factorize(&alpha).unwrap();
        assert_eq!(gram.ancilla_dim, n - 1);
        assert!(gram.max_gram_residual(&alpha) < 1e-8);
        // Overlaps are 1 - N/(N-1) = -1/(N-1).
        let overlap: Complex64 = gram.vectors[1]
            .iter()
            .zip(&gram.vectors[0])
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!((overlap - cr(-0.5)).norm() < 1e-10);
    }

    #[test]
    fn gram_factorization_of_a_qubit_pair() {
        let alpha = AlphaMatrix::uniform(2, -0.5).unwrap();
        let gram = gram_factorize(&alpha).unwrap();
        assert_eq!(gram.ancilla_dim, 2);
        assert!(gram.max_gram_residual(&alpha) < 1e-10);
    }

    #[test]
    fn gram_rejects_indefinite_weights() {
        assert!(matches!(
            gram_factorize(&AlphaMatrix::uniform(2, 0.5).unwrap()),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn gram_handles_complex_weights() {
        let mut entries = ComplexMatrix::zeros(3, 3);
        for (i, j, re, im) in [(0, 1, -0.9, 0.05), (0, 2, -0.8, -0.1), (1, 2, -0.85, 0.02)] {
            entries[(i, j)] = c(re, im);
            entries[(j, i)] = c(re, -im);
        }
        let alpha = AlphaMatrix::from_matrix(entries).unwrap();
        assert!(is_cptp(&ChannelSpec::ideal(alpha.clone())).cptp);
        let gram = gram_factorize(&alpha).unwrap();
        assert!(gram.max_gram_residual(&alpha) < 1e-8);
    }

    #[test]
    fn identity_channel_dilates_to_the_identity() {
        let u = build_gio_dilation(&ideal_uniform(3, 0.0)).unwrap();
        assert_eq!(u.ancilla_dim, 1);
        assert!(u.matrix.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        assert!(verify_dilation(&u, &ideal_uniform(3, 0.0), 5).unwrap() < 1e-12);
    }

    #[test]
    fn full_dephasing_dilation_round_trips_to_the_dephased_state() {
        let spec = ideal_uniform(2, -1.0);
        let u = build_gio_dilation(&spec).unwrap();
        assert_eq!(u.ancilla_dim, 2);
        assert!(u.unitarity_residual() < 1e-10);
        let rho = random_density(2, 2, 5).unwrap();
        let out = dilation_round_trip(&u, &rho).unwrap();
        assert!(out.matrix().max_abs_diff(dephase(&rho).matrix()) < 1e-12);
    }

    #[test]
    fn gio_dilation_is_block_diagonal_and_round_trips() {
        let mut entries = ComplexMatrix::zeros(3, 3);
        for (i, j, re, im) in [(0, 1, -0.7, 0.1), (0, 2, -0.9, 0.0), (1, 2, -0.6, -0.2)] {
            entries[(i, j)] = c(re, im);
            entries[(j, i)] = c(re, -im);
        }
        let alpha = AlphaMatrix::from_matrix(entries).unwrap();
        let spec = ChannelSpec::ideal(alpha);
        assert!(is_cptp(&spec).cptp);
        let u = build_gio_dilation(&spec).unwrap();
        assert_eq!(u.max_cross_block_entry(), 0.0);
        assert!(u.unitarity_residual() < 1e-10);
        assert!(verify_dilation(&u, &spec, 20).unwrap() < 1e-9);
    }

    #[test]
    fn gio_dilation_rejects_wrong_inputs() {
        let faulty = ChannelSpec::faulty(
            AlphaMatrix::uniform(2, -0.5).unwrap(),
            0.1,
            Complex64::ZERO,
        )
        .unwrap();
        assert!(matches!(
            build_gio_dilation(&faulty),
            Err(Error::WrongVariant { .. })
        ));
        assert!(matches!(
            build_gio_dilation(&ideal_uniform(2, 0.1)),
            Err(Error::NotCptp { .. })
        ));
    }

    #[test]
    fn boundary_sio_dilation_round_trips() {
        // N = 2, ε = 0.2: boundary means |1+α| = 0.8 and |γ| = 0.2.
        let alpha = AlphaMatrix::uniform(2, -0.2).unwrap();
        let spec = ChannelSpec::faulty(alpha, 0.2, cr(0.2)).unwrap();
        assert!(is_cptp(&spec).cptp);
        let u = build_sio_dilation(&spec).unwrap();
        assert_eq!(u.ancilla_dim, 2);
        assert!(u.unitarity_residual() < 1e-10);
        assert!(verify_dilation(&u, &spec, 20).unwrap() < 1e-9);
    }

    #[test]
    fn boundary_sio_dilation_with_phases_round_trips() {
        // N = 3, ε = 0.3: moduli pinned to |1+α| = 0.7, |γ| = 0.15, and the
        // coherence weights carry a consistent phase profile φ = (0, 0.4, -0.9).
        let n = 3;
        let eps = 0.3;
        let phis = [0.0, 0.4, -0.9];
        let mut entries = ComplexMatrix::zeros(n, n);
        for mu in 0..n {
            for nu in 0..n {
                if mu != nu {
                    entries[(mu, nu)] =
                        Complex64::from_polar(1.0 - eps, phis[mu] - phis[nu]) - Complex64::ONE;
                }
            }
        }
        let alpha = AlphaMatrix::from_matrix(entries).unwrap();
        let gamma = Complex64::from_polar(eps / (n as f64 - 1.0), 0.3);
        let spec = ChannelSpec::faulty(alpha, eps, gamma).unwrap();
        assert!(is_cptp(&spec).cptp);
        let u = build_sio_dilation(&spec).unwrap();
        assert_eq!(u.ancilla_dim, 1 + 3);
        assert!(u.unitarity_residual() < 1e-10);
        assert!(verify_dilation(&u, &spec, 20).unwrap() < 1e-9);
    }

    #[test]
    fn interior_channels_are_rejected_with_a_diagnostic() {
        // ε = 0.2 but 1+α = 0.5: strictly inside the CPTP region, no swap
        // construction exists.
        let alpha = AlphaMatrix::uniform(2, -0.5).unwrap();
        let spec = ChannelSpec::faulty(alpha, 0.2, cr(0.2)).unwrap();
        assert!(is_cptp(&spec).cptp);
        match build_sio_dilation(&spec) {
            Err(Error::ConstraintInfeasible { context, violation }) => {
                assert!(context.contains("identity-permutation"));
                assert!((violation - 0.3).abs() < 1e-12);
            }
            other => panic!("expected ConstraintInfeasible, got {other:?}"),
        }
        // γ strictly inside |γ| < ε/(N-1) is equally infeasible.
        let alpha = AlphaMatrix::uniform(2, -0.2).unwrap();
        let spec = ChannelSpec::faulty(alpha, 0.2, cr(0.05)).unwrap();
        match build_sio_dilation(&spec) {
            Err(Error::ConstraintInfeasible { context, .. }) => {
                assert!(context.contains("|γ|"));
            }
            other => panic!("expected ConstraintInfeasible, got {other:?}"),
        }
        // The generic builder picks up the slack.
        let kraus = kraus_from_choi(&choi(&spec)).unwrap();
        let u = build_generic_dilation(&kraus).unwrap();
        assert!(verify_dilation(&u, &spec, 20).unwrap() < 1e-9);
    }

    #[test]
    fn phase_only_faulty_spec_reduces_to_the_identity_permutation() {
        // ε = 0, γ = 0, |1+α| = 1: only the k = 0 weights survive.
        let mut entries = ComplexMatrix::zeros(2, 2);
        entries[(0, 1)] = Complex64::from_polar(1.0, 0.7) - Complex64::ONE;
        entries[(1, 0)] = entries[(0, 1)].conj();
        let alpha = AlphaMatrix::from_matrix(entries).unwrap();
        let spec = ChannelSpec::faulty(alpha, 0.0, Complex64::ZERO).unwrap();
        assert!(is_cptp(&spec).cptp);
        let u = build_sio_dilation(&spec).unwrap();
        assert!(u.unitarity_residual() < 1e-10);
        assert!(verify_dilation(&u, &spec, 10).unwrap() < 1e-9);
    }

    #[test]
    fn generic_dilation_of_a_unitary_kraus_is_that_unitary() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_rows(&[vec![cr(s), cr(s)], vec![cr(s), cr(-s)]]).unwrap();
        let kraus = KrausSet::new(2, vec![h.clone()]).unwrap();
        let u = build_generic_dilation(&kraus).unwrap();
        assert_eq!(u.ancilla_dim, 1);
        assert!(u.matrix.max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn generic_dilation_round_trips_for_all_families() {
        let alpha = AlphaMatrix::uniform(3, -0.8).unwrap();
        let specs = [
            ChannelSpec::ideal(alpha.clone()),
            ChannelSpec::faulty(alpha.clone(), 0.25, c(0.04, 0.03)).unwrap(),
            ChannelSpec::faulty_shifted(alpha, 0.25, c(0.04, 0.0), c(0.03, 0.05)).unwrap(),
        ];
        for spec in &specs {
            let kraus = kraus_from_choi(&choi(spec)).unwrap();
            let u = build_generic_dilation(&kraus).unwrap();
            assert!(u.unitarity_residual() < 1e-9);
            assert!(
                verify_dilation(&u, spec, 20).unwrap() < 1e-9,
                "round trip failed for {:?}",
                spec.variant()
            );
        }
    }

    #[test]
    fn verification_flags_a_mismatched_channel() {
        let u = build_gio_dilation(&ideal_uniform(3, -0.5)).unwrap();
        let residual = verify_dilation(&u, &ideal_uniform(3, -0.9), 10).unwrap();
        assert!(residual > 0.05);
    }

    #[test]
    fn dilation_json_round_trips() {
        let u = build_gio_dilation(&ideal_uniform(2, -0.5)).unwrap();
        let text = serde_json::to_string(&u).unwrap();
        let back: DilationUnitary = serde_json::from_str(&text).unwrap();
        assert_eq!(back.system_dim, 2);
        assert_eq!(back.ancilla_dim, u.ancilla_dim);
        assert_eq!(back.ancilla_start_index, 0);
        assert!(back.matrix.max_abs_diff(&u.matrix) < 1e-15);
    }
}
