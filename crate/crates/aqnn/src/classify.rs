//! Membership checks and certificates for the incoherent-operation hierarchy
//! MIO ⊇ IO ⊇ SIO ⊇ GIO, plus the coherence-activation test.
//!
//! The MIO, GIO, and activation checks evaluate the channel on the matrix-unit
//! basis, which by linearity decides the property exactly (up to floating
//! point) and independently of any Kraus representation. IO and SIO membership
//! is *certified* instead: a Kraus set whose operators have the right sparsity
//! pattern proves membership, while a failed search over remixed
//! decompositions proves nothing and is reported as "no certificate found".

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::channels::{choi_of, kraus_from_choi, KrausSet, QuantumChannel};
use crate::error::Result;
use crate::linalg::ComplexMatrix;

/// Moduli at or below this threshold count as structural zeros in every
/// classification decision.
pub const CLASSIFICATION_TOL: f64 = 1e-10;
/// Default number of remix candidates tried by the certificate search.
pub const DEFAULT_SEARCH_BUDGET: usize = 10_000;

/// Which sparsity pattern certifies membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateMode {
    /// Incoherent operations: at most one nonzero entry per column.
    Io,
    /// Strictly incoherent operations: at most one nonzero entry per column
    /// and per row.
    Sio,
}

/// Classification verdicts and certificates for one channel.
///
/// `residuals` maps each check to the witness magnitude it measured (the
/// largest offending modulus, or the distance to the required fixed point),
/// so a verdict can be audited without rerunning the check.
#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub is_ncg: bool,
    pub is_gio: bool,
    pub sio_certificate: Option<KrausSet>,
    pub io_certificate: Option<KrausSet>,
    pub activates_coherence: bool,
    pub residuals: BTreeMap<String, f64>,
}

/// Non-coherence-generating (MIO) check: every basis projector must map to a
/// diagonal state. Returns the verdict and the largest off-diagonal modulus.
pub fn check_mio<C: QuantumChannel>(channel: &C) -> Result<(bool, f64)> {
    channel.require_cptp()?;
    let n = channel.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        let image = image_of_unit(channel, i, i);
        for r in 0..n {
            for s in 0..n {
                if r != s {
                    worst = worst.max(image[(r, s)].norm());
                }
            }
        }
    }
    Ok((worst <= CLASSIFICATION_TOL, worst))
}

/// Genuinely-incoherent check: every basis projector must be an exact fixed
/// point. Returns the verdict and the largest deviation.
pub fn check_gio<C: QuantumChannel>(channel: &C) -> Result<(bool, f64)> {
    channel.require_cptp()?;
    let n = channel.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        let mut unit = ComplexMatrix::zeros(n, n);
        unit[(i, i)] = Complex64::ONE;
        let image = channel.apply_linear(&unit);
        worst = worst.max(image.max_abs_diff(&unit));
    }
    Ok((worst <= CLASSIFICATION_TOL, worst))
}

/// Coherence-activation check: the channel activates coherence when some
/// off-diagonal matrix unit acquires diagonal (population) weight. Returns
/// the verdict and the largest diagonal modulus found.
pub fn check_activation<C: QuantumChannel>(channel: &C) -> Result<(bool, f64)> {
    channel.require_cptp()?;
    let n = channel.dim();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let image = image_of_unit(channel, i, j);
            for r in 0..n {
                worst = worst.max(image[(r, r)].norm());
            }
        }
    }
    Ok((worst > CLASSIFICATION_TOL, worst))
}

fn image_of_unit<C: QuantumChannel>(channel: &C, i: usize, j: usize) -> ComplexMatrix {
    let n = channel.dim();
    let mut unit = ComplexMatrix::zeros(n, n);
    unit[(i, j)] = Complex64::ONE;
    channel.apply_linear(&unit)
}

/// Structural SIO certificate check: every operator must carry at most one
/// nonzero entry per row and per column (a generalized permutation pattern).
pub fn sio_structural_check(kraus: &KrausSet) -> bool {
    pattern_violation(kraus, CertificateMode::Sio) <= CLASSIFICATION_TOL
}

/// Structural IO certificate check: at most one nonzero entry per column.
pub fn io_structural_check(kraus: &KrausSet) -> bool {
    pattern_violation(kraus, CertificateMode::Io) <= CLASSIFICATION_TOL
}

/// Largest modulus that violates the mode's sparsity pattern: in each line
/// (column, and row for SIO) every entry but the largest counts as a
/// violation.
pub fn pattern_violation(kraus: &KrausSet, mode: CertificateMode) -> f64 {
    let n = kraus.dim();
    let mut worst = 0.0f64;
    for op in kraus.operators() {
        for col in 0..n {
            worst = worst.max(second_largest((0..n).map(|row| op[(row, col)].norm())));
        }
        if mode == CertificateMode::Sio {
            for row in 0..n {
                worst = worst.max(second_largest((0..n).map(|col| op[(row, col)].norm())));
            }
        }
    }
    worst
}

fn second_largest(values: impl Iterator<Item = f64>) -> f64 {
    let (mut best, mut second) = (0.0f64, 0.0f64);
    for v in values {
        if v > best {
            second = best;
            best = v;
        } else if v > second {
            second = v;
        }
    }
    second
}

/// Sum of squared pattern-violating moduli — the smooth objective the remix
/// search minimizes.
fn pattern_objective(operators: &[ComplexMatrix], mode: CertificateMode) -> f64 {
    let mut total = 0.0;
    for op in operators {
        let n = op.rows();
        for col in 0..n {
            total += line_excess((0..n).map(|row| op[(row, col)].norm_sqr()));
        }
        if mode == CertificateMode::Sio {
            for row in 0..n {
                total += line_excess((0..n).map(|col| op[(row, col)].norm_sqr()));
            }
        }
    }
    total
}

fn line_excess(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut best = 0.0f64;
    for v in values {
        sum += v;
        best = best.max(v);
    }
    sum - best
}

/// Searches for a Kraus decomposition of the given channel whose operators
/// pass the mode's structural check.
///
/// The candidates are, in order: the input set itself, the canonical set from
/// the Choi eigendecomposition, and `budget` random unitary remixes
/// `K'_β = Σ_α V_{βα} K_α` of the canonical set (each polished by pairwise
/// rotations when it comes close). Every decomposition produced this way
/// represents the same channel, so a hit is a proof of membership; exhausting
/// the budget proves nothing.
pub fn search_incoherent_decomposition(
    kraus: &KrausSet,
    mode: CertificateMode,
    budget: usize,
    seed: u64,
) -> Option<KrausSet> {
    let passes = |k: &KrausSet| pattern_violation(k, mode) <= CLASSIFICATION_TOL;
    if passes(kraus) {
        return Some(kraus.clone());
    }

    let canonical = canonical_kraus_scrubbed(kraus)?;
    if passes(&canonical) {
        return Some(canonical);
    }

    let m = canonical.len();
    let dim = canonical.dim();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<ComplexMatrix>)> = None;
    for _ in 0..budget {
        let v = random_unitary(m, &mut rng);
        let remixed = remix(canonical.operators(), &v);
        let mut objective = pattern_objective(&remixed, mode);
        let polished = if objective < 1e-2 {
            let (ops, obj) = polish_by_rotations(remixed, mode);
            objective = obj;
            ops
        } else {
            remixed
        };
        if objective <= CLASSIFICATION_TOL * CLASSIFICATION_TOL {
            let candidate = KrausSet::new(dim, polished.clone()).ok()?;
            if passes(&candidate) {
                return Some(candidate);
            }
        }
        if best.as_ref().is_none_or(|(b, _)| objective < *b) {
            best = Some((objective, polished));
        }
    }

    // Last chance: polish the best candidate seen and re-test.
    if let Some((_, ops)) = best {
        let (ops, _) = polish_by_rotations(ops, mode);
        let candidate = KrausSet::new(dim, ops).ok()?;
        if passes(&candidate) {
            return Some(candidate);
        }
    }
    None
}

/// Canonical Kraus set of the channel, with sub-noise Choi entries snapped to
/// exact zeros first.
///
/// The snap matters under degeneracy: when the Choi matrix decomposes into
/// decoupled blocks sharing an eigenvalue, the eigensolver keeps eigenvectors
/// inside blocks only if the cross-block couplings are exactly zero. A Choi
/// matrix reassembled from an arbitrary Kraus presentation carries ~1e-15
/// round-off there, which would let degenerate eigenvectors rotate across
/// blocks and destroy the sparsity pattern the search is looking for.
fn canonical_kraus_scrubbed(kraus: &KrausSet) -> Option<KrausSet> {
    let j = choi_of(kraus);
    let n2 = j.matrix().rows();
    let threshold = 1e-12 * j.matrix().max_abs_entry().max(1.0);
    let snapped = ComplexMatrix::from_fn(n2, n2, |r, c| {
        let v = j.matrix()[(r, c)];
        if v.norm() <= threshold {
            Complex64::ZERO
        } else {
            v
        }
    });
    let choi = crate::channels::ChoiState::new(j.dim_in(), snapped).ok()?;
    kraus_from_choi(&choi).ok()
}

fn remix(operators: &[ComplexMatrix], v: &ComplexMatrix) -> Vec<ComplexMatrix> {
    let m = operators.len();
    let dim = operators[0].rows();
    (0..m)
        .map(|beta| {
            let mut out = ComplexMatrix::zeros(dim, dim);
            for (alpha, op) in operators.iter().enumerate() {
                let w = v[(beta, alpha)];
                if w != Complex64::ZERO {
                    out = out.add(&op.scale(w));
                }
            }
            out
        })
        .collect()
}

/// Coordinate descent over two-operator rotations: for each operator pair,
/// try a small grid of complex Givens angles and keep any strict improvement.
fn polish_by_rotations(
    mut operators: Vec<ComplexMatrix>,
    mode: CertificateMode,
) -> (Vec<ComplexMatrix>, f64) {
    let angle_grid: Vec<f64> = (1..8).map(|k| k as f64 * std::f64::consts::PI / 8.0).collect();
    let phase_grid = [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI];
    let mut objective = pattern_objective(&operators, mode);
    for _ in 0..2 {
        let m = operators.len();
        for a in 0..m {
            for b in (a + 1)..m {
                for &theta in &angle_grid {
                    for &phi in &phase_grid {
                        let (c, s) = (theta.cos(), theta.sin());
                        let u = Complex64::from_polar(s, phi);
                        let ka = operators[a].scale(Complex64::new(c, 0.0)).add(&operators[b].scale(u));
                        let kb = operators[b]
                            .scale(Complex64::new(c, 0.0))
                            .sub(&operators[a].scale(u.conj()));
                        let trial = pattern_objective(&[ka.clone(), kb.clone()], mode)
                            + objective
                            - pattern_objective(&[operators[a].clone(), operators[b].clone()], mode);
                        if trial < objective - 1e-18 {
                            operators[a] = ka;
                            operators[b] = kb;
                            objective = trial;
                        }
                    }
                }
            }
        }
    }
    (operators, objective)
}

/// Haar-style random unitary from Gram–Schmidt on a Gaussian matrix.
fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    use rand_distr::StandardNormal;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        for prev in &cols {
            let overlap: Complex64 = prev.iter().zip(&v).map(|(p, x)| p.conj() * x).sum();
            for (x, p) in v.iter_mut().zip(prev) {
                *x -= overlap * p;
            }
        }
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        // A Gaussian column is almost surely independent of the previous ones.
        for x in v.iter_mut() {
            *x /= norm;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Runs the whole classification battery with default search parameters.
pub fn classify_channel<C: QuantumChannel>(channel: &C) -> Result<ClassReport> {
    classify_channel_with(channel, DEFAULT_SEARCH_BUDGET, 0)
}

/// Runs the whole classification battery.
///
/// `search_budget` and `seed` steer only the IO/SIO certificate search; the
/// MIO, GIO, and activation verdicts are deterministic channel evaluations.
pub fn classify_channel_with<C: QuantumChannel>(
    channel: &C,
    search_budget: usize,
    seed: u64,
) -> Result<ClassReport> {
    channel.require_cptp()?;
    let (is_ncg, mio_residual) = check_mio(channel)?;
    let (is_gio, gio_residual) = check_gio(channel)?;
    let (activates_coherence, activation_residual) = check_activation(channel)?;

    let canonical = kraus_from_choi(&choi_of(channel))?;
    let sio_residual = pattern_violation(&canonical, CertificateMode::Sio);
    let io_residual = pattern_violation(&canonical, CertificateMode::Io);

    let sio_certificate =
        search_incoherent_decomposition(&canonical, CertificateMode::Sio, search_budget, seed);
    let io_certificate = match &sio_certificate {
        // Any SIO certificate doubles as an IO certificate.
        Some(cert) => Some(cert.clone()),
        None => search_incoherent_decomposition(
            &canonical,
            CertificateMode::Io,
            search_budget,
            seed.wrapping_add(1),
        ),
    };

    let mut residuals = BTreeMap::new();
    residuals.insert("mio_offdiagonal".to_string(), mio_residual);
    residuals.insert("gio_fixed_point".to_string(), gio_residual);
    residuals.insert("activation_diagonal".to_string(), activation_residual);
    residuals.insert("sio_canonical_pattern".to_string(), sio_residual);
    residuals.insert("io_canonical_pattern".to_string(), io_residual);
    residuals.insert(
        "kraus_completeness".to_string(),
        canonical.completeness_residual(),
    );

    Ok(ClassReport {
        is_ncg,
        is_gio,
        sio_certificate,
        io_certificate,
        activates_coherence,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{choi, is_cptp, AlphaMatrix, ChannelSpec};
    use crate::error::Error;
    use crate::testutil::{c, cr};

    /// Measurement in the |±⟩ basis followed by basis-state preparation:
    /// K₁ = |0⟩⟨+|, K₂ = |1⟩⟨−|. Maximally incoherent (diagonal images of
    /// projectors) yet it routes coherence into populations.
    fn measure_plus_minus() -> KrausSet {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let k1 =
            ComplexMatrix::from_rows(&[vec![cr(s), cr(s)], vec![cr(0.0), cr(0.0)]]).unwrap();
        let k2 =
            ComplexMatrix::from_rows(&[vec![cr(0.0), cr(0.0)], vec![cr(s), cr(-s)]]).unwrap();
        KrausSet::new(2, vec![k1, k2]).unwrap()
    }

    fn hadamard_channel() -> KrausSet {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_rows(&[vec![cr(s), cr(s)], vec![cr(s), cr(-s)]]).unwrap();
        KrausSet::new(2, vec![h]).unwrap()
    }

    fn dephasing_channel(n: usize) -> KrausSet {
        let ops = (0..n)
            .map(|i| {
                let mut m = ComplexMatrix::zeros(n, n);
                m[(i, i)] = Complex64::ONE;
                m
            })
            .collect();
        KrausSet::new(n, ops).unwrap()
    }

    #[test]
    fn ideal_channels_are_genuinely_incoherent() {
        let spec = ChannelSpec::ideal(AlphaMatrix::uniform(3, -0.6).unwrap());
        let (mio, _) = check_mio(&spec).unwrap();
        let (gio, gio_res) = check_gio(&spec).unwrap();
        let (activates, _) = check_activation(&spec).unwrap();
        assert!(mio);
        assert!(gio);
        assert!(gio_res < 1e-14);
        assert!(!activates);
    }

    #[test]
    fn faulty_channels_stay_mio_but_lose_gio() {
        let alpha = AlphaMatrix::uniform(3, -0.8).unwrap();
        let spec = ChannelSpec::faulty(alpha, 0.3, c(0.05, 0.02)).unwrap();
        assert!(is_cptp(&spec).cptp);
        let (mio, _) = check_mio(&spec).unwrap();
        let (gio, gio_res) = check_gio(&spec).unwrap();
        let (activates, _) = check_activation(&spec).unwrap();
        assert!(mio);
        assert!(!gio);
        assert!(gio_res > 0.1); // ε visibly disturbs the fixed points
        assert!(!activates);
    }

    #[test]
    fn hadamard_generates_coherence() {
        let (mio, residual) = check_mio(&hadamard_channel()).unwrap();
        assert!(!mio);
        assert!(residual > 0.4);
    }

    #[test]
    fn dephasing_is_genuinely_incoherent() {
        let deph = dephasing_channel(3);
        let (gio, _) = check_gio(&deph).unwrap();
        assert!(gio);
        assert!(sio_structural_check(&deph));
    }

    #[test]
    fn measurement_channel_activates_coherence_but_is_mio() {
        let k = measure_plus_minus();
        let (mio, _) = check_mio(&k).unwrap();
        let (activates, witness) = check_activation(&k).unwrap();
        assert!(mio);
        assert!(activates);
        assert!((witness - 0.5).abs() < 1e-12); // ⟨+|0⟩⟨1|+⟩ routes half the mass
    }

    #[test]
    fn structural_checks_tell_io_and_sio_apart() {
        let k = measure_plus_minus();
        // Columns each hold one entry (IO pattern) but row 0 of K₁ holds two.
        assert!(io_structural_check(&k));
        assert!(!sio_structural_check(&k));

        let deph = dephasing_channel(2);
        assert!(io_structural_check(&deph));
        assert!(sio_structural_check(&deph));
    }

    #[test]
    fn canonical_kraus_of_the_gamma_family_is_sio() {
        let alpha = AlphaMatrix::uniform(3, -0.8).unwrap();
        let spec = ChannelSpec::faulty(alpha, 0.3, c(0.04, -0.03)).unwrap();
        let canonical = kraus_from_choi(&choi(&spec)).unwrap();
        assert!(sio_structural_check(&canonical));
    }

    #[test]
    fn canonical_kraus_of_the_shift_family_is_not_sio() {
        let alpha = AlphaMatrix::uniform(3, -1.0).unwrap();
        let spec = ChannelSpec::faulty_shifted(alpha, 0.3, cr(0.03), c(0.04, 0.02)).unwrap();
        assert!(is_cptp(&spec).cptp);
        let canonical = kraus_from_choi(&choi(&spec)).unwrap();
        assert!(!sio_structural_check(&canonical));
    }

    #[test]
    fn search_returns_certified_input_unchanged() {
        let deph = dephasing_channel(3);
        let found = search_incoherent_decomposition(&deph, CertificateMode::Sio, 10, 1).unwrap();
        assert_eq!(found.len(), deph.len());
        for (a, b) in found.operators().iter().zip(deph.operators()) {
            assert!(a.max_abs_diff(b) == 0.0);
        }
    }

    #[test]
    fn remixing_diagonal_kraus_sets_cannot_hide_genuine_incoherence() {
        // Linear combinations of diagonal operators stay diagonal, so a
        // genuinely incoherent channel is certified from any remixed basis.
        let spec = ChannelSpec::ideal(AlphaMatrix::uniform(3, -0.5).unwrap());
        let canonical = kraus_from_choi(&choi(&spec)).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        let v = random_unitary(canonical.len(), &mut rng);
        let scrambled = KrausSet::new(3, remix(canonical.operators(), &v)).unwrap();
        assert!(scrambled.completeness_residual() < 1e-12);
        assert!(sio_structural_check(&scrambled));
    }

    #[test]
    fn search_recovers_a_structured_decomposition_from_a_scrambled_one() {
        // A strictly incoherent channel handed over in a scrambled Kraus
        // basis: the remix blends the diagonal population operators into the
        // two-position pair operators, so the given set fails the structural
        // check, while the canonical decomposition of its Choi matrix
        // restores the pattern.
        let alpha = AlphaMatrix::uniform(3, -0.8).unwrap();
        let spec = ChannelSpec::faulty(alpha, 0.3, c(0.04, 0.01)).unwrap();
        let canonical = kraus_from_choi(&choi(&spec)).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        let v = random_unitary(canonical.len(), &mut rng);
        let scrambled = KrausSet::new(3, remix(canonical.operators(), &v)).unwrap();
        assert!(scrambled.completeness_residual() < 1e-12);
        assert!(!sio_structural_check(&scrambled));

        let found =
            search_incoherent_decomposition(&scrambled, CertificateMode::Sio, 10, 7).unwrap();
        assert!(sio_structural_check(&found));
        // Same channel throughout.
        let before = choi_of(&scrambled);
        let after = choi_of(&found);
        assert!(before.matrix().max_abs_diff(after.matrix()) < 1e-10);
    }

    #[test]
    fn search_fails_to_certify_the_activating_channel_as_sio() {
        // Activation is decomposition-independent and SIO channels cannot
        // activate, so no budget can ever find an SIO certificate here.
        let k = measure_plus_minus();
        assert!(search_incoherent_decomposition(&k, CertificateMode::Sio, 60, 5).is_none());
        // The IO certificate, in contrast, is the input itself.
        assert!(search_incoherent_decomposition(&k, CertificateMode::Io, 60, 5).is_some());
    }

    #[test]
    fn classification_report_for_the_three_families() {
        let alpha = AlphaMatrix::uniform(3, -1.0).unwrap();

        let ideal = ChannelSpec::ideal(alpha.clone());
        let report = classify_channel_with(&ideal, 50, 3).unwrap();
        assert!(report.is_ncg);
        assert!(report.is_gio);
        assert!(report.sio_certificate.is_some());
        assert!(report.io_certificate.is_some());
        assert!(!report.activates_coherence);

        let faulty = ChannelSpec::faulty(alpha.clone(), 0.3, cr(0.05)).unwrap();
        let report = classify_channel_with(&faulty, 50, 3).unwrap();
        assert!(report.is_ncg);
        assert!(!report.is_gio);
        assert!(report.sio_certificate.is_some());
        assert!(report.io_certificate.is_some());
        assert!(!report.activates_coherence);

        let shifted = ChannelSpec::faulty_shifted(alpha, 0.3, cr(0.03), c(0.03, 0.02)).unwrap();
        assert!(is_cptp(&shifted).cptp);
        let report = classify_channel_with(&shifted, 120, 3).unwrap();
        assert!(report.is_ncg);
        assert!(!report.is_gio);
        assert!(report.sio_certificate.is_none());
        assert!(!report.activates_coherence);
        assert!(report.residuals["sio_canonical_pattern"] > 1e-6);
    }

    #[test]
    fn hierarchy_chain_holds_on_certified_reports() {
        let alpha = AlphaMatrix::uniform(3, -0.7).unwrap();
        let specs = [
            ChannelSpec::ideal(alpha.clone()),
            ChannelSpec::faulty(alpha, 0.2, cr(0.02)).unwrap(),
        ];
        for spec in &specs {
            let report = classify_channel_with(spec, 50, 9).unwrap();
            if report.is_gio {
                assert!(report.sio_certificate.is_some());
            }
            if report.sio_certificate.is_some() {
                assert!(report.io_certificate.is_some());
            }
            if report.io_certificate.is_some() {
                assert!(report.is_ncg);
            }
            // Certificates must reproduce the channel they certify.
            for cert in [&report.sio_certificate, &report.io_certificate].into_iter().flatten() {
                let a = choi(spec);
                let b = choi_of(cert);
                assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn verdicts_are_decomposition_independent() {
        let alpha = AlphaMatrix::uniform(3, -0.9).unwrap();
        let spec = ChannelSpec::faulty(alpha, 0.25, c(0.03, 0.01)).unwrap();
        let canonical = kraus_from_choi(&choi(&spec)).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(44);
        let v = random_unitary(canonical.len(), &mut rng);
        let scrambled = KrausSet::new(3, remix(canonical.operators(), &v)).unwrap();

        let (mio_a, _) = check_mio(&spec).unwrap();
        let (mio_b, _) = check_mio(&scrambled).unwrap();
        assert_eq!(mio_a, mio_b);
        let (act_a, _) = check_activation(&spec).unwrap();
        let (act_b, _) = check_activation(&scrambled).unwrap();
        assert_eq!(act_a, act_b);
        let (gio_a, _) = check_gio(&spec).unwrap();
        let (gio_b, _) = check_gio(&scrambled).unwrap();
        assert_eq!(gio_a, gio_b);
    }

    #[test]
    fn classification_refuses_non_cptp_channels() {
        let spec = ChannelSpec::ideal(AlphaMatrix::uniform(2, 0.5).unwrap());
        assert!(matches!(classify_channel(&spec), Err(Error::NotCptp { .. })));
        assert!(matches!(check_mio(&spec), Err(Error::NotCptp { .. })));
    }

    #[test]
    fn report_serializes_with_certificates_inline() {
        let spec = ChannelSpec::faulty(
            AlphaMatrix::uniform(2, -0.9).unwrap(),
            0.2,
            cr(0.05),
        )
        .unwrap();
        let report = classify_channel_with(&spec, 50, 2).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["is_ncg"], serde_json::Value::Bool(true));
        assert!(value["sio_certificate"]["operators"].is_array());
        assert!(value["residuals"]["mio_offdiagonal"].is_number());
    }
}
