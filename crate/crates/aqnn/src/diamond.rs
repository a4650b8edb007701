//! Diamond distance between channels via a small semidefinite program on
//! Choi states, with an analytic fast path for diagonal differences and an
//! independent sampling lower bound.
//!
//! The program solved is
//!
//! ```text
//!     minimize    λ
//!     subject to  Z ⪰ J_E − J_F,    λ·1_in ⪰ Tr_out(Z),    Z ⪰ 0,
//! ```
//!
//! whose optimal value is the distance itself (the `½ max ‖…‖₁` convention
//! is absorbed by the program), so a population fault of strength `ε`
//! sits at distance exactly `ε` from its ideal counterpart.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_extended, choi, is_cptp, ChannelSpec};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, herm_eig, partial_trace, pd_inverse, ComplexMatrix, Keep};
use crate::states::{DensityMatrix, PureState};

/// Largest system dimension accepted by the interior-point path (the Choi
/// matrices are `dim² × dim²`).
pub const DIAMOND_DIM_LIMIT: usize = 6;
/// Off-diagonal mass below this threshold lets the analytic path run.
const DIAGONAL_TOL: f64 = 1e-12;
/// Barrier parameter schedule: geometric, factor 10, running at least down
/// to `BARRIER_END` and then further until the objective settles (the
/// per-decade central-path drift is itself of order μ·(2n+N), so the last
/// scheduled stage may still move λ by more than the convergence test
/// allows); `BARRIER_FLOOR` bounds the extension.
const BARRIER_START: f64 = 1.0;
const BARRIER_END: f64 = 1e-9;
const BARRIER_FLOOR: f64 = 1e-13;
/// Cap on Newton iterations per barrier stage.
const MAX_NEWTON_STEPS: usize = 50;
/// Feasibility slack allowed in the reported optimum.
const FEASIBILITY_TOL: f64 = 1e-8;

/// How a [`DiamondResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveMethod {
    /// Closed form for diagonal Choi differences.
    Analytic,
    /// Log-det barrier interior-point solver.
    InteriorPoint,
}

/// The data defining one distance computation: the Hermitian Choi
/// difference `J_E − J_F` and the system dimension.
#[derive(Debug, Clone)]
pub struct DiamondProgram {
    pub j_diff: ComplexMatrix,
    pub dim: usize,
}

/// Solution of the program: the optimal objective, the optimizer, and a
/// duality-gap estimate from the final barrier parameter.
#[derive(Debug, Clone)]
pub struct DiamondResult {
    pub value: f64,
    pub z_opt: ComplexMatrix,
    pub lambda_opt: f64,
    pub dual_gap_estimate: f64,
    pub method: SolveMethod,
}

impl DiamondProgram {
    /// Builds the program from two channels of equal dimension.
    pub fn from_specs(spec_a: &ChannelSpec, spec_b: &ChannelSpec) -> Result<Self> {
        if spec_a.dim() != spec_b.dim() {
            return Err(Error::DimensionMismatch {
                context: "diamond distance needs channels of equal dimension",
                got: spec_b.dim(),
                expected: spec_a.dim(),
            });
        }
        let j_diff = choi(spec_a).matrix().sub(choi(spec_b).matrix());
        let herm = j_diff.hermiticity_deviation();
        if herm > 1e-12 {
            return Err(Error::NonHermitianInput { deviation: herm });
        }
        let tr = j_diff.trace();
        if tr.norm() > 1e-10 {
            return Err(Error::InvalidState {
                context: "Choi difference of trace-preserving channels must be traceless",
                residual: tr.norm(),
            });
        }
        Ok(Self { j_diff, dim: spec_a.dim() })
    }

    /// Constraint violations of a candidate `(Z, λ)`: the most negative
    /// eigenvalue (clamped to 0) of `Z − J_diff`, `λ·1 − Tr_out(Z)`, and `Z`.
    pub fn feasibility_violations(&self, z: &ComplexMatrix, lambda: f64) -> Result<[f64; 3]> {
        let n = self.dim;
        let s1 = z.sub(&self.j_diff);
        let s2 = ComplexMatrix::identity(n)
            .scale(Complex64::new(lambda, 0.0))
            .sub(&partial_trace(z, (n, n), Keep::First)?);
        let mut out = [0.0f64; 3];
        for (slot, s) in [(0, &s1), (1, &s2), (2, z)] {
            let eig = herm_eig(s)?;
            out[slot] = (-eig.eigenvalues.last().copied().unwrap_or(0.0)).max(0.0);
        }
        Ok(out)
    }
}

fn require_cptp_pair(spec_a: &ChannelSpec, spec_b: &ChannelSpec) -> Result<()> {
    for spec in [spec_a, spec_b] {
        let verdict = is_cptp(spec);
        if !verdict.cptp {
            return Err(Error::NotCptp {
                min_choi_eigenvalue: verdict.min_choi_eigenvalue,
                tp_residual: verdict.tp_residual,
            });
        }
    }
    Ok(())
}

/// Diamond distance between two channels.
///
/// Takes the closed-form path when the Choi difference is diagonal (the
/// population-fault family with `γ = 0`), otherwise runs the interior-point
/// solver, which is limited to `dim ≤ DIAMOND_DIM_LIMIT`.
pub fn diamond_distance(spec_a: &ChannelSpec, spec_b: &ChannelSpec) -> Result<DiamondResult> {
    require_cptp_pair(spec_a, spec_b)?;
    let program = DiamondProgram::from_specs(spec_a, spec_b)?;
    if let Some(result) = analytic_from_program(&program) {
        return Ok(result);
    }
    if program.dim > DIAMOND_DIM_LIMIT {
        return Err(Error::DimensionTooLarge { dim: program.dim, limit: DIAMOND_DIM_LIMIT });
    }
    interior_point(&program)
}

/// Closed form for diagonal Choi differences; `None` when the difference
/// has off-diagonal content and the solver is needed.
pub fn diamond_analytic_diagonal(
    spec_a: &ChannelSpec,
    spec_b: &ChannelSpec,
) -> Option<DiamondResult> {
    if spec_a.dim() != spec_b.dim() {
        return None;
    }
    let program = DiamondProgram::from_specs(spec_a, spec_b).ok()?;
    analytic_from_program(&program)
}

/// Interior-point solve regardless of structure (used to cross-check the
/// analytic path and by the CLI's explicit method selection).
pub fn diamond_interior_point(
    spec_a: &ChannelSpec,
    spec_b: &ChannelSpec,
) -> Result<DiamondResult> {
    require_cptp_pair(spec_a, spec_b)?;
    let program = DiamondProgram::from_specs(spec_a, spec_b)?;
    if program.dim > DIAMOND_DIM_LIMIT {
        return Err(Error::DimensionTooLarge { dim: program.dim, limit: DIAMOND_DIM_LIMIT });
    }
    interior_point(&program)
}

fn analytic_from_program(program: &DiamondProgram) -> Option<DiamondResult> {
    let d = &program.j_diff;
    let n2 = d.rows();
    let mut off = 0.0f64;
    for r in 0..n2 {
        for c in 0..n2 {
            if r != c {
                off = off.max(d[(r, c)].norm());
            }
        }
    }
    if off > DIAGONAL_TOL {
        return None;
    }
    // With a diagonal difference the program may be restricted to diagonal Z
    // (pinching preserves feasibility), where it separates: z_ii = max(d_ii, 0)
    // and λ = the largest per-input-block column sum.
    let mut z = ComplexMatrix::zeros(n2, n2);
    let n = program.dim;
    let mut lambda = 0.0f64;
    for mu in 0..n {
        let mut block = 0.0;
        for r in 0..n {
            let idx = mu * n + r;
            let zi = d[(idx, idx)].re.max(0.0);
            z[(idx, idx)] = Complex64::new(zi, 0.0);
            block += zi;
        }
        lambda = lambda.max(block);
    }
    Some(DiamondResult {
        value: lambda,
        z_opt: z,
        lambda_opt: lambda,
        dual_gap_estimate: 0.0,
        method: SolveMethod::Analytic,
    })
}

/// Sampling lower bound: `½ max ‖(Λ_E ⊗ id − Λ_F ⊗ id)(ψ)‖₁` over the
/// maximally entangled state, the basis products, and `trials` random pure
/// states on the doubled space.
pub fn diamond_lower_bound(
    spec_a: &ChannelSpec,
    spec_b: &ChannelSpec,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if spec_a.dim() != spec_b.dim() {
        return Err(Error::DimensionMismatch {
            context: "diamond distance needs channels of equal dimension",
            got: spec_b.dim(),
            expected: spec_a.dim(),
        });
    }
    let n = spec_a.dim();
    let mut candidates: Vec<Vec<Complex64>> = Vec::new();
    // Maximally entangled probe: optimal for diagonal Choi differences.
    let scale = 1.0 / (n as f64).sqrt();
    let mut phi = vec![Complex64::ZERO; n * n];
    for mu in 0..n {
        phi[mu * n + mu] = Complex64::new(scale, 0.0);
    }
    candidates.push(phi);
    // Unentangled basis probes.
    for mu in 0..n {
        let mut e = vec![Complex64::ZERO; n * n];
        e[mu * n] = Complex64::ONE;
        candidates.push(e);
    }
    use rand::SeedableRng;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..trials {
        candidates.push(random_unit(n * n, &mut rng));
    }
    let mut best = 0.0f64;
    for amplitudes in candidates {
        let rho = DensityMatrix::from_pure(&PureState::new(amplitudes)?);
        let out_a = apply_extended(spec_a, &rho, (n, n))?;
        let out_b = apply_extended(spec_b, &rho, (n, n))?;
        let dist = crate::linalg::trace_norm(&out_a.matrix().sub(out_b.matrix()))?;
        best = best.max(0.5 * dist);
    }
    Ok(best)
}

fn random_unit<R: Rng>(n: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

// ---------------------------------------------------------------------------
// Interior-point solver.
//
// The Hermitian variable Z is parameterized over the orthonormal basis
// {E_ii} ∪ {(E_ij + E_ji)/√2} ∪ {i(E_ij − E_ji)/√2}, giving n² real
// coordinates plus one for λ. Each barrier stage minimizes
//     f_μ(Z, λ) = λ − μ·[log det S₁ + log det S₂ + log det S₃]
// with S₁ = Z − J_diff, S₂ = λ·1 − Tr_out(Z), S₃ = Z, by damped Newton
// steps. Every basis element touches at most two matrix entries, so each
// Hessian entry tr(W·A_i·W·A_j) costs O(1) given the inverses W.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq)]
enum ElemKind {
    Diag,
    Sym,
    Anti,
}

#[derive(Clone, Copy)]
struct BasisElem {
    kind: ElemKind,
    a: usize,
    b: usize,
    /// Index pair of the nonzero partial trace `Tr_out(H)`, present exactly
    /// when the element's two composite indices share the output index.
    traced: Option<(usize, usize)>,
}

impl BasisElem {
    /// The at-most-two nonzero entries `(row, col, value)` of the element.
    fn entries(&self) -> [(usize, usize, Complex64); 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self.kind {
            ElemKind::Diag => [
                (self.a, self.a, Complex64::ONE),
                (self.a, self.a, Complex64::ZERO),
            ],
            ElemKind::Sym => [
                (self.a, self.b, Complex64::new(s, 0.0)),
                (self.b, self.a, Complex64::new(s, 0.0)),
            ],
            ElemKind::Anti => [
                (self.a, self.b, Complex64::new(0.0, -s)),
                (self.b, self.a, Complex64::new(0.0, s)),
            ],
        }
    }

    /// Entries of `Tr_out(H)`, which inherits the element's kind.
    fn traced_entries(&self) -> Option<[(usize, usize, Complex64); 2]> {
        let (mu, nu) = self.traced?;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Some(match self.kind {
            ElemKind::Diag => [
                (mu, mu, Complex64::ONE),
                (mu, mu, Complex64::ZERO),
            ],
            ElemKind::Sym => [
                (mu, nu, Complex64::new(s, 0.0)),
                (nu, mu, Complex64::new(s, 0.0)),
            ],
            ElemKind::Anti => [
                (mu, nu, Complex64::new(0.0, -s)),
                (nu, mu, Complex64::new(0.0, s)),
            ],
        })
    }
}

fn hermitian_basis(n2: usize, n: usize) -> Vec<BasisElem> {
    let traced_pair = |a: usize, b: usize| -> Option<(usize, usize)> {
        // Composite index = input·N + output; the partial trace keeps the
        // input factor and requires equal output indices.
        (a % n == b % n).then_some((a / n, b / n))
    };
    let mut basis = Vec::with_capacity(n2 * n2);
    for i in 0..n2 {
        basis.push(BasisElem { kind: ElemKind::Diag, a: i, b: i, traced: Some((i / n, i / n)) });
    }
    for i in 0..n2 {
        for j in (i + 1)..n2 {
            let traced = traced_pair(i, j);
            basis.push(BasisElem { kind: ElemKind::Sym, a: i, b: j, traced });
            basis.push(BasisElem { kind: ElemKind::Anti, a: i, b: j, traced });
        }
    }
    basis
}

/// `tr(W·H)` for a sparse element against a Hermitian `W` — real by symmetry.
fn sparse_trace(w: &ComplexMatrix, entries: &[(usize, usize, Complex64)]) -> f64 {
    let mut acc = Complex64::ZERO;
    for &(a, b, v) in entries {
        if v != Complex64::ZERO {
            acc += w[(b, a)] * v;
        }
    }
    acc.re
}

/// `tr(W·A·W·B)` for two sparse elements — `Σ v_a v_b W[b₂,a₁]·W[b₁,a₂]`.
fn sparse_quad(
    w: &ComplexMatrix,
    ea: &[(usize, usize, Complex64)],
    eb: &[(usize, usize, Complex64)],
) -> f64 {
    let mut acc = Complex64::ZERO;
    for &(a1, b1, u) in ea {
        if u == Complex64::ZERO {
            continue;
        }
        for &(a2, b2, v) in eb {
            if v == Complex64::ZERO {
                continue;
            }
            acc += u * v * w[(b2, a1)] * w[(b1, a2)];
        }
    }
    acc.re
}

struct IterateState {
    z: ComplexMatrix,
    lambda: f64,
}

impl IterateState {
    fn from_coords(coords: &[f64], lambda: f64, basis: &[BasisElem], n2: usize) -> Self {
        let mut z = ComplexMatrix::zeros(n2, n2);
        for (x, elem) in coords.iter().zip(basis) {
            if *x == 0.0 {
                continue;
            }
            for (a, b, v) in elem.entries() {
                if v != Complex64::ZERO {
                    z[(a, b)] += v * *x;
                }
            }
        }
        IterateState { z, lambda }
    }
}

/// Slack matrices of an iterate, or `None` if any fails to be positive
/// definite (used both for the barrier value and the line-search filter).
fn slacks(
    program: &DiamondProgram,
    state: &IterateState,
) -> Result<Option<(ComplexMatrix, ComplexMatrix, ComplexMatrix)>> {
    let n = program.dim;
    let s1 = state.z.sub(&program.j_diff);
    let s2 = ComplexMatrix::identity(n)
        .scale(Complex64::new(state.lambda, 0.0))
        .sub(&partial_trace(&state.z, (n, n), Keep::First)?);
    let s3 = state.z.clone();
    if cholesky(&s1).is_none() || cholesky(&s2).is_none() || cholesky(&s3).is_none() {
        return Ok(None);
    }
    Ok(Some((s1, s2, s3)))
}

fn log_det(m: &ComplexMatrix) -> Option<f64> {
    let l = cholesky(m)?;
    let mut acc = 0.0;
    for i in 0..l.rows() {
        acc += l[(i, i)].re.ln();
    }
    Some(2.0 * acc)
}

fn barrier_value(program: &DiamondProgram, state: &IterateState, mu: f64) -> Result<Option<f64>> {
    match slacks(program, state)? {
        None => Ok(None),
        Some((s1, s2, s3)) => {
            match (log_det(&s1), log_det(&s2), log_det(&s3)) {
                (Some(a), Some(b), Some(c)) => Ok(Some(state.lambda - mu * (a + b + c))),
                _ => Ok(None),
            }
        }
    }
}

/// Cholesky solve of a dense real SPD system (row-major), in place.
fn solve_real_spd(mut h: Vec<f64>, mut rhs: Vec<f64>, m: usize) -> Option<Vec<f64>> {
    for k in 0..m {
        let mut d = h[k * m + k];
        for p in 0..k {
            d -= h[k * m + p] * h[k * m + p];
        }
        if d <= 0.0 {
            return None;
        }
        let d = d.sqrt();
        h[k * m + k] = d;
        for r in (k + 1)..m {
            let mut v = h[r * m + k];
            for p in 0..k {
                v -= h[r * m + p] * h[k * m + p];
            }
            h[r * m + k] = v / d;
        }
    }
    for r in 0..m {
        let mut v = rhs[r];
        for p in 0..r {
            v -= h[r * m + p] * rhs[p];
        }
        rhs[r] = v / h[r * m + r];
    }
    for r in (0..m).rev() {
        let mut v = rhs[r];
        for p in (r + 1)..m {
            v -= h[p * m + r] * rhs[p];
        }
        rhs[r] = v / h[r * m + r];
    }
    Some(rhs)
}

fn interior_point(program: &DiamondProgram) -> Result<DiamondResult> {
    let n = program.dim;
    let n2 = n * n;
    let basis = hermitian_basis(n2, n);
    let m = basis.len() + 1; // coordinates of Z plus λ
    let lambda_slot = m - 1;

    // Strictly feasible start: Z₀ = c·1 with c above both the suggested
    // (‖J_diff‖₁ + 1)/n² and the top of J_diff's spectrum, λ₀ = 2·c·n.
    let eig = herm_eig(&program.j_diff)?;
    let top = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let trace_norm: f64 = eig.eigenvalues.iter().map(|e| e.abs()).sum();
    let mut c = (trace_norm + 1.0) / (n2 as f64);
    while c <= top + 1e-6 {
        c *= 2.0;
    }
    let mut coords = vec![0.0f64; basis.len()];
    for i in 0..n2 {
        coords[i] = c; // the first n² basis elements are the diagonal ones
    }
    let mut lambda = 2.0 * c * (n as f64);

    let mut mu = BARRIER_START;
    let mut lambda_prev_stage = f64::INFINITY;
    loop {
        for _ in 0..MAX_NEWTON_STEPS {
            let state = IterateState::from_coords(&coords, lambda, &basis, n2);
            let (s1, s2, s3) = slacks(program, &state)?.ok_or(Error::SolverDidNotConverge {
                context: "interior-point iterate left the feasible cone",
                residual: f64::NAN,
            })?;
            let lost_cone = || Error::SolverDidNotConverge {
                context: "interior-point iterate left the feasible cone",
                residual: f64::NAN,
            };
            let w1 = pd_inverse(&s1).ok_or_else(lost_cone)?;
            let w2 = pd_inverse(&s2).ok_or_else(lost_cone)?;
            let w3 = pd_inverse(&s3).ok_or_else(lost_cone)?;
            let w2_sq = w2.mul(&w2);

            let mut grad = vec![0.0f64; m];
            for (k, elem) in basis.iter().enumerate() {
                let e = elem.entries();
                let mut g = -mu * (sparse_trace(&w1, &e) + sparse_trace(&w3, &e));
                if let Some(t) = elem.traced_entries() {
                    g += mu * sparse_trace(&w2, &t);
                }
                grad[k] = g;
            }
            let tr_w2 = (0..n).map(|i| w2[(i, i)].re).sum::<f64>();
            grad[lambda_slot] = 1.0 - mu * tr_w2;

            let mut hess = vec![0.0f64; m * m];
            for i in 0..basis.len() {
                let ei = basis[i].entries();
                let ti = basis[i].traced_entries();
                for j in i..basis.len() {
                    let ej = basis[j].entries();
                    let mut v = sparse_quad(&w1, &ei, &ej) + sparse_quad(&w3, &ei, &ej);
                    if let (Some(a), Some(b)) = (ti, basis[j].traced_entries()) {
                        v += sparse_quad(&w2, &a, &b);
                    }
                    let v = mu * v;
                    hess[i * m + j] = v;
                    hess[j * m + i] = v;
                }
                // Mixed λ row: tr(W₂·1·W₂·(−Tr_out H_i)) = −tr(W₂²·Tr_out H_i).
                if let Some(t) = ti {
                    let v = -mu * sparse_trace(&w2_sq, &t);
                    hess[i * m + lambda_slot] = v;
                    hess[lambda_slot * m + i] = v;
                }
            }
            let fro_w2 = (0..n)
                .flat_map(|r| (0..n).map(move |c| (r, c)))
                .map(|(r, c)| w2[(r, c)].norm_sqr())
                .sum::<f64>();
            hess[lambda_slot * m + lambda_slot] = mu * fro_w2;

            let rhs: Vec<f64> = grad.iter().map(|g| -g).collect();
            let delta = solve_real_spd(hess, rhs, m).ok_or(Error::SolverDidNotConverge {
                context: "Newton system lost positive definiteness",
                residual: f64::NAN,
            })?;
            let decrement_sq: f64 = grad.iter().zip(&delta).map(|(g, d)| -g * d).sum();

            // Backtracking line search staying strictly inside the cone.
            let f0 = barrier_value(program, &state, mu)?.expect("current iterate is feasible");
            let slope: f64 = grad.iter().zip(&delta).map(|(g, d)| g * d).sum();
            let mut t = 1.0f64;
            let mut moved = false;
            while t > 1e-14 {
                let cand_coords: Vec<f64> =
                    coords.iter().zip(&delta).map(|(x, d)| x + t * d).collect();
                let cand_lambda = lambda + t * delta[lambda_slot];
                let cand = IterateState::from_coords(&cand_coords, cand_lambda, &basis, n2);
                if let Some(f) = barrier_value(program, &cand, mu)? {
                    if f <= f0 + 0.25 * t * slope {
                        coords = cand_coords;
                        lambda = cand_lambda;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved || decrement_sq.max(0.0) / 2.0 < 1e-13 {
                break;
            }
        }
        let stage_gap = (lambda - lambda_prev_stage).abs();
        lambda_prev_stage = lambda;
        if mu <= BARRIER_END * 1.0001 && stage_gap < 1e-8 {
            break;
        }
        if mu < BARRIER_FLOOR {
            return Err(Error::SolverDidNotConverge {
                context: "barrier stages stopped improving before the objective settled",
                residual: stage_gap,
            });
        }
        mu /= 10.0;
    }
    let state = IterateState::from_coords(&coords, lambda, &basis, n2);
    let violations = program.feasibility_violations(&state.z, lambda)?;
    let worst = violations.iter().fold(0.0f64, |a, &b| a.max(b));
    if worst > FEASIBILITY_TOL {
        return Err(Error::SolverDidNotConverge {
            context: "final iterate violates the program constraints",
            residual: worst,
        });
    }
    Ok(DiamondResult {
        value: lambda.max(0.0),
        z_opt: state.z,
        lambda_opt: lambda,
        dual_gap_estimate: mu * (2 * n2 + n) as f64,
        method: SolveMethod::InteriorPoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::AlphaMatrix;
    use crate::testutil::cr;

    fn ideal_uniform(dim: usize, a: f64) -> ChannelSpec {
        ChannelSpec::ideal(AlphaMatrix::uniform(dim, a).unwrap())
    }

    /// Ideal channel and its population-fault counterpart with γ = 0.
    fn fault_pair(dim: usize, eps: f64) -> (ChannelSpec, ChannelSpec) {
        let alpha = AlphaMatrix::uniform(dim, -0.5).unwrap();
        let ideal = ChannelSpec::ideal(alpha.clone());
        let faulty = ChannelSpec::faulty(alpha, eps, Complex64::ZERO).unwrap();
        (ideal, faulty)
    }

    #[test]
    fn fault_strength_is_recovered_analytically() {
        for n in [2, 3, 4, 7] {
            for eps in [0.0, 0.1, 0.5, 1.0] {
                let (ideal, faulty) = fault_pair(n, eps);
                let result = diamond_analytic_diagonal(&ideal, &faulty).unwrap();
                assert!(
                    (result.value - eps).abs() < 1e-12,
                    "N={n}, ε={eps}: got {}",
                    result.value
                );
                assert_eq!(result.method, SolveMethod::Analytic);
                let program = DiamondProgram::from_specs(&ideal, &faulty).unwrap();
                let violations =
                    program.feasibility_violations(&result.z_opt, result.lambda_opt).unwrap();
                assert!(violations.iter().all(|&v| v < 1e-12));
            }
        }
    }

    #[test]
    fn analytic_path_declines_offdiagonal_differences() {
        let a = ideal_uniform(2, -0.3);
        let b = ideal_uniform(2, -0.7);
        assert!(diamond_analytic_diagonal(&a, &b).is_none());
    }

    #[test]
    fn identical_channels_are_at_distance_zero() {
        let spec = ideal_uniform(3, -0.4);
        let result = diamond_distance(&spec, &spec).unwrap();
        assert!(result.value < 1e-7);
    }

    #[test]
    fn solver_recovers_the_fault_strength() {
        for (n, eps) in [(2, 0.25), (3, 0.5)] {
            let (ideal, faulty) = fault_pair(n, eps);
            let result = diamond_interior_point(&ideal, &faulty).unwrap();
            assert_eq!(result.method, SolveMethod::InteriorPoint);
            assert!(
                (result.value - eps).abs() < 1e-6,
                "N={n}, ε={eps}: got {}",
                result.value
            );
            let program = DiamondProgram::from_specs(&ideal, &faulty).unwrap();
            let violations =
                program.feasibility_violations(&result.z_opt, result.lambda_opt).unwrap();
            assert!(violations.iter().all(|&v| v <= 1e-7));
            assert!(result.dual_gap_estimate < 1e-6);
        }
    }

    #[test]
    fn solver_handles_a_four_level_instance() {
        let (ideal, faulty) = fault_pair(4, 0.1);
        let result = diamond_interior_point(&ideal, &faulty).unwrap();
        assert!((result.value - 0.1).abs() < 1e-6, "got {}", result.value);
    }

    #[test]
    fn distance_is_independent_of_the_mirror_weight() {
        for (n, gamma_mod) in [(2, 0.15), (3, 0.075)] {
            let eps = 0.3;
            let alpha = AlphaMatrix::uniform(n, -0.5).unwrap();
            let ideal = ChannelSpec::ideal(alpha.clone());
            let faulty =
                ChannelSpec::faulty(alpha, eps, Complex64::from_polar(gamma_mod, 0.6)).unwrap();
            let result = diamond_distance(&ideal, &faulty).unwrap();
            assert_eq!(result.method, SolveMethod::InteriorPoint);
            assert!(
                (result.value - eps).abs() < 1e-5,
                "N={n}, |γ|={gamma_mod}: got {}",
                result.value
            );
        }
    }

    #[test]
    fn identity_versus_full_dephasing_is_one_half() {
        let id = ideal_uniform(2, 0.0);
        let dephasing = ideal_uniform(2, -1.0);
        let result = diamond_distance(&id, &dephasing).unwrap();
        assert!((result.value - 0.5).abs() < 1e-5, "got {}", result.value);
    }

    #[test]
    fn sampling_bound_sandwiches_the_optimum() {
        let (ideal, faulty) = fault_pair(3, 0.4);
        let value = diamond_distance(&ideal, &faulty).unwrap().value;
        let bound = diamond_lower_bound(&ideal, &faulty, 20, 7).unwrap();
        assert!(bound <= value + 1e-7);
        // The maximally entangled probe attains ε for this family.
        assert!((bound - 0.4).abs() < 1e-9, "got {bound}");
    }

    #[test]
    fn lower_bound_vanishes_for_identical_channels() {
        let spec = ideal_uniform(2, -0.6);
        assert!(diamond_lower_bound(&spec, &spec, 10, 3).unwrap() < 1e-12);
    }

    #[test]
    fn distance_is_symmetric() {
        let a = ideal_uniform(2, -0.2);
        let b = ideal_uniform(2, -0.9);
        let ab = diamond_distance(&a, &b).unwrap().value;
        let ba = diamond_distance(&b, &a).unwrap().value;
        assert!((ab - ba).abs() < 1e-6);
    }

    #[test]
    fn distance_satisfies_the_triangle_inequality() {
        let a = ideal_uniform(2, -0.1);
        let b = ideal_uniform(2, -0.5);
        let c = ideal_uniform(2, -1.0);
        let ab = diamond_distance(&a, &b).unwrap().value;
        let bc = diamond_distance(&b, &c).unwrap().value;
        let ac = diamond_distance(&a, &c).unwrap().value;
        assert!(ac <= ab + bc + 1e-6);
    }

    #[test]
    fn coarse_trace_norm_bound_holds() {
        let alpha = AlphaMatrix::uniform(3, -0.8).unwrap();
        let ideal = ChannelSpec::ideal(alpha.clone());
        let faulty = ChannelSpec::faulty(alpha, 0.7, Complex64::ZERO).unwrap();
        let program = DiamondProgram::from_specs(&ideal, &faulty).unwrap();
        let upper = crate::linalg::trace_norm(&program.j_diff).unwrap();
        let value = diamond_distance(&ideal, &faulty).unwrap().value;
        assert!(value <= upper + 1e-6);
    }

    #[test]
    fn gates_reject_bad_inputs() {
        let good = ideal_uniform(2, -0.5);
        let non_cptp = ideal_uniform(2, 0.5);
        assert!(matches!(
            diamond_distance(&good, &non_cptp),
            Err(Error::NotCptp { .. })
        ));
        let other_dim = ideal_uniform(3, -0.5);
        assert!(matches!(
            diamond_distance(&good, &other_dim),
            Err(Error::DimensionMismatch { .. })
        ));
        let big_a = ideal_uniform(7, -0.3);
        let big_b = ideal_uniform(7, -0.6);
        assert!(matches!(
            diamond_distance(&big_a, &big_b),
            Err(Error::DimensionTooLarge { dim: 7, limit: 6 })
        ));
    }

    #[test]
    fn program_construction_checks_structure() {
        let (ideal, faulty) = fault_pair(2, 0.3);
        let program = DiamondProgram::from_specs(&ideal, &faulty).unwrap();
        assert!(program.j_diff.hermiticity_deviation() < 1e-12);
        assert!(program.j_diff.trace().norm() < 1e-10);
        assert_eq!(program.dim, 2);
    }

    #[test]
    fn analytic_and_solver_paths_agree() {
        let (ideal, faulty) = fault_pair(3, 0.35);
        let analytic = diamond_analytic_diagonal(&ideal, &faulty).unwrap();
        let solved = diamond_interior_point(&ideal, &faulty).unwrap();
        assert!((analytic.value - solved.value).abs() < 1e-6);
        assert!(cr(0.0).re <= solved.value); // value is clamped nonnegative
    }
}
