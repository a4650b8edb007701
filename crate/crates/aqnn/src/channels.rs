//! The attractor channel families, their Choi matrices, CPTP verdicts,
//! canonical Kraus decompositions, and channel application (plain, iterated,
//! and extended by an untouched bystander factor).
//!
//! All three families fix the populations' barycenter and act on coherences:
//!
//! * `Ideal` — populations are left untouched and each off-diagonal element
//!   is scaled by `1 + α_{μν}`.
//! * `FaultyEpsGamma` — populations additionally leak with strength `ε`
//!   (uniformly onto the other basis states) and each coherence picks up a
//!   mirrored `γ` contribution.
//! * `FaultyEpsGammaLambda` — adds a cyclic index-shift term with weight `λ`
//!   that forwards each coherence to the next basis pair (indices mod N).

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, partial_trace, ComplexMatrix, Keep};
use crate::states::DensityMatrix;

/// Eigenvalues of the Choi matrix below this threshold are dropped when
/// extracting Kraus operators.
pub const KRAUS_CUTOFF: f64 = 1e-10;
/// Complete positivity tolerance on the smallest Choi eigenvalue.
pub const CP_TOL: f64 = -1e-10;
/// Trace-preservation tolerance on `Tr_out(J) - 1`.
pub const TP_TOL: f64 = 1e-10;

/// Hermitian matrix of coherence weights `α_{μν}` with zero diagonal;
/// the channel scales the `(μ,ν)` coherence by `1 + α_{μν}`.
#[derive(Debug, Clone)]
pub struct AlphaMatrix {
    dim: usize,
    entries: ComplexMatrix,
    uniform: Option<f64>,
}

impl AlphaMatrix {
    /// All off-diagonal weights equal to the real number `a`.
    pub fn uniform(dim: usize, a: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::BadDimension { dim, context: "channels need dimension >= 2" });
        }
        let entries = ComplexMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                Complex64::ZERO
            } else {
                Complex64::new(a, 0.0)
            }
        });
        Ok(Self { dim, entries, uniform: Some(a) })
    }

    /// General weight matrix; must have zero diagonal and `α_{νμ} = conj(α_{μν})`.
    pub fn from_matrix(entries: ComplexMatrix) -> Result<Self> {
        let dim = entries.rows();
        if !entries.is_square() || dim < 2 {
            return Err(Error::BadDimension { dim, context: "alpha matrix must be square, dim >= 2" });
        }
        let dev = entries.hermiticity_deviation();
        if dev > 1e-12 {
            return Err(Error::NonHermitianInput { deviation: dev });
        }
        for i in 0..dim {
            if entries[(i, i)].norm() > 1e-14 {
                return Err(Error::InvalidState {
                    context: "alpha matrix must have zero diagonal",
                    residual: entries[(i, i)].norm(),
                });
            }
        }
        let uniform = detect_uniform(&entries);
        Ok(Self { dim, entries, uniform })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Weight `α_{μν}`; zero on the diagonal.
    pub fn get(&self, mu: usize, nu: usize) -> Complex64 {
        self.entries[(mu, nu)]
    }

    /// The shared real value if every off-diagonal weight is the same.
    pub fn as_uniform(&self) -> Option<f64> {
        self.uniform
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }
}

fn detect_uniform(entries: &ComplexMatrix) -> Option<f64> {
    let dim = entries.rows();
    let first = entries[(0, 1)];
    if first.im.abs() > 1e-12 {
        return None;
    }
    for i in 0..dim {
        for j in 0..dim {
            if i != j && (entries[(i, j)] - first).norm() > 1e-12 {
                return None;
            }
        }
    }
    Some(first.re)
}

/// Which channel family a [`ChannelSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChannelVariant {
    #[serde(rename = "ideal")]
    Ideal,
    #[serde(rename = "eps_gamma")]
    FaultyEpsGamma,
    #[serde(rename = "eps_gamma_lambda")]
    FaultyEpsGammaLambda,
}

impl ChannelVariant {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelVariant::Ideal => "ideal",
            ChannelVariant::FaultyEpsGamma => "eps_gamma",
            ChannelVariant::FaultyEpsGammaLambda => "eps_gamma_lambda",
        }
    }
}

/// Full parameterization of an attractor channel.
#[derive(Debug, Clone)]
pub struct ChannelSpec {
    dim: usize,
    variant: ChannelVariant,
    alpha: AlphaMatrix,
    epsilon: f64,
    gamma: Complex64,
    lambda_shift: Complex64,
    cptp_cache: OnceLock<CptpVerdict>,
}

impl ChannelSpec {
    /// Ideal channel: populations fixed, coherences scaled by `1 + α`.
    pub fn ideal(alpha: AlphaMatrix) -> Self {
        Self {
            dim: alpha.dim(),
            variant: ChannelVariant::Ideal,
            alpha,
            epsilon: 0.0,
            gamma: Complex64::ZERO,
            lambda_shift: Complex64::ZERO,
            cptp_cache: OnceLock::new(),
        }
    }

    /// Faulty channel with population leakage `ε` and mirrored coherence `γ`.
    pub fn faulty(alpha: AlphaMatrix, epsilon: f64, gamma: Complex64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            dim: alpha.dim(),
            variant: ChannelVariant::FaultyEpsGamma,
            alpha,
            epsilon,
            gamma,
            lambda_shift: Complex64::ZERO,
            cptp_cache: OnceLock::new(),
        })
    }

    /// Faulty channel with an additional cyclic coherence shift of weight `λ`.
    pub fn faulty_shifted(
        alpha: AlphaMatrix,
        epsilon: f64,
        gamma: Complex64,
        lambda_shift: Complex64,
    ) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            dim: alpha.dim(),
            variant: ChannelVariant::FaultyEpsGammaLambda,
            alpha,
            epsilon,
            gamma,
            lambda_shift,
            cptp_cache: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn variant(&self) -> ChannelVariant {
        self.variant
    }

    pub fn alpha(&self) -> &AlphaMatrix {
        &self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }

    pub fn lambda_shift(&self) -> Complex64 {
        self.lambda_shift
    }

    /// The channel as a plain linear map on arbitrary (not necessarily
    /// Hermitian) matrices. This is the single source of truth for the
    /// channel's action; everything else is built on it.
    pub fn apply_linear(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim;
        assert_eq!(m.rows(), n, "input matrix dimension mismatch");
        assert_eq!(m.cols(), n, "input matrix dimension mismatch");
        let mut out = ComplexMatrix::zeros(n, n);

        // Populations.
        match self.variant {
            ChannelVariant::Ideal => {
                for mu in 0..n {
                    out[(mu, mu)] = m[(mu, mu)];
                }
            }
            _ => {
                let total: Complex64 = (0..n).map(|nu| m[(nu, nu)]).sum();
                let keep = 1.0 - self.epsilon;
                let leak = self.epsilon / (n as f64 - 1.0);
                for mu in 0..n {
                    out[(mu, mu)] = m[(mu, mu)] * keep + (total - m[(mu, mu)]) * leak;
                }
            }
        }

        // Coherences.
        let faulty = self.variant != ChannelVariant::Ideal;
        let shifted = self.variant == ChannelVariant::FaultyEpsGammaLambda;
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let x = m[(a, b)];
                if x == Complex64::ZERO {
                    continue;
                }
                let scale = Complex64::ONE + self.alpha.get(a, b);
                out[(a, b)] += x * scale;
                if faulty {
                    // Upper-triangle coherences pick up γ on the mirrored
                    // position; lower-triangle ones pick up the conjugate.
                    let g = if a < b { self.gamma } else { self.gamma.conj() };
                    out[(b, a)] += x * g;
                }
                if shifted {
                    let l = if a < b {
                        self.lambda_shift
                    } else {
                        self.lambda_shift.conj()
                    };
                    out[((a + 1) % n, (b + 1) % n)] += x * l;
                }
            }
        }
        out
    }

    /// Sparse image of the matrix unit `|a⟩⟨b|` as `(position, coefficient)`
    /// pairs. Independent of [`Self::apply_linear`] so the two can be checked
    /// against each other.
    pub fn unit_action(&self, a: usize, b: usize) -> Vec<((usize, usize), Complex64)> {
        let n = self.dim;
        assert!(a < n && b < n);
        let mut terms = Vec::with_capacity(4);
        if a == b {
            match self.variant {
                ChannelVariant::Ideal => terms.push(((a, a), Complex64::ONE)),
                _ => {
                    terms.push(((a, a), Complex64::new(1.0 - self.epsilon, 0.0)));
                    let leak = Complex64::new(self.epsilon / (n as f64 - 1.0), 0.0);
                    for nu in 0..n {
                        if nu != a {
                            terms.push(((nu, nu), leak));
                        }
                    }
                }
            }
            return terms;
        }
        terms.push(((a, b), Complex64::ONE + self.alpha.get(a, b)));
        if self.variant != ChannelVariant::Ideal {
            let g = if a < b { self.gamma } else { self.gamma.conj() };
            terms.push(((b, a), g));
        }
        if self.variant == ChannelVariant::FaultyEpsGammaLambda {
            let l = if a < b {
                self.lambda_shift
            } else {
                self.lambda_shift.conj()
            };
            terms.push((((a + 1) % n, (b + 1) % n), l));
        }
        terms
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) || !epsilon.is_finite() {
        return Err(Error::InvalidState {
            context: "epsilon must lie in [0, 1]",
            residual: epsilon,
        });
    }
    Ok(())
}

// --- wire format -----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ComplexWire {
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum AlphaWire {
    Uniform { uniform: f64 },
    Full { re: Vec<Vec<f64>>, im: Vec<Vec<f64>> },
}

/// Wire format:
/// `{"dim": N, "variant": "...", "alpha": {"uniform": a} | {"re": …, "im": …},
///   "epsilon": e, "gamma": {"re": …, "im": …}, "lambda": {"re": …, "im": …}}`
/// with the fault parameters present only for the variants that use them.
#[derive(Serialize, Deserialize)]
struct ChannelSpecWire {
    dim: usize,
    variant: ChannelVariant,
    alpha: AlphaWire,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<ComplexWire>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<ComplexWire>,
}

impl Serialize for ChannelSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let alpha = match self.alpha.as_uniform() {
            Some(a) => AlphaWire::Uniform { uniform: a },
            None => {
                let (re, im) = self.alpha.entries().to_re_im();
                AlphaWire::Full { re, im }
            }
        };
        let faulty = self.variant != ChannelVariant::Ideal;
        let wire = ChannelSpecWire {
            dim: self.dim,
            variant: self.variant,
            alpha,
            epsilon: faulty.then_some(self.epsilon),
            gamma: faulty.then(|| ComplexWire { re: self.gamma.re, im: self.gamma.im }),
            lambda: (self.variant == ChannelVariant::FaultyEpsGammaLambda).then(|| ComplexWire {
                re: self.lambda_shift.re,
                im: self.lambda_shift.im,
            }),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChannelSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let wire = ChannelSpecWire::deserialize(d)?;
        let alpha = match wire.alpha {
            AlphaWire::Uniform { uniform } => {
                AlphaMatrix::uniform(wire.dim, uniform).map_err(DeError::custom)?
            }
            AlphaWire::Full { re, im } => {
                let m = ComplexMatrix::from_re_im(&re, &im).map_err(DeError::custom)?;
                if m.rows() != wire.dim {
                    return Err(DeError::custom(format!(
                        "declared dim {} does not match a {}x{} alpha matrix",
                        wire.dim,
                        m.rows(),
                        m.cols()
                    )));
                }
                AlphaMatrix::from_matrix(m).map_err(DeError::custom)?
            }
        };
        let epsilon = wire.epsilon.unwrap_or(0.0);
        let gamma = wire
            .gamma
            .map_or(Complex64::ZERO, |c| Complex64::new(c.re, c.im));
        let lambda = wire
            .lambda
            .map_or(Complex64::ZERO, |c| Complex64::new(c.re, c.im));
        let spec = match wire.variant {
            ChannelVariant::Ideal => {
                if epsilon != 0.0 || gamma != Complex64::ZERO || lambda != Complex64::ZERO {
                    return Err(DeError::custom(
                        "ideal variant must not carry epsilon/gamma/lambda",
                    ));
                }
                ChannelSpec::ideal(alpha)
            }
            ChannelVariant::FaultyEpsGamma => {
                if lambda != Complex64::ZERO {
                    return Err(DeError::custom("eps_gamma variant must not carry lambda"));
                }
                ChannelSpec::faulty(alpha, epsilon, gamma).map_err(DeError::custom)?
            }
            ChannelVariant::FaultyEpsGammaLambda => {
                ChannelSpec::faulty_shifted(alpha, epsilon, gamma, lambda)
                    .map_err(DeError::custom)?
            }
        };
        Ok(spec)
    }
}

// --- derived objects --------------------------------------------------------

/// Choi matrix `J = Σ_{ij} |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`: unnormalized (trace N),
/// input factor first.
#[derive(Debug, Clone)]
pub struct ChoiState {
    dim_in: usize,
    matrix: ComplexMatrix,
}

impl ChoiState {
    pub fn new(dim_in: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != dim_in * dim_in || !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                context: "Choi matrix must be (N^2)x(N^2)",
                got: matrix.rows(),
                expected: dim_in * dim_in,
            });
        }
        Ok(Self { dim_in, matrix })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `max |Tr_out(J) - 1|`, zero exactly when the channel is trace preserving.
    pub fn tp_residual(&self) -> f64 {
        let reduced = partial_trace(&self.matrix, (self.dim_in, self.dim_in), Keep::First)
            .expect("dimensions verified at construction");
        reduced.max_abs_diff(&ComplexMatrix::identity(self.dim_in))
    }
}

/// A finite set of Kraus operators sharing one dimension.
#[derive(Debug, Clone)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(dim: usize, operators: Vec<ComplexMatrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::BadDimension { dim: 0, context: "Kraus set must be non-empty" });
        }
        for op in &operators {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "Kraus operator dimension mismatch",
                    got: op.rows(),
                    expected: dim,
                });
            }
        }
        Ok(Self { dim, operators })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// `Σ_α K_α m K_α†`.
    pub fn apply_linear(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.operators {
            out = out.add(&k.mul(m).mul(&k.adjoint()));
        }
        out
    }

    /// `max |Σ_α K_α† K_α - 1|`, zero exactly for a trace-preserving set.
    pub fn completeness_residual(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.operators {
            acc = acc.add(&k.adjoint().mul(k));
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }
}

#[derive(Serialize, Deserialize)]
struct OperatorWire {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct KrausSetWire {
    dim: usize,
    operators: Vec<OperatorWire>,
}

impl Serialize for KrausSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let operators = self
            .operators
            .iter()
            .map(|op| {
                let (re, im) = op.to_re_im();
                OperatorWire { re, im }
            })
            .collect();
        KrausSetWire { dim: self.dim, operators }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for KrausSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let wire = KrausSetWire::deserialize(d)?;
        let operators = wire
            .operators
            .iter()
            .map(|op| ComplexMatrix::from_re_im(&op.re, &op.im))
            .collect::<Result<Vec<_>>>()
            .map_err(DeError::custom)?;
        KrausSet::new(wire.dim, operators).map_err(DeError::custom)
    }
}

/// Complete-positivity / trace-preservation verdict with its witnesses.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CptpVerdict {
    pub cptp: bool,
    pub min_choi_eigenvalue: f64,
    pub tp_residual: f64,
}

/// A channel given either as a parameterized family member or as an explicit
/// Kraus set — everything that classification needs from one.
pub trait QuantumChannel {
    fn dim(&self) -> usize;
    /// The channel as a linear map on arbitrary matrices.
    fn apply_linear(&self, m: &ComplexMatrix) -> ComplexMatrix;
    /// Errors with [`Error::NotCptp`] unless the channel is a valid CPTP map.
    fn require_cptp(&self) -> Result<()>;
}

impl QuantumChannel for ChannelSpec {
    fn dim(&self) -> usize {
        ChannelSpec::dim(self)
    }

    fn apply_linear(&self, m: &ComplexMatrix) -> ComplexMatrix {
        ChannelSpec::apply_linear(self, m)
    }

    fn require_cptp(&self) -> Result<()> {
        require_cptp(self)
    }
}

impl QuantumChannel for KrausSet {
    fn dim(&self) -> usize {
        KrausSet::dim(self)
    }

    fn apply_linear(&self, m: &ComplexMatrix) -> ComplexMatrix {
        KrausSet::apply_linear(self, m)
    }

    /// Kraus form is completely positive by construction; only trace
    /// preservation can fail.
    fn require_cptp(&self) -> Result<()> {
        let residual = self.completeness_residual();
        if residual > TP_TOL {
            return Err(Error::NotCptp {
                min_choi_eigenvalue: 0.0,
                tp_residual: residual,
            });
        }
        Ok(())
    }
}

// --- operations --------------------------------------------------------------

/// Builds the Choi matrix by applying the channel to every matrix unit.
pub fn choi(spec: &ChannelSpec) -> ChoiState {
    let n = spec.dim();
    let mut j = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for k in 0..n {
            for &((r, c), coeff) in &spec.unit_action(i, k) {
                j[(i * n + r, k * n + c)] += coeff;
            }
        }
    }
    ChoiState { dim_in: n, matrix: j }
}

/// Builds the Choi matrix of an arbitrary channel from its action on the
/// matrix-unit basis.
pub fn choi_of<C: QuantumChannel>(channel: &C) -> ChoiState {
    let n = channel.dim();
    let mut j = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for k in 0..n {
            let mut unit = ComplexMatrix::zeros(n, n);
            unit[(i, k)] = Complex64::ONE;
            let image = channel.apply_linear(&unit);
            for r in 0..n {
                for s in 0..n {
                    j[(i * n + r, k * n + s)] = image[(r, s)];
                }
            }
        }
    }
    ChoiState { dim_in: n, matrix: j }
}

/// CPTP verdict for a channel, cached on the spec.
///
/// The Choi matrix of every variant splits exactly into the population block
/// on `span{|μμ⟩}` and the coherence-pair sector on `span{|μν⟩, μ≠ν}`, so the
/// verdict is computed blockwise; this is what keeps the check affordable for
/// large networks, where the full Choi matrix would have `N^4` entries.
pub fn is_cptp(spec: &ChannelSpec) -> CptpVerdict {
    *spec.cptp_cache.get_or_init(|| {
        let n = spec.dim();

        // Trace preservation: the image of every matrix unit must have trace
        // δ_ab; this reads off the same residual as Tr_out(J) - 1.
        let mut tp_residual: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut t = Complex64::ZERO;
                for &((r, c), w) in &spec.unit_action(a, b) {
                    if r == c {
                        t += w;
                    }
                }
                let target = if a == b { Complex64::ONE } else { Complex64::ZERO };
                tp_residual = tp_residual.max((t - target).norm());
            }
        }

        // Population block: diag 1-ε (1 for ideal), off-diagonal 1+α.
        let keep = match spec.variant {
            ChannelVariant::Ideal => 1.0,
            _ => 1.0 - spec.epsilon,
        };
        let g_min = match spec.alpha.as_uniform() {
            // diag d, off-diagonal u: eigenvalues d + (N-1)u and d - u.
            Some(a) => {
                let u = 1.0 + a;
                (keep + (n as f64 - 1.0) * u).min(keep - u)
            }
            None => {
                let g = ComplexMatrix::from_fn(n, n, |i, j| {
                    if i == j {
                        Complex64::new(keep, 0.0)
                    } else {
                        Complex64::ONE + spec.alpha.get(i, j)
                    }
                });
                let eig = herm_eig(&g).expect("population block is Hermitian");
                eig.eigenvalues.last().copied().unwrap_or(0.0)
            }
        };

        // Coherence-pair sector.
        let sector_min = match spec.variant {
            // Identically zero for the ideal channel.
            ChannelVariant::Ideal => 0.0,
            // 2x2 blocks [[l, γ], [γ*, l]] with l = ε/(N-1).
            ChannelVariant::FaultyEpsGamma => {
                spec.epsilon / (n as f64 - 1.0) - spec.gamma.norm()
            }
            // The shift couples pair blocks; solve the assembled sector.
            ChannelVariant::FaultyEpsGammaLambda => {
                let f = pair_sector_matrix(spec);
                let eig = herm_eig(&f).expect("pair sector is Hermitian");
                eig.eigenvalues.last().copied().unwrap_or(0.0)
            }
        };

        let min_choi_eigenvalue = g_min.min(sector_min);
        CptpVerdict {
            cptp: min_choi_eigenvalue >= CP_TOL && tp_residual <= TP_TOL,
            min_choi_eigenvalue,
            tp_residual,
        }
    })
}

/// The Choi matrix restricted to `span{|μν⟩, μ≠ν}`, assembled from the
/// channel's action on off-diagonal matrix units.
fn pair_sector_matrix(spec: &ChannelSpec) -> ComplexMatrix {
    let n = spec.dim();
    let mut index = vec![vec![usize::MAX; n]; n];
    let mut next = 0;
    for a in 0..n {
        for b in 0..n {
            if a != b {
                index[a][b] = next;
                next += 1;
            }
        }
    }
    let mut f = ComplexMatrix::zeros(next, next);
    // Diagonal leak terms come from the diagonal matrix units.
    for a in 0..n {
        for &((r, c), w) in &spec.unit_action(a, a) {
            if r == c && r != a {
                f[(index[a][r], index[a][r])] += w;
            }
        }
    }
    // Off-diagonal units contribute at row (a, r), column (b, c).
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for &((r, c), w) in &spec.unit_action(a, b) {
                if (r, c) == (a, b) {
                    continue; // population-block coupling, not in this sector
                }
                f[(index[a][r], index[b][c])] += w;
            }
        }
    }
    f
}

fn require_cptp(spec: &ChannelSpec) -> Result<()> {
    let verdict = is_cptp(spec);
    if !verdict.cptp {
        return Err(Error::NotCptp {
            min_choi_eigenvalue: verdict.min_choi_eigenvalue,
            tp_residual: verdict.tp_residual,
        });
    }
    Ok(())
}

/// Applies a CPTP channel to a state.
pub fn apply(spec: &ChannelSpec, rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_cptp(spec)?;
    check_state_dim(spec, rho)?;
    Ok(DensityMatrix::new_unchecked(spec.apply_linear(rho.matrix())))
}

/// Applies the channel without the CPTP gate, for probing non-physical
/// parameter regions. The output is not revalidated.
pub fn apply_unchecked(spec: &ChannelSpec, rho: &DensityMatrix) -> Result<DensityMatrix> {
    check_state_dim(spec, rho)?;
    Ok(DensityMatrix::new_unchecked(spec.apply_linear(rho.matrix())))
}

/// Applies a CPTP channel `r` times; `r = 0` returns the input unchanged.
pub fn iterate(spec: &ChannelSpec, rho: &DensityMatrix, r: u64) -> Result<DensityMatrix> {
    require_cptp(spec)?;
    check_state_dim(spec, rho)?;
    let mut m = rho.matrix().clone();
    for _ in 0..r {
        m = spec.apply_linear(&m);
    }
    Ok(DensityMatrix::new_unchecked(m))
}

fn check_state_dim(spec: &ChannelSpec, rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            context: "state dimension does not match the channel",
            got: rho.dim(),
            expected: spec.dim(),
        });
    }
    Ok(())
}

/// Applies `Λ ⊗ id` to a state on `system ⊗ bystander` with dimensions
/// `dims = (N, d)`; the channel acts on the first factor only.
pub fn apply_extended(
    spec: &ChannelSpec,
    rho: &DensityMatrix,
    dims: (usize, usize),
) -> Result<DensityMatrix> {
    require_cptp(spec)?;
    let (n, d) = dims;
    if n != spec.dim() {
        return Err(Error::DimensionMismatch {
            context: "first factor must match the channel dimension",
            got: n,
            expected: spec.dim(),
        });
    }
    if rho.dim() != n * d {
        return Err(Error::DimensionMismatch {
            context: "composite state dimension must be N*d",
            got: rho.dim(),
            expected: n * d,
        });
    }
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(n * d, n * d);
    for a in 0..n {
        for b in 0..n {
            let terms = spec.unit_action(a, b);
            // Copy block (a,b) of the input through the channel's sparse action.
            for &((r, c), coeff) in &terms {
                if coeff == Complex64::ZERO {
                    continue;
                }
                for x in 0..d {
                    for y in 0..d {
                        out[(r * d + x, c * d + y)] += coeff * m[(a * d + x, b * d + y)];
                    }
                }
            }
        }
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// Canonical Kraus operators from the Choi eigendecomposition: eigenvalues
/// below [`KRAUS_CUTOFF`] are dropped, operators are ordered by descending
/// eigenvalue with exact ties broken lexicographically by eigenvector.
pub fn kraus_from_choi(j: &ChoiState) -> Result<KrausSet> {
    let n = j.dim_in();
    let eig = herm_eig(j.matrix())?;
    let min_eig = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min_eig < CP_TOL {
        return Err(Error::NotPsd { min_eigenvalue: min_eig });
    }

    let mut kept: Vec<(f64, Vec<Complex64>)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l >= KRAUS_CUTOFF)
        .map(|(k, &l)| (l, eig.eigenvectors.column(k)))
        .collect();
    // Descending order is inherited; break exact eigenvalue ties by the
    // lexicographic order of the eigenvector coordinates.
    kept.sort_by(|(la, va), (lb, vb)| {
        lb.partial_cmp(la)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| {
                if (la - lb).abs() > 1e-12 {
                    return std::cmp::Ordering::Equal;
                }
                for (x, y) in va.iter().zip(vb) {
                    match x
                        .re
                        .partial_cmp(&y.re)
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal))
                    {
                        std::cmp::Ordering::Equal => continue,
                        other => return other,
                    }
                }
                std::cmp::Ordering::Equal
            })
    });

    let operators: Vec<ComplexMatrix> = kept
        .into_iter()
        .map(|(l, v)| {
            let w = l.sqrt();
            // The eigenvector indexes |in, out⟩; entry (r, c) of the operator
            // is the amplitude for |in=c⟩ → |out=r⟩.
            ComplexMatrix::from_fn(n, n, |r, c| v[c * n + r] * w)
        })
        .collect();
    KrausSet::new(n, operators)
}
