//! Dense complex-matrix primitives: a row-major matrix type, a self-contained
//! Hermitian eigensolver (cyclic Jacobi), Kronecker products, partial traces
//! and the trace norm. Everything else in the crate builds on this module.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum allowed deviation from Hermitian symmetry, `max |A - A†|`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Builds a matrix by evaluating `f(row, col)` at every position.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a square matrix from nested rows; fails on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    context: "ragged rows in matrix literal",
                    got: row.len(),
                    expected: c,
                });
            }
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "inner dimensions must agree");
        let mut out = vec![Complex64::ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::ZERO;
            for k in 0..self.cols {
                acc += self[(i, k)] * v[k];
            }
            out[i] = acc;
        }
        out
    }

    /// Entry-wise sum.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Entry-wise difference.
    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    /// Multiplies every entry by a complex scalar.
    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation `|A[(i,j)] - conj(A[(j,i)])|`; zero for exactly Hermitian input.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Splits into nested real and imaginary parts (row-major), for serialization.
    pub fn to_re_im(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mut re = Vec::with_capacity(self.rows);
        let mut im = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            re.push((0..self.cols).map(|j| self[(i, j)].re).collect());
            im.push((0..self.cols).map(|j| self[(i, j)].im).collect());
        }
        (re, im)
    }

    /// Rebuilds a matrix from nested real and imaginary parts of equal shape.
    pub fn from_re_im(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let rows = re.len();
        if im.len() != rows {
            return Err(Error::DimensionMismatch {
                context: "imaginary part has a different row count than the real part",
                got: im.len(),
                expected: rows,
            });
        }
        let cols = re.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            if re[i].len() != cols || im[i].len() != cols {
                return Err(Error::DimensionMismatch {
                    context: "ragged rows in re/im arrays",
                    got: re[i].len().max(im[i].len()),
                    expected: cols,
                });
            }
            for j in 0..cols {
                m[(i, j)] = Complex64::new(re[i][j], im[i][j]);
            }
        }
        Ok(m)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in descending
/// order and the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    /// Rebuilds `V diag(λ) V†`; useful for round-trip checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| {
                    self.eigenvectors[(i, k)]
                        * self.eigenvalues[k]
                        * self.eigenvectors[(j, k)].conj()
                })
                .sum()
        })
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Rotations are only applied to nonzero couplings, so exact block structure
/// in the input is preserved in the eigenvectors even when eigenvalues are
/// degenerate across blocks. Eigenvalues are sorted descending; ties keep the
/// post-sweep diagonal order, and each eigenvector's phase is fixed by making
/// its largest-modulus entry real and positive.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            context: "eigendecomposition requires a square matrix",
            got: m.cols,
            expected: m.rows,
        });
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NonHermitianInput { deviation: dev });
    }

    let n = m.rows;
    // Work on the Hermitian average so that sub-tolerance asymmetry cannot bias the sweep.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut q = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm().max(1.0);
    let tol = 1e-15 * scale;
    const MAX_SWEEPS: usize = 200;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off += a[(p, r)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }

        for p in 0..n {
            for r in (p + 1)..n {
                let beta = a[(p, r)];
                let beta_abs = beta.norm();
                if beta_abs == 0.0 {
                    continue;
                }
                // Phase that makes the (p,r) coupling real, then a real Jacobi angle.
                let u = beta / beta_abs;
                let app = a[(p, p)].re;
                let arr = a[(r, r)].re;
                let theta = (arr - app) / (2.0 * beta_abs);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let su = u * s; // rotation entries: V = [[c, s·ū-col form], ...]
                let su_conj = su.conj();

                // A <- A · V  (mix columns p and r)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akr = a[(k, r)];
                    a[(k, p)] = akp * c - akr * su_conj;
                    a[(k, r)] = akp * s + akr * (u.conj() * c);
                }
                // A <- V† · A  (mix rows p and r)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let ark = a[(r, k)];
                    a[(p, k)] = apk * c - ark * su;
                    a[(r, k)] = apk * s + ark * (u * c);
                }
                // Exact values for the rotated 2x2 block.
                a[(p, p)] = Complex64::new(app - t * beta_abs, 0.0);
                a[(r, r)] = Complex64::new(arr + t * beta_abs, 0.0);
                a[(p, r)] = Complex64::ZERO;
                a[(r, p)] = Complex64::ZERO;

                // Q <- Q · V  (accumulate eigenvectors as columns)
                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = qkp * c - qkr * su_conj;
                    q[(k, r)] = qkp * s + qkr * (u.conj() * c);
                }
            }
        }
    }

    // Sort descending; stable sort keeps diagonal order on ties.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        // Canonical phase: largest-modulus entry becomes real positive.
        let mut best = 0usize;
        let mut best_norm = 0.0f64;
        for k in 0..n {
            let nk = q[(k, old_col)].norm();
            if nk > best_norm + 1e-15 {
                best_norm = nk;
                best = k;
            }
        }
        let pivot = q[(best, old_col)];
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            Complex64::ONE
        };
        for k in 0..n {
            eigenvectors[(k, new_col)] = q[(k, old_col)] * phase;
        }
    }

    Ok(HermitianEigenSystem { eigenvalues, eigenvectors })
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows, a.cols);
    let (rb, cb) = (b.rows, b.cols);
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i1 in 0..ra {
        for j1 in 0..ca {
            let aij = a[(i1, j1)];
            if aij == Complex64::ZERO {
                continue;
            }
            for i2 in 0..rb {
                for j2 in 0..cb {
                    out[(i1 * rb + i2, j1 * cb + j2)] = aij * b[(i2, j2)];
                }
            }
        }
    }
    out
}

/// Which tensor factor `partial_trace` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Partial trace of a matrix on a bipartite space of dimensions `dims = (d1, d2)`,
/// with the first factor indexed most significantly (`row = i1 * d2 + i2`).
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: (usize, usize),
    keep: Keep,
) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    let n = d1 * d2;
    if !m.is_square() || m.rows != n {
        return Err(Error::DimensionMismatch {
            context: "partial trace dimensions do not factor the matrix",
            got: m.rows,
            expected: n,
        });
    }
    let out = match keep {
        Keep::First => ComplexMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| m[(i * d2 + k, j * d2 + k)]).sum()
        }),
        Keep::Second => ComplexMatrix::from_fn(d2, d2, |a, b| {
            (0..d1).map(|k| m[(k * d2 + a, k * d2 + b)]).sum()
        }),
    };
    Ok(out)
}

/// Trace norm (sum of singular values). Hermitian inputs take the accurate
/// path through their eigenvalues; general square matrices go through `M†M`.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            context: "trace norm requires a square matrix",
            got: m.cols,
            expected: m.rows,
        });
    }
    if m.hermiticity_deviation() <= HERMITICITY_TOL {
        let eig = herm_eig(m)?;
        Ok(eig.eigenvalues.iter().map(|l| l.abs()).sum())
    } else {
        let gram = m.adjoint().mul(m);
        let eig = herm_eig(&gram)?;
        Ok(eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).sum())
    }
}

/// Cholesky factor `L` (lower triangular, `L L† = m`) of a Hermitian
/// positive-definite matrix, or `None` if the matrix is not positive definite.
pub fn cholesky(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows;
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = m[(j, j)].re;
        for k in 0..j {
            diag -= l[(j, k)].norm_sqr();
        }
        if diag <= 0.0 || !diag.is_finite() {
            return None;
        }
        let ljj = diag.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut acc = m[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / ljj;
        }
    }
    Some(l)
}

/// Solves `L x = b` for lower-triangular `L`.
pub fn solve_lower(l: &ComplexMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let lik = l[(i, k)];
            x[i] = x[i] - lik * x[k];
        }
        x[i] /= l[(i, i)];
    }
    x
}

/// Solves `L† x = b` for lower-triangular `L`.
pub fn solve_lower_adjoint(l: &ComplexMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let lki = l[(k, i)].conj();
            x[i] = x[i] - lki * x[k];
        }
        x[i] /= l[(i, i)].conj();
    }
    x
}

/// Inverse of a Hermitian positive-definite matrix via its Cholesky factor.
pub fn pd_inverse(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let l = cholesky(m)?;
    let n = m.rows();
    let mut inv = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Complex64::ZERO; n];
        e[j] = Complex64::ONE;
        let y = solve_lower(&l, &e);
        let x = solve_lower_adjoint(&l, &y);
        for i in 0..n {
            inv[(i, j)] = x[i];
        }
    }
    // Symmetrize away round-off so downstream Hermitian checks stay tight.
    Some(ComplexMatrix::from_fn(n, n, |i, j| {
        (inv[(i, j)] + inv[(j, i)].conj()) * 0.5
    }))
}
