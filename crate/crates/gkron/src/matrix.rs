//! Dense complex matrices, matrix tuples, and generalized Kronecker products.
//!
//! The central operation is [`gkron`]: a two-sided *generalized* Kronecker
//! product of matrix tuples. Where the ordinary Kronecker product scales one
//! fixed matrix by every entry of another, the generalized product lets every
//! block row (and block column) come from a *different* member of a tuple.
//! Constant tuples recover the ordinary product, and [`diagonalization_factorize`]
//! reduces any generalized product to shuffle permutations and block-diagonal
//! factors — the identity that makes these products implementable as shallow
//! circuits.
//!
//! Matrices are stored dense and row-major; indices are 0-based throughout.

use std::fmt;
use std::ops::Index;

use thiserror::Error;

pub use num_complex::Complex64;

/// Which side a (generalized) Kronecker product is taken on.
///
/// For matrices `A` (p×q) and `C` (k×l), the *right* product is the familiar
/// one — a p×q grid of blocks `a_ux · C` — while the *left* product is a k×l
/// grid of blocks `A · c_vy`. Both are pk×ql.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix data length {got} does not match {rows}x{cols}")]
    DataLength { rows: usize, cols: usize, got: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix tuple must be non-empty")]
    EmptyTuple,
    #[error("matrix tuple members must share one shape")]
    RaggedTuple,
    #[error("phase at row {row} has modulus {modulus} (expected 1 within tolerance)")]
    NonUnitPhase { row: usize, modulus: f64 },
}

/// A dense complex matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data. Rejects wrong lengths and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::DataLength { rows, cols, got: data.len() });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix entry by entry from `f(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Convenience constructor from nested real rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::ShapeMismatch("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0))).collect();
        Self::new(r, c, data)
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

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).conj())
    }

    pub fn scaled(&self, c: Complex64) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| c * self.get(i, j))
    }

    /// Largest entrywise absolute difference between two same-shaped matrices.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "cannot compare {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        matches!(self.max_abs_diff(other), Ok(d) if d <= tol)
    }

    /// Max-norm deviation of `self · selfᴴ` from the identity.
    pub fn unitarity_deviation(&self) -> Result<f64, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let product = self.mul(&self.adjoint())?;
        product.max_abs_diff(&ComplexMatrix::identity(self.rows))
    }

    /// Whether `self · selfᴴ = I` within `tol` (max-norm). Non-square input
    /// is rejected rather than reported as "not unitary".
    pub fn is_unitary(&self, tol: f64) -> Result<bool, MatrixError> {
        Ok(self.unitarity_deviation()? <= tol)
    }

    /// Renders the matrix in the plain text export format: a `rows cols`
    /// header line, then one line per row of comma-joined `re,im` tokens in
    /// fixed decimal with 17 fractional digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:.17},{:.17}", z.re, z.im))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for (j, z) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A non-empty tuple of equally shaped matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    members: Vec<ComplexMatrix>,
}

impl MatrixTuple {
    pub fn new(members: Vec<ComplexMatrix>) -> Result<Self, MatrixError> {
        let first = members.first().ok_or(MatrixError::EmptyTuple)?;
        let (r, c) = (first.rows(), first.cols());
        if members.iter().any(|m| m.rows() != r || m.cols() != c) {
            return Err(MatrixError::RaggedTuple);
        }
        Ok(Self { members })
    }

    /// A tuple of `count` copies of one matrix.
    pub fn constant(matrix: ComplexMatrix, count: usize) -> Result<Self, MatrixError> {
        if count == 0 {
            return Err(MatrixError::EmptyTuple);
        }
        Ok(Self { members: vec![matrix; count] })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn member_rows(&self) -> usize {
        self.members[0].rows()
    }

    pub fn member_cols(&self) -> usize {
        self.members[0].cols()
    }

    pub fn get(&self, i: usize) -> &ComplexMatrix {
        &self.members[i]
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.members
    }

    /// Member-wise conjugate transpose (the tuple of inverses, when the
    /// members are unitary).
    pub fn adjoints(&self) -> MatrixTuple {
        MatrixTuple { members: self.members.iter().map(ComplexMatrix::adjoint).collect() }
    }
}

/// A vector of unit-modulus phases, as extracted by [`equal_up_to_diag_phase`].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    phases: Vec<Complex64>,
}

impl PhaseVector {
    /// Validates that every entry has modulus 1 within `tol`.
    pub fn new(phases: Vec<Complex64>, tol: f64) -> Result<Self, MatrixError> {
        for (row, phi) in phases.iter().enumerate() {
            let modulus = phi.norm();
            if (modulus - 1.0).abs() > tol {
                return Err(MatrixError::NonUnitPhase { row, modulus });
            }
        }
        Ok(Self { phases })
    }

    pub fn phases(&self) -> &[Complex64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Ordinary Kronecker product of two matrices, on either side.
///
/// `kron(Right, A, C)` is the familiar block form `[a_ux · C]`; the left
/// product arranges blocks `[A · c_vy]` in the shape of `C` instead. Both
/// results are pk×ql for A p×q and C k×l.
pub fn kron(side: Side, a: &ComplexMatrix, c: &ComplexMatrix) -> ComplexMatrix {
    // Constant tuples always satisfy the gkron shape rule, so this cannot fail.
    let at = MatrixTuple::constant(a.clone(), c.rows()).expect("non-empty");
    let ct = MatrixTuple::constant(c.clone(), a.cols()).expect("non-empty");
    gkron(side, &at, &ct).expect("constant tuples are conformant")
}

/// Generalized Kronecker product of matrix tuples.
///
/// `A` must be a k-tuple of p×q matrices and `C` a q-tuple of k×l matrices;
/// the result `D` is pk×ql with
///
/// * right: `d[u·k+v, x·l+y] = A[v][u,x] · C[x][v,y]`
/// * left:  `d[u·p+v, x·q+y] = A[u][v,y] · C[y][u,x]`
///
/// so each block row of the right product is sliced across the members of
/// `A`, and each block column across the members of `C`. With constant
/// tuples this reduces to [`kron`].
pub fn gkron(side: Side, a: &MatrixTuple, c: &MatrixTuple) -> Result<ComplexMatrix, MatrixError> {
    let k = a.len();
    let (p, q) = (a.member_rows(), a.member_cols());
    let l = c.member_cols();
    if c.len() != q || c.member_rows() != k {
        return Err(MatrixError::ShapeMismatch(format!(
            "expected a {q}-tuple of {k}x{l} matrices alongside a {k}-tuple of {p}x{q}, \
             got a {}-tuple of {}x{}",
            c.len(),
            c.member_rows(),
            c.member_cols()
        )));
    }
    let mut d = ComplexMatrix::zeros(p * k, q * l);
    match side {
        Side::Right => {
            for u in 0..p {
                for v in 0..k {
                    for x in 0..q {
                        for y in 0..l {
                            let val = a.get(v).get(u, x) * c.get(x).get(v, y);
                            d.set(u * k + v, x * l + y, val);
                        }
                    }
                }
            }
        }
        Side::Left => {
            for u in 0..k {
                for v in 0..p {
                    for x in 0..l {
                        for y in 0..q {
                            let val = a.get(u).get(v, y) * c.get(y).get(u, x);
                            d.set(u * p + v, x * q + y, val);
                        }
                    }
                }
            }
        }
    }
    Ok(d)
}

/// The mn×mn shuffle permutation matrix Π(m,n), which maps basis index
/// `e·m + d` to `d·n + e` for `d < m`, `e < n`.
///
/// Its inverse (= transpose) is Π(n,m).
pub fn shuffle_matrix(m: usize, n: usize) -> ComplexMatrix {
    let size = m * n;
    let mut pi = ComplexMatrix::zeros(size, size);
    for d in 0..m {
        for e in 0..n {
            pi.set(d * n + e, e * m + d, Complex64::new(1.0, 0.0));
        }
    }
    pi
}

/// Block-diagonal direct sum of the members of a tuple.
pub fn diag_sum(c: &MatrixTuple) -> ComplexMatrix {
    let (r, s) = (c.member_rows(), c.member_cols());
    let n = c.len();
    let mut out = ComplexMatrix::zeros(n * r, n * s);
    for (i, m) in c.members().iter().enumerate() {
        for a in 0..r {
            for b in 0..s {
                out.set(i * r + a, i * s + b, m.get(a, b));
            }
        }
    }
    out
}

/// Factorizes a generalized Kronecker product into shuffles and
/// block-diagonal direct sums.
///
/// For `A` a k-tuple of p×q matrices and `C` a q-tuple of k×l matrices, the
/// ordered product of the returned factors equals `gkron(side, A, C)`:
///
/// * right: `[Π(p,k), Diag(A), Π(k,q), Diag(C)]`
/// * left:  `[Diag(A), Π(k,q), Diag(C), Π(q,l)]`
pub fn diagonalization_factorize(
    side: Side,
    a: &MatrixTuple,
    c: &MatrixTuple,
) -> Result<Vec<ComplexMatrix>, MatrixError> {
    let k = a.len();
    let (p, q) = (a.member_rows(), a.member_cols());
    let l = c.member_cols();
    if c.len() != q || c.member_rows() != k {
        // Reuse gkron's conformance diagnostics.
        gkron(side, a, c)?;
    }
    let factors = match side {
        Side::Right => vec![shuffle_matrix(p, k), diag_sum(a), shuffle_matrix(k, q), diag_sum(c)],
        Side::Left => vec![diag_sum(a), shuffle_matrix(k, q), diag_sum(c), shuffle_matrix(q, l)],
    };
    Ok(factors)
}

/// Ordered product of a non-empty factor list (left to right).
pub fn product_of(factors: &[ComplexMatrix]) -> Result<ComplexMatrix, MatrixError> {
    let mut iter = factors.iter();
    let first = iter.next().ok_or(MatrixError::EmptyTuple)?.clone();
    iter.try_fold(first, |acc, f| acc.mul(f))
}

/// Tests whether `M = diag(φ) · F` for some vector of unit-modulus phases φ,
/// and returns that vector if so.
///
/// Both matrices must be square and of the same shape. For each row, the
/// phase is extracted from the first column where `|F|` exceeds `tol`, and
/// the whole row must then match within `tol`; a row of `F` that is zero
/// within `tol` must also be zero in `M` (its phase is reported as 1).
/// `Ok(None)` means the matrices are not related by a diagonal of phases.
pub fn equal_up_to_diag_phase(
    m: &ComplexMatrix,
    f: &ComplexMatrix,
    tol: f64,
) -> Result<Option<PhaseVector>, MatrixError> {
    if m.rows() != f.rows() || m.cols() != f.cols() {
        return Err(MatrixError::ShapeMismatch(format!(
            "cannot compare {}x{} with {}x{}",
            m.rows(),
            m.cols(),
            f.rows(),
            f.cols()
        )));
    }
    if !m.is_square() {
        return Err(MatrixError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let one = Complex64::new(1.0, 0.0);
    let mut phases = Vec::with_capacity(n);
    for i in 0..n {
        let pivot = (0..n).find(|&j| f.get(i, j).norm() > tol);
        let phi = match pivot {
            Some(j) => m.get(i, j) / f.get(i, j),
            None => one,
        };
        if (phi.norm() - 1.0).abs() > tol {
            return Ok(None);
        }
        for j in 0..n {
            if (m.get(i, j) - phi * f.get(i, j)).norm() > tol {
                return Ok(None);
            }
        }
        phases.push(phi);
    }
    // Moduli were already checked against `tol` above.
    Ok(Some(PhaseVector { phases }))
}
