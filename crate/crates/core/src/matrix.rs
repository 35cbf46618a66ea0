//! Dense complex matrix carriers.
//!
//! [`ComplexMatrix`] is the general rectangular carrier, [`HermitianMatrix`]
//! holds a matrix that is exactly equal to its conjugate transpose, and
//! [`PsdBlockMatrix`] is the 2x2 block object `[[A, X], [X*, B]]`.
//!
//! All three serialize to the shared JSON formats:
//!
//! ```text
//! matrix: {"rows": r, "cols": c, "entries": [[re, im], ...]}   (row-major)
//! block:  {"n": n, "m": m, "A": matrix, "X": matrix, "B": matrix}
//! ```

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Dense rectangular complex matrix with finite entries.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        if repr.entries.len() != repr.rows * repr.cols {
            return Err(Error::DimensionMismatch(format!(
                "field `entries` has {} values, expected rows*cols = {}",
                repr.entries.len(),
                repr.rows * repr.cols
            )));
        }
        let entries = repr.entries.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(repr.rows, repr.cols, entries)
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries_row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_row_iterator(rows, cols, entries))
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_dmatrix(data: DMatrix<C64>) -> Result<Self> {
        for j in 0..data.ncols() {
            for i in 0..data.nrows() {
                let z = data[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { data })
    }

    /// Wraps the result of arithmetic on already-validated matrices.
    pub(crate) fn from_raw(data: DMatrix<C64>) -> Self {
        Self { data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_raw(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut data = DMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            data[(i, i)] = d;
        }
        Self::from_raw(data)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let diag: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&diag)
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn entries_row_major(&self) -> Vec<C64> {
        self.data.transpose().as_slice().to_vec()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows().min(self.cols())).map(|i| self.data[(i, i)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_raw(self.data.adjoint())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::from_raw(self.data.map(|z| z * factor))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    /// Copy of the `nrows x ncols` sub-block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, nrows: usize, ncols: usize) -> Self {
        Self::from_raw(self.data.view((row, col), (nrows, ncols)).into_owned())
    }

    /// Assembles `[[tl, tr], [bl, br]]`.
    pub fn from_blocks(
        tl: &ComplexMatrix,
        tr: &ComplexMatrix,
        bl: &ComplexMatrix,
        br: &ComplexMatrix,
    ) -> Result<Self> {
        if tl.rows() != tr.rows()
            || bl.rows() != br.rows()
            || tl.cols() != bl.cols()
            || tr.cols() != br.cols()
        {
            return Err(Error::DimensionMismatch(format!(
                "cannot tile blocks {}x{}, {}x{}, {}x{}, {}x{}",
                tl.rows(),
                tl.cols(),
                tr.rows(),
                tr.cols(),
                bl.rows(),
                bl.cols(),
                br.rows(),
                br.cols()
            )));
        }
        let (n, m) = (tl.rows(), bl.rows());
        let (p, q) = (tl.cols(), tr.cols());
        let mut data = DMatrix::zeros(n + m, p + q);
        data.view_mut((0, 0), (n, p)).copy_from(&tl.data);
        data.view_mut((0, p), (n, q)).copy_from(&tr.data);
        data.view_mut((n, 0), (m, p)).copy_from(&bl.data);
        data.view_mut((n, p), (m, q)).copy_from(&br.data);
        Ok(Self::from_raw(data))
    }

    /// `self ⊕ other`.
    pub fn direct_sum(&self, other: &ComplexMatrix) -> Self {
        let tr = Self::zeros(self.rows(), other.cols());
        let bl = Self::zeros(other.rows(), self.cols());
        Self::from_blocks(self, &tr, &bl, other).expect("direct sum blocks always tile")
    }

    /// Checked product.
    pub fn try_mul(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(self * rhs)
    }

    /// Checked sum.
    pub fn try_add(&self, rhs: &ComplexMatrix) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(self + rhs)
    }

    /// Checked difference.
    pub fn try_sub(&self, rhs: &ComplexMatrix) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(self - rhs)
    }

    fn same_shape(&self, rhs: &ComplexMatrix) -> Result<()> {
        if self.rows() != rhs.rows() || self.cols() != rhs.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(())
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows())
        } else {
            Err(Error::NotSquare { rows: self.rows(), cols: self.cols() })
        }
    }

    /// Entrywise comparison with an absolute tolerance.
    pub fn approx_eq(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.rows() == other.rows()
            && self.cols() == other.cols()
            && self.data.iter().zip(other.data.iter()).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// `‖M*M − I‖_F`, the distance from unitarity.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = &self.data.adjoint() * &self.data;
        (gram - DMatrix::<C64>::identity(self.cols(), self.cols()))
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix({}x{})", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "\n  [")?;
            for j in 0..self.cols() {
                let z = self.data[(i, j)];
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix::from_raw(&self.data $op &rhs.data)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::from_raw(-&self.data)
    }
}

/// Square matrix stored exactly as `(M + M*)/2`.
///
/// Off-diagonal pairs are exact complex conjugates and the diagonal is exactly
/// real, so every eigen routine sees a truly Hermitian input.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct HermitianMatrix {
    matrix: ComplexMatrix,
}

impl TryFrom<ComplexMatrix> for HermitianMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        HermitianMatrix::new(m, tol::HERMITIAN)
    }
}

impl From<HermitianMatrix> for ComplexMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.matrix
    }
}

impl HermitianMatrix {
    /// Symmetrizes `m`, rejecting it when `‖M − M*‖_F > tol·max(1, ‖M‖_F)`.
    pub fn new(m: ComplexMatrix, tol: f64) -> Result<Self> {
        m.require_square()?;
        let residue = (m.data.clone() - m.data.adjoint()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let allowed = tol * m.frobenius_norm().max(1.0);
        if residue > allowed {
            return Err(Error::HermitianResidueTooLarge { residue, allowed });
        }
        Ok(Self::symmetrize(&m))
    }

    /// `(M + M*)/2` with no residue check. `m` must be square.
    pub(crate) fn symmetrize(m: &ComplexMatrix) -> Self {
        let n = m.rows();
        let mut data = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                data[(i, j)] = (m.data[(i, j)] + m.data[(j, i)].conj()) * 0.5;
            }
        }
        Self { matrix: ComplexMatrix::from_raw(data) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self { matrix: ComplexMatrix::from_real_diagonal(diag) }
    }

    /// Real symmetric convenience constructor; the input must be symmetric.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows)?, tol::HERMITIAN)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        self.matrix.as_dmatrix()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn real_diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { matrix: self.matrix.scale(C64::new(factor, 0.0)) }
    }

    /// Checked sum; the result is exactly Hermitian.
    pub fn try_add(&self, rhs: &HermitianMatrix) -> Result<Self> {
        Ok(Self { matrix: self.matrix.try_add(&rhs.matrix)? })
    }

    pub fn try_sub(&self, rhs: &HermitianMatrix) -> Result<Self> {
        Ok(Self { matrix: self.matrix.try_sub(&rhs.matrix)? })
    }

    /// `Q H Q*` for any conformable `Q`.
    pub fn congruence(&self, q: &ComplexMatrix) -> Self {
        Self::symmetrize(&(&(q * &self.matrix) * &q.adjoint()))
    }

    /// Principal submatrix on the given indices.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let k = indices.len();
        let data = DMatrix::from_fn(k, k, |i, j| self.matrix.get(indices[i], indices[j]));
        Self { matrix: ComplexMatrix::from_raw(data) }
    }

    /// `self ⊕ other`.
    pub fn direct_sum(&self, other: &HermitianMatrix) -> Self {
        Self { matrix: self.matrix.direct_sum(&other.matrix) }
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian")?;
        self.matrix.fmt(f)
    }
}

/// The block matrix `M = [[A, X], [X*, B]]` with `A` of size `n` and `B` of
/// size `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockRepr", into = "BlockRepr")]
pub struct PsdBlockMatrix {
    a: HermitianMatrix,
    x: ComplexMatrix,
    b: HermitianMatrix,
    psd_certified: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockRepr {
    n: usize,
    m: usize,
    #[serde(rename = "A")]
    a: HermitianMatrix,
    #[serde(rename = "X")]
    x: ComplexMatrix,
    #[serde(rename = "B")]
    b: HermitianMatrix,
}

impl TryFrom<BlockRepr> for PsdBlockMatrix {
    type Error = Error;

    fn try_from(repr: BlockRepr) -> Result<Self> {
        if repr.a.dim() != repr.n {
            return Err(Error::DimensionMismatch(format!(
                "field `A` is {0}x{0} but n = {1}",
                repr.a.dim(),
                repr.n
            )));
        }
        if repr.b.dim() != repr.m {
            return Err(Error::DimensionMismatch(format!(
                "field `B` is {0}x{0} but m = {1}",
                repr.b.dim(),
                repr.m
            )));
        }
        PsdBlockMatrix::assemble(repr.a, repr.x, repr.b)
    }
}

impl From<PsdBlockMatrix> for BlockRepr {
    fn from(m: PsdBlockMatrix) -> Self {
        BlockRepr { n: m.n(), m: m.m(), a: m.a, x: m.x, b: m.b }
    }
}

impl PsdBlockMatrix {
    /// Pairs the three blocks; positivity is not checked here (see
    /// [`PsdBlockMatrix::certify`]).
    pub fn assemble(a: HermitianMatrix, x: ComplexMatrix, b: HermitianMatrix) -> Result<Self> {
        if x.rows() != a.dim() || x.cols() != b.dim() {
            return Err(Error::DimensionMismatch(format!(
                "field `X` is {}x{} but A is {2}x{2} and B is {3}x{3}",
                x.rows(),
                x.cols(),
                a.dim(),
                b.dim()
            )));
        }
        Ok(Self { a, x, b, psd_certified: false })
    }

    /// Splits a Hermitian matrix after its first `n` rows and columns.
    pub fn split(m: &HermitianMatrix, n: usize) -> Result<Self> {
        let total = m.dim();
        if n == 0 || n >= total {
            return Err(Error::DimensionMismatch(format!(
                "split point {n} must satisfy 0 < n < {total}"
            )));
        }
        let k = total - n;
        let full = m.matrix();
        Ok(Self {
            a: HermitianMatrix { matrix: full.block(0, 0, n, n) },
            x: full.block(0, n, n, k),
            b: HermitianMatrix { matrix: full.block(n, n, k, k) },
            psd_certified: false,
        })
    }

    /// Checks positivity with the given tolerance and records the result.
    pub fn certify(mut self, tol: f64) -> Result<Self> {
        let verdict = crate::linalg::positivity(&self.full(), tol)?;
        if !verdict.is_psd() {
            return Err(Error::NotPsd { min_eigenvalue: verdict.min_eigenvalue });
        }
        self.psd_certified = true;
        Ok(self)
    }

    /// Errors with `NotPsd` unless the matrix is certified or passes the
    /// default positivity test.
    pub fn ensure_psd(&self) -> Result<()> {
        if self.psd_certified {
            return Ok(());
        }
        let verdict = crate::linalg::positivity(&self.full(), tol::PSD)?;
        if verdict.is_psd() {
            Ok(())
        } else {
            Err(Error::NotPsd { min_eigenvalue: verdict.min_eigenvalue })
        }
    }

    pub fn n(&self) -> usize {
        self.a.dim()
    }

    pub fn m(&self) -> usize {
        self.b.dim()
    }

    pub fn a(&self) -> &HermitianMatrix {
        &self.a
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn b(&self) -> &HermitianMatrix {
        &self.b
    }

    pub fn is_psd_certified(&self) -> bool {
        self.psd_certified
    }

    /// Errors unless `n = m`.
    pub fn require_square_blocks(&self) -> Result<usize> {
        if self.n() == self.m() {
            Ok(self.n())
        } else {
            Err(Error::BlocksNotSquareEqual { n: self.n(), m: self.m() })
        }
    }

    /// The assembled `(n+m) x (n+m)` matrix; exactly Hermitian.
    pub fn full(&self) -> HermitianMatrix {
        let matrix = ComplexMatrix::from_blocks(self.a.matrix(), &self.x, &self.x.adjoint(), self.b.matrix())
            .expect("block shapes validated at construction");
        HermitianMatrix { matrix }
    }

    /// `A + B` for square-block matrices.
    pub fn a_plus_b(&self) -> Result<HermitianMatrix> {
        self.require_square_blocks()?;
        self.a.try_add(&self.b)
    }
}
