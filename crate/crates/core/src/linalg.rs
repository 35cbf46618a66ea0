//! Hermitian structure, positivity, the `R`/`I`/`|·|` operators, commutation
//! predicates and seeded random ensembles.

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi;
use crate::matrix::{ComplexMatrix, HermitianMatrix, C64, I};
use crate::tol;

const MAX_SWEEPS: usize = 10_000;

/// Symmetrizes `m` to `(M + M*)/2`, failing when the anti-Hermitian residue
/// exceeds `tol` relative to `max(1, ‖M‖_F)`.
pub fn hermitize(m: &ComplexMatrix, tol: f64) -> Result<HermitianMatrix> {
    HermitianMatrix::new(m.clone(), tol)
}

/// `R(X) = (X + X*)/2`.
pub fn real_part(x: &ComplexMatrix) -> Result<HermitianMatrix> {
    x.require_square()?;
    Ok(HermitianMatrix::symmetrize(x))
}

/// `I(X) = (X − X*)/(2i)`, so that `X = R(X) + i·I(X)`.
pub fn imag_part(x: &ComplexMatrix) -> Result<HermitianMatrix> {
    x.require_square()?;
    // (X − X*)/(2i) is the Hermitian part of −iX.
    Ok(HermitianMatrix::symmetrize(&x.scale(-I)))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending with the
/// matching eigenvectors as columns.
///
/// The result is verified; when the tridiagonal solver misses, the spectrum
/// is taken from a Jacobi SVD of the shifted PSD matrix `H + ‖H‖_F I`.
pub fn eigh(h: &HermitianMatrix) -> Result<(Vec<f64>, DMatrix<C64>)> {
    let n = h.dim();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let data = h.as_dmatrix();
    let (values, vectors) = SymmetricEigen::try_new(data.clone(), f64::EPSILON, MAX_SWEEPS)
        .map(|e| (e.eigenvalues.iter().copied().collect::<Vec<f64>>(), e.eigenvectors))
        .filter(|(vals, vecs)| eig_residual_ok(data, vals, vecs))
        .or_else(|| shifted_jacobi_eigh(data).filter(|(vals, vecs)| eig_residual_ok(data, vals, vecs)))
        .ok_or(Error::EigensolverFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let columns = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok((sorted, columns))
}

fn eig_residual_ok(h: &DMatrix<C64>, values: &[f64], vectors: &DMatrix<C64>) -> bool {
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).iter_mut().for_each(|e| *e *= v);
    }
    (h * vectors - scaled).norm() <= SVD_CHECK * h.norm().max(1.0) && unitary_defect(vectors) <= SVD_CHECK
}

fn shifted_jacobi_eigh(h: &DMatrix<C64>) -> Option<(Vec<f64>, DMatrix<C64>)> {
    let n = h.nrows();
    let shift = h.norm();
    let shifted = h + DMatrix::<C64>::identity(n, n) * C64::new(shift, 0.0);
    let (_, sigma, z_adj) = jacobi::svd(&shifted)?;
    Some((sigma.iter().map(|s| s - shift).collect(), z_adj.adjoint()))
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn eigenvalues_desc(h: &HermitianMatrix) -> Result<Vec<f64>> {
    let (mut values, _) = eigh(h)?;
    values.reverse();
    Ok(values)
}

/// Accepted `‖W Σ Z* − M‖_F / max(1, ‖M‖_F)` and unitarity defect.
const SVD_CHECK: f64 = 1e-12;

fn unitary_defect(q: &DMatrix<C64>) -> f64 {
    let n = q.ncols();
    (q.adjoint() * q - DMatrix::<C64>::identity(n, n)).norm()
}

fn verified(m: &DMatrix<C64>, f: (DMatrix<C64>, Vec<f64>, DMatrix<C64>)) -> Option<(DMatrix<C64>, Vec<f64>, DMatrix<C64>)> {
    let (w, sigma, z_adj) = f;
    let mut ws = w.clone();
    for (j, &s) in sigma.iter().enumerate() {
        ws.column_mut(j).iter_mut().for_each(|e| *e *= s);
    }
    let ok = (ws * &z_adj - m).norm() <= SVD_CHECK * m.norm().max(1.0)
        && unitary_defect(&w) <= SVD_CHECK
        && unitary_defect(&z_adj.adjoint()) <= SVD_CHECK;
    ok.then_some((w, sigma, z_adj))
}

fn bidiagonal_svd(m: &DMatrix<C64>) -> Option<(DMatrix<C64>, Vec<f64>, DMatrix<C64>)> {
    let svd = SVD::try_new(m.clone(), true, true, f64::EPSILON, MAX_SWEEPS)?;
    Some((svd.u?, svd.singular_values.iter().copied().collect(), svd.v_t?))
}

/// Full SVD `M = W Σ Z*` of a square matrix; returns `(W, σ descending, Z*)`.
///
/// The bidiagonal routine is tried first. Its complex path can return a
/// wrong factorization on rank-deficient input, so the result is verified
/// and one-sided Jacobi takes over when the check fails.
pub(crate) fn svd_full(m: &ComplexMatrix) -> Result<(DMatrix<C64>, Vec<f64>, DMatrix<C64>)> {
    let data = m.as_dmatrix();
    bidiagonal_svd(data)
        .and_then(|f| verified(data, f))
        .or_else(|| jacobi::svd(data).and_then(|f| verified(data, f)))
        .ok_or(Error::SvdFailure)
}

/// Rebuilds `Q diag(values) Q*`.
pub(crate) fn from_spectrum(vectors: &DMatrix<C64>, values: &[f64]) -> HermitianMatrix {
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    HermitianMatrix::symmetrize(&ComplexMatrix::from_raw(scaled * vectors.adjoint()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    Indefinite,
    NegativeSemidefinite,
    NegativeDefinite,
}

/// Classification of a Hermitian matrix from its extreme eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub verdict: Definiteness,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub tolerance_used: f64,
}

impl PositivityVerdict {
    /// Classifies extreme eigenvalues with the threshold `tol·max(1, ρ)`.
    pub fn classify(min_eigenvalue: f64, max_eigenvalue: f64, tol: f64) -> Self {
        let threshold = tol * max_eigenvalue.abs().max(min_eigenvalue.abs()).max(1.0);
        let verdict = if min_eigenvalue > threshold {
            Definiteness::PositiveDefinite
        } else if min_eigenvalue >= -threshold {
            Definiteness::PositiveSemidefinite
        } else if max_eigenvalue < -threshold {
            Definiteness::NegativeDefinite
        } else if max_eigenvalue <= threshold {
            Definiteness::NegativeSemidefinite
        } else {
            Definiteness::Indefinite
        };
        Self { verdict, min_eigenvalue, max_eigenvalue, tolerance_used: threshold }
    }

    pub fn is_psd(&self) -> bool {
        matches!(self.verdict, Definiteness::PositiveDefinite | Definiteness::PositiveSemidefinite)
    }

    pub fn is_pd(&self) -> bool {
        self.verdict == Definiteness::PositiveDefinite
    }

    pub fn is_nd(&self) -> bool {
        self.verdict == Definiteness::NegativeDefinite
    }
}

/// Positivity verdict from the full spectrum.
pub fn positivity(m: &HermitianMatrix, tol: f64) -> Result<PositivityVerdict> {
    let (values, _) = eigh(m)?;
    let (min, max) = match (values.first(), values.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0.0, 0.0),
    };
    Ok(PositivityVerdict::classify(min, max, tol))
}

/// `|X| = (X*X)^{1/2}`, built from the SVD `X = W Σ Z*` as `Z Σ Z*`.
pub fn matrix_abs(x: &ComplexMatrix) -> Result<HermitianMatrix> {
    x.require_square()?;
    if x.rows() == 0 {
        return Ok(HermitianMatrix::zeros(0));
    }
    let (_, sigma, z_adj) = svd_full(x)?;
    Ok(from_spectrum(&z_adj.adjoint(), &sigma))
}

/// PSD square root by spectral decomposition; tiny negative eigenvalues
/// (within the PSD tolerance) are clamped to zero.
pub fn sqrt_psd(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (values, vectors) = eigh(m)?;
    if let (Some(&lo), Some(&hi)) = (values.first(), values.last()) {
        let verdict = PositivityVerdict::classify(lo, hi, tol::PSD);
        if !verdict.is_psd() {
            return Err(Error::NotPsd { min_eigenvalue: lo });
        }
    }
    let roots: Vec<f64> = values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    Ok(from_spectrum(&vectors, &roots))
}

/// True iff `‖PQ − QP‖_F ≤ tol·max(1, ‖P‖_F‖Q‖_F)`.
pub fn commutes(p: &ComplexMatrix, q: &ComplexMatrix, tol: f64) -> Result<bool> {
    if !p.is_square() || !q.is_square() || p.rows() != q.rows() {
        return Err(Error::DimensionMismatch(format!(
            "commutator of {}x{} and {}x{}",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    let commutator = &(p * q) - &(q * p);
    Ok(commutator.frobenius_norm() <= tol * (p.frobenius_norm() * q.frobenius_norm()).max(1.0))
}

/// Entrywise commutation test against `diag(a)`: every `|x_ij (a_i − a_j)| ≤ tol`.
pub fn commutes_with_diagonal(x: &ComplexMatrix, a: &[f64], tol: f64) -> Result<bool> {
    if !x.is_square() || x.rows() != a.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix against diagonal of length {}",
            x.rows(),
            x.cols(),
            a.len()
        )));
    }
    let n = a.len();
    Ok((0..n).all(|i| (0..n).all(|j| (x.get(i, j) * (a[i] - a[j])).norm() <= tol)))
}

/// Offdiagonal mass relative to `max(1, ‖M‖_F)`.
pub fn is_diagonal(m: &ComplexMatrix, tol: f64) -> bool {
    let off: f64 = (0..m.rows())
        .flat_map(|i| (0..m.cols()).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j).norm_sqr())
        .sum::<f64>()
        .sqrt();
    off <= tol * m.frobenius_norm().max(1.0)
}

/// `‖X*X − XX*‖_F ≤ tol·max(1, ‖X‖_F²)`.
pub fn is_normal(x: &ComplexMatrix, tol: f64) -> bool {
    x.is_square() && {
        let xa = x.adjoint();
        (&(&xa * x) - &(x * &xa)).frobenius_norm() <= tol * x.frobenius_norm().powi(2).max(1.0)
    }
}

/// `‖X − X*‖_F ≤ tol·max(1, ‖X‖_F)`.
pub fn is_hermitian(x: &ComplexMatrix, tol: f64) -> bool {
    x.is_square() && (x - &x.adjoint()).frobenius_norm() <= tol * x.frobenius_norm().max(1.0)
}

/// Determinant via LU.
pub fn determinant(m: &ComplexMatrix) -> Result<C64> {
    m.require_square()?;
    Ok(m.as_dmatrix().clone().determinant())
}

/// Deterministic generator used by every ensemble.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex standard normal (`E|g|² = 1`).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let entries: Vec<C64> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    ComplexMatrix::from_raw(DMatrix::from_row_slice(rows, cols, &entries))
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_gaussian(n, n, rng).into_dmatrix();
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q.column_mut(j).iter_mut().for_each(|e| *e *= phase);
    }
    ComplexMatrix::from_raw(q)
}

/// Random PSD `G*G` from a complex Gaussian `G`, drawn from `rng`.
pub fn random_psd_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let g = random_gaussian(n, n, rng);
    HermitianMatrix::symmetrize(&(&g.adjoint() * &g))
}

/// Complex Wishart sample `G*G`; the same seed gives a bitwise-identical matrix.
pub fn random_psd(n: usize, seed: u64) -> HermitianMatrix {
    random_psd_with(n, &mut seeded_rng(seed))
}
