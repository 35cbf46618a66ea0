//! Positivity and norm-inequality criteria for block matrices.
//!
//! The central question is whether `‖M‖ ≤ ‖A + B‖` in every symmetric norm.
//! [`check_main_inequality`] answers it by Ky Fan dominance and records which
//! structural hypotheses (Hermitian `X`, diagonal blocks, commutation,
//! normality) the input satisfies, so a report says both what holds and why
//! it was expected to.

use nalgebra::Cholesky;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    commutes, commutes_with_diagonal, determinant, eigenvalues_desc, eigh, imag_part, is_diagonal,
    is_hermitian, is_normal, positivity, real_part, PositivityVerdict,
};
use crate::matrix::{ComplexMatrix, HermitianMatrix, PsdBlockMatrix, C64};
use crate::norms::{dominance, DominanceReport};
use crate::tol;

pub const X_HERMITIAN: &str = "x_hermitian";
pub const A_DIAGONAL: &str = "a_diagonal";
pub const B_DIAGONAL: &str = "b_diagonal";
pub const XSTARX_DIAGONAL: &str = "xstarx_diagonal";
pub const XSTAR_COMMUTES_A: &str = "xstar_commutes_a";
pub const X_COMMUTES_B: &str = "x_commutes_b";
pub const X_NORMAL: &str = "x_normal";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
}

/// Which sufficient condition for `‖M‖ ≤ ‖A+B‖` the input matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchedTheorem {
    /// `X` Hermitian.
    HermitianOffDiagonal,
    /// `A`, `B` diagonal, `X*` commutes with `A`, `X*X` diagonal.
    DiagonalCommutingGram,
    /// `A`, `B` diagonal and `X*` commutes with `A` (or `X` with `B`).
    DiagonalCommuting,
    /// `X` normal, `X*` commutes with `A`, `X` commutes with `B`.
    NormalCommuting,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub hypothesis_checks: Vec<HypothesisCheck>,
    /// `M` against `A + B`, zero-padded.
    pub dominance: DominanceReport,
    pub theorem_applies: bool,
    pub matched_theorem: Option<MatchedTheorem>,
    pub conclusion_holds: bool,
}

impl InequalityReport {
    fn new(hypotheses: Hypotheses, dominance: DominanceReport, matched: Option<MatchedTheorem>) -> Self {
        let conclusion_holds = dominance.verdict.lhs_le_rhs();
        Self {
            hypothesis_checks: hypotheses.checks(),
            dominance,
            theorem_applies: matched.is_some(),
            matched_theorem: matched,
            conclusion_holds,
        }
    }

    pub fn hypothesis(&self, name: &str) -> Option<bool> {
        self.hypothesis_checks.iter().find(|h| h.name == name).map(|h| h.holds)
    }
}

#[derive(Clone, Copy, Debug)]
struct Hypotheses {
    x_hermitian: bool,
    a_diagonal: bool,
    b_diagonal: bool,
    xstarx_diagonal: bool,
    xstar_commutes_a: bool,
    x_commutes_b: bool,
    x_normal: bool,
}

impl Hypotheses {
    fn of(m: &PsdBlockMatrix) -> Result<Self> {
        let (a, x, b) = (m.a().matrix(), m.x(), m.b().matrix());
        let xs = x.adjoint();
        Ok(Self {
            x_hermitian: is_hermitian(x, tol::STRUCTURE),
            a_diagonal: is_diagonal(a, tol::STRUCTURE),
            b_diagonal: is_diagonal(b, tol::STRUCTURE),
            xstarx_diagonal: is_diagonal(&(&xs * x), tol::STRUCTURE),
            xstar_commutes_a: commutes(&xs, a, tol::COMMUTE)?,
            x_commutes_b: commutes(x, b, tol::COMMUTE)?,
            x_normal: is_normal(x, tol::STRUCTURE),
        })
    }

    /// Strongest matched set, tried in a fixed order.
    fn matched(&self) -> Option<MatchedTheorem> {
        let diagonal = self.a_diagonal && self.b_diagonal;
        if self.x_hermitian {
            Some(MatchedTheorem::HermitianOffDiagonal)
        } else if diagonal && self.xstar_commutes_a && self.xstarx_diagonal {
            Some(MatchedTheorem::DiagonalCommutingGram)
        } else if diagonal && (self.xstar_commutes_a || self.x_commutes_b) {
            Some(MatchedTheorem::DiagonalCommuting)
        } else if self.normal_case() {
            Some(MatchedTheorem::NormalCommuting)
        } else {
            None
        }
    }

    fn normal_case(&self) -> bool {
        self.x_normal && self.xstar_commutes_a && self.x_commutes_b
    }

    fn checks(&self) -> Vec<HypothesisCheck> {
        [
            (X_HERMITIAN, self.x_hermitian),
            (A_DIAGONAL, self.a_diagonal),
            (B_DIAGONAL, self.b_diagonal),
            (XSTARX_DIAGONAL, self.xstarx_diagonal),
            (XSTAR_COMMUTES_A, self.xstar_commutes_a),
            (X_COMMUTES_B, self.x_commutes_b),
            (X_NORMAL, self.x_normal),
        ]
        .into_iter()
        .map(|(name, holds)| HypothesisCheck { name: name.to_string(), holds })
        .collect()
    }
}

fn main_dominance(m: &PsdBlockMatrix) -> Result<DominanceReport> {
    dominance(m.full().matrix(), m.a_plus_b()?.matrix(), tol::DOMINANCE)
}

/// Checks `‖M‖ ≤ ‖A + B‖` by Ky Fan dominance and reports which sufficient
/// hypotheses hold.
pub fn check_main_inequality(m: &PsdBlockMatrix) -> Result<InequalityReport> {
    m.require_square_blocks()?;
    m.ensure_psd()?;
    let hyp = Hypotheses::of(m)?;
    Ok(InequalityReport::new(hyp, main_dominance(m)?, hyp.matched()))
}

/// Same check restricted to the normal-`X` commuting hypothesis set.
pub fn verify_commuting_normal_case(m: &PsdBlockMatrix) -> Result<InequalityReport> {
    m.require_square_blocks()?;
    m.ensure_psd()?;
    let hyp = Hypotheses::of(m)?;
    let matched = hyp.normal_case().then_some(MatchedTheorem::NormalCommuting);
    Ok(InequalityReport::new(hyp, main_dominance(m)?, matched))
}

/// `A − X B⁻¹ X*`; `B` must be positive definite.
pub fn schur_complement(a: &HermitianMatrix, x: &ComplexMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if x.rows() != a.dim() || x.cols() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "X is {}x{} but A is {2}x{2} and B is {3}x{3}",
            x.rows(),
            x.cols(),
            a.dim(),
            b.dim()
        )));
    }
    if !positivity(b, tol::PSD)?.is_pd() {
        return Err(Error::BNotInvertible);
    }
    let chol = Cholesky::new(b.as_dmatrix().clone()).ok_or(Error::BNotInvertible)?;
    let solved = chol.solve(&x.adjoint().into_dmatrix());
    let correction = ComplexMatrix::from_raw(x.as_dmatrix() * solved);
    Ok(HermitianMatrix::symmetrize(&(a.matrix() - &correction)))
}

/// Positivity of `[[A, X], [X*, B]]` through the Schur complement of `B`.
///
/// `strict`: true iff `A − XB⁻¹X*` is positive definite (then `M ≻ 0`).
/// Otherwise: true iff the complement is PSD (then `M ⪰ 0`). Both need `B ≻ 0`.
pub fn schur_pd_test(a: &HermitianMatrix, x: &ComplexMatrix, b: &HermitianMatrix, strict: bool) -> Result<bool> {
    let complement = schur_complement(a, x, b)?;
    let verdict = positivity(&complement, tol::PSD)?;
    Ok(if strict { verdict.is_pd() } else { verdict.is_psd() })
}

/// `det [[A, B], [C, D]] = det(AD − CB)` when `AC = CA`.
pub fn block_det(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, d: &ComplexMatrix) -> Result<C64> {
    let n = a.rows();
    if [a, b, c, d].iter().any(|blk| blk.rows() != n || blk.cols() != n) {
        return Err(Error::DimensionMismatch("block_det needs four square blocks of equal size".into()));
    }
    if !commutes(a, c, tol::COMMUTE)? {
        return Err(Error::CommutationViolated("AC != CA".into()));
    }
    determinant(&(&(a * d) - &(c * b)))
}

/// Roots of `(λ − μ)(ν − μ) − d = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticPair {
    pub lambda_i: f64,
    pub nu_i: f64,
    pub d_i: f64,
    /// Larger root.
    pub root_a: f64,
    pub root_b: f64,
}

impl QuadraticPair {
    pub fn solve(lambda_i: f64, nu_i: f64, d_i: f64) -> Self {
        let sum = lambda_i + nu_i;
        let gap = lambda_i - nu_i;
        // discriminant (λ+ν)² − 4(λν − d) rewritten without cancellation
        let root = (gap * gap + 4.0 * d_i).sqrt();
        Self { lambda_i, nu_i, d_i, root_a: 0.5 * (sum + root), root_b: 0.5 * (sum - root) }
    }
}

/// Eigenvalues of `[[diag(λ), X], [X*, diag(ν)]]` when `X*X = diag(d)` and
/// `X*` commutes with `diag(λ)`, one quadratic per index.
pub fn pww_eigenvalues(lambda: &[f64], nu: &[f64], d: &[f64]) -> Result<Vec<QuadraticPair>> {
    if lambda.len() != nu.len() || lambda.len() != d.len() {
        return Err(Error::LengthMismatch(format!(
            "lambda {}, nu {}, d {}",
            lambda.len(),
            nu.len(),
            d.len()
        )));
    }
    if let Some((index, &value)) = d.iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::NegativeD { index, value });
    }
    Ok(lambda.iter().zip(nu).zip(d).map(|((&l, &n), &di)| QuadraticPair::solve(l, n, di)).collect())
}

/// All roots, descending.
pub fn pooled_roots(pairs: &[QuadraticPair]) -> Vec<f64> {
    let mut roots: Vec<f64> = pairs.iter().flat_map(|p| [p.root_a, p.root_b]).collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

/// One group of equal diagonal entries of `A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupCheck {
    pub value: f64,
    pub indices: Vec<usize>,
    pub psd: bool,
    /// `M_G` against `value·I + diag(ν_G)`.
    pub dominance: DominanceReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuredReport {
    /// Grouping order of the first `n` coordinates.
    pub permutation: Vec<usize>,
    /// `(P ⊕ P) M (P ⊕ P)ᵀ`.
    pub permuted: HermitianMatrix,
    pub groups: Vec<GroupCheck>,
    /// Eigenvalues of the group blocks pooled equal those of `M`.
    pub pooled_spectrum_matches: bool,
    pub report: InequalityReport,
}

/// Stable grouping of equal diagonal entries (relative tolerance).
pub fn group_equal_entries(values: &[f64]) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g) if {
                let v = values[g[0]];
                (values[i] - v).abs() <= tol::GROUPING * v.abs().max(1.0)
            } =>
            {
                g.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }
    (order, groups)
}

/// Verifies `‖M‖ ≤ ‖A+B‖` for diagonal `A = diag(a)`, `B = diag(ν)` and `X*`
/// commuting with `A`, by splitting `M` into the blocks coupled through `X`.
pub fn check_structured_inequality(a_diag: &[f64], nu: &[f64], x: &ComplexMatrix) -> Result<StructuredReport> {
    let n = a_diag.len();
    if nu.len() != n || x.rows() != n || x.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "a has {n} entries, nu {}, X is {}x{}",
            nu.len(),
            x.rows(),
            x.cols()
        )));
    }
    let scale = x.frobenius_norm() * a_diag.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !commutes_with_diagonal(&x.adjoint(), a_diag, tol::COMMUTE * scale.max(1.0))? {
        return Err(Error::CommutationViolated("X* does not commute with diag(a)".into()));
    }
    let block = PsdBlockMatrix::assemble(
        HermitianMatrix::from_real_diagonal(a_diag),
        x.clone(),
        HermitianMatrix::from_real_diagonal(nu),
    )?;
    block.ensure_psd()?;
    let full = block.full();

    let (order, groups) = group_equal_entries(a_diag);
    let mut permuted_idx = order.clone();
    permuted_idx.extend(order.iter().map(|&i| i + n));
    let permuted = full.principal_submatrix(&permuted_idx);

    let mut group_checks = Vec::with_capacity(groups.len());
    let mut pooled = Vec::with_capacity(2 * n);
    for g in groups {
        let mut idx = g.clone();
        idx.extend(g.iter().map(|&i| i + n));
        let sub = full.principal_submatrix(&idx);
        let (values, _) = eigh(&sub)?;
        pooled.extend_from_slice(&values);
        let value = a_diag[g[0]];
        let nu_g: Vec<f64> = g.iter().map(|&i| value + nu[i]).collect();
        let bound = ComplexMatrix::from_real_diagonal(&nu_g);
        let psd = positivity(&sub, tol::PSD)?.is_psd();
        group_checks.push(GroupCheck {
            value,
            indices: g,
            psd,
            dominance: dominance(sub.matrix(), &bound, tol::DOMINANCE)?,
        });
    }
    pooled.sort_by(|a, b| b.total_cmp(a));
    let whole = eigenvalues_desc(&full)?;
    let spread = whole.first().map_or(1.0, |v| v.abs().max(1.0));
    let pooled_spectrum_matches = pooled.iter().zip(&whole).all(|(p, w)| (p - w).abs() <= 1e-9 * spread);

    let hyp = Hypotheses::of(&block)?;
    let report = InequalityReport::new(hyp, main_dominance(&block)?, hyp.matched());
    Ok(StructuredReport { permutation: order, permuted, groups: group_checks, pooled_spectrum_matches, report })
}

/// Unitaries with `U A U* = D_o`, `V B V* = G_o`, both diagonals descending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderedDiagonalization {
    #[serde(rename = "U")]
    pub u: ComplexMatrix,
    #[serde(rename = "V")]
    pub v: ComplexMatrix,
    pub d_o: Vec<f64>,
    pub g_o: Vec<f64>,
}

impl OrderedDiagonalization {
    pub fn d_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.d_o)
    }

    pub fn g_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.g_o)
    }
}

fn descending_diagonalizer(h: &HermitianMatrix) -> Result<(ComplexMatrix, Vec<f64>)> {
    let (mut values, vectors) = eigh(h)?;
    values.reverse();
    let n = h.dim();
    let q = nalgebra::DMatrix::from_fn(n, n, |r, c| vectors[(r, n - 1 - c)]);
    Ok((ComplexMatrix::from_raw(q.adjoint()), values))
}

pub fn ordered_diagonalization(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<OrderedDiagonalization> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("A is {0}x{0}, B is {1}x{1}", a.dim(), b.dim())));
    }
    for h in [a, b] {
        let v = positivity(h, tol::PSD)?;
        if !v.is_psd() {
            return Err(Error::NotPsd { min_eigenvalue: v.min_eigenvalue });
        }
    }
    let (u, d_o) = descending_diagonalizer(a)?;
    let (v, g_o) = descending_diagonalizer(b)?;
    Ok(OrderedDiagonalization { u, v, d_o, g_o })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefiniteFlags {
    pub real_positive: bool,
    pub real_negative: bool,
    pub imag_positive: bool,
    pub imag_negative: bool,
}

impl DefiniteFlags {
    pub fn any(&self) -> bool {
        self.real_positive || self.real_negative || self.imag_positive || self.imag_negative
    }
}

/// Positivity of `[[A, X], [X*, 0]]` together with the definiteness of `R(X)`, `I(X)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroBlockVerdict {
    pub is_psd: bool,
    pub offdiag_norm: f64,
    pub definite_flags: DefiniteFlags,
    pub positivity: PositivityVerdict,
}

pub fn definite_flags(x: &ComplexMatrix) -> Result<DefiniteFlags> {
    let r = positivity(&real_part(x)?, tol::PSD)?;
    let i = positivity(&imag_part(x)?, tol::PSD)?;
    Ok(DefiniteFlags {
        real_positive: r.is_pd(),
        real_negative: r.is_nd(),
        imag_positive: i.is_pd(),
        imag_negative: i.is_nd(),
    })
}

pub fn zero_block_verdict(a: &HermitianMatrix, x: &ComplexMatrix) -> Result<ZeroBlockVerdict> {
    if !x.is_square() || x.rows() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "X is {}x{} but A is {2}x{2}",
            x.rows(),
            x.cols(),
            a.dim()
        )));
    }
    let va = positivity(a, tol::PSD)?;
    if !va.is_psd() {
        return Err(Error::NotPsd { min_eigenvalue: va.min_eigenvalue });
    }
    let block = PsdBlockMatrix::assemble(a.clone(), x.clone(), HermitianMatrix::zeros(a.dim()))?;
    let verdict = positivity(&block.full(), tol::PSD)?;
    Ok(ZeroBlockVerdict {
        is_psd: verdict.is_psd(),
        offdiag_norm: x.frobenius_norm(),
        definite_flags: definite_flags(x)?,
        positivity: verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_c, example_mx, example_ny, random_commuting_normal_instance};
    use crate::linalg::{random_gaussian, random_psd, seeded_rng};
    use crate::matrix::{I, ONE, ZERO};
    use crate::norms::{singular_values, DominanceVerdict};
    use proptest::prelude::*;

    fn scalar(v: f64) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(&[v])
    }

    fn cscalar(v: f64) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[v])
    }

    /// Laplace expansion along the first row.
    fn cofactor_det(m: &ComplexMatrix) -> C64 {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0);
        }
        (0..n)
            .map(|j| {
                let rows: Vec<usize> = (1..n).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = ComplexMatrix::from_raw(nalgebra::DMatrix::from_fn(n - 1, n - 1, |r, c| {
                    m.get(rows[r], cols[c])
                }));
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                m.get(0, j) * cofactor_det(&minor) * sign
            })
            .sum()
    }

    #[test]
    fn schur_scalar_examples() {
        assert!(schur_pd_test(&scalar(2.0), &cscalar(1.0), &scalar(1.0), true).unwrap());
        assert!(!schur_pd_test(&scalar(1.0), &cscalar(2.0), &scalar(1.0), true).unwrap());
        assert!(!schur_pd_test(&scalar(1.0), &cscalar(2.0), &scalar(1.0), false).unwrap());
        // boundary: complement exactly zero
        assert!(!schur_pd_test(&scalar(1.0), &cscalar(1.0), &scalar(1.0), true).unwrap());
        assert!(schur_pd_test(&scalar(1.0), &cscalar(1.0), &scalar(1.0), false).unwrap());
    }

    #[test]
    fn schur_on_example_c() {
        let c = example_c();
        assert!(schur_pd_test(c.a(), c.x(), c.b(), true).unwrap());
    }

    #[test]
    fn schur_errors() {
        assert_eq!(schur_pd_test(&scalar(1.0), &cscalar(1.0), &scalar(0.0), true), Err(Error::BNotInvertible));
        assert!(matches!(
            schur_pd_test(&scalar(1.0), &ComplexMatrix::zeros(1, 2), &scalar(1.0), true),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn block_det_examples() {
        let d = block_det(&cscalar(2.0), &cscalar(3.0), &cscalar(5.0), &cscalar(7.0)).unwrap();
        assert!((d - C64::new(2.0 * 7.0 - 5.0 * 3.0, 0.0)).norm() < 1e-14);

        let a = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        let c = ComplexMatrix::from_real_diagonal(&[3.0, 4.0]);
        let b = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let dd = ComplexMatrix::from_real_diagonal(&[5.0, 6.0]);
        let full = ComplexMatrix::from_blocks(&a, &b, &c, &dd).unwrap();
        let oracle = cofactor_det(&full);
        assert!((oracle - C64::new(48.0, 0.0)).norm() < 1e-12);
        assert!((block_det(&a, &b, &c, &dd).unwrap() - oracle).norm() < 1e-12);

        let mut rng = seeded_rng(3);
        let a = random_gaussian(3, 3, &mut rng);
        let dd = random_gaussian(3, 3, &mut rng);
        let b = random_gaussian(3, 3, &mut rng);
        let zero = ComplexMatrix::zeros(3, 3);
        let got = block_det(&a, &b, &zero, &dd).unwrap();
        let want = determinant(&a).unwrap() * determinant(&dd).unwrap();
        assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0));
    }

    #[test]
    fn block_det_rejects_noncommuting() {
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        let c = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(matches!(block_det(&a, &id, &c, &id), Err(Error::CommutationViolated(_))));
        assert!(matches!(
            block_det(&a, &ComplexMatrix::identity(3), &a, &id),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn block_det_matches_cofactor_on_commuting_pairs() {
        let mut rng = seeded_rng(8);
        for _ in 0..40 {
            let z = random_gaussian(2, 2, &mut rng);
            let a = &(&z * &z) + &ComplexMatrix::identity(2);
            let c = &z.scale(C64::new(0.5, -1.0)) + &ComplexMatrix::identity(2).scale(C64::new(2.0, 0.0));
            let b = random_gaussian(2, 2, &mut rng);
            let d = random_gaussian(2, 2, &mut rng);
            let oracle = cofactor_det(&ComplexMatrix::from_blocks(&a, &b, &c, &d).unwrap());
            let got = block_det(&a, &b, &c, &d).unwrap();
            assert!((got - oracle).norm() <= 1e-10 * oracle.norm().max(1.0));
        }
    }

    #[test]
    fn pww_examples() {
        let pairs = pww_eigenvalues(&[0.3, 0.99], &[0.99, 0.5], &[0.25, 0.25]).unwrap();
        let (r1, r2) = (12401f64.sqrt(), 14761f64.sqrt());
        let roots = pooled_roots(&pairs);
        let want = [(149.0 + r1) / 200.0, (129.0 + r2) / 200.0, (149.0 - r1) / 200.0, (129.0 - r2) / 200.0];
        for (g, w) in roots.iter().zip(want) {
            assert!((g - w).abs() < 1e-14);
        }

        let pairs = pww_eigenvalues(&[1.5, -2.0], &[0.25, 3.0], &[0.0, 0.0]).unwrap();
        assert_eq!((pairs[0].root_a, pairs[0].root_b), (1.5, 0.25));
        assert_eq!((pairs[1].root_a, pairs[1].root_b), (3.0, -2.0));

        let p = pww_eigenvalues(&[2.0], &[-1.0], &[3.0]).unwrap()[0];
        let s21 = 21f64.sqrt();
        assert!((p.root_a - (1.0 + s21) / 2.0).abs() < 1e-14);
        assert!((p.root_b - (1.0 - s21) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn pww_errors() {
        assert!(matches!(pww_eigenvalues(&[1.0], &[1.0, 2.0], &[0.0]), Err(Error::LengthMismatch(_))));
        assert_eq!(pww_eigenvalues(&[1.0], &[1.0], &[-0.5]), Err(Error::NegativeD { index: 0, value: -0.5 }));
    }

    #[test]
    fn main_inequality_on_mx() {
        let r = check_main_inequality(&example_mx(0.3)).unwrap();
        assert!(r.theorem_applies);
        assert_eq!(r.matched_theorem, Some(MatchedTheorem::DiagonalCommutingGram));
        assert_eq!(r.dominance.verdict, DominanceVerdict::Dominated);
        assert!(r.conclusion_holds);
    }

    #[test]
    fn main_inequality_on_c() {
        let r = check_main_inequality(&example_c()).unwrap();
        assert!(!r.theorem_applies);
        assert_eq!(r.dominance.verdict, DominanceVerdict::Incomparable);
        assert!(r.dominance.margins[0] < 0.0);
        assert!(!r.conclusion_holds);
        assert_eq!(r.hypothesis(XSTAR_COMMUTES_A), Some(false));
    }

    #[test]
    fn main_inequality_on_ny() {
        let m = example_ny(0.5);
        let r = check_main_inequality(&m).unwrap();
        assert!(!r.theorem_applies);
        assert!((r.dominance.k_norms_lhs[0] - 4.0).abs() < 1e-12);
        assert!((r.dominance.k_norms_rhs[0] - 3.0).abs() < 1e-12);
        let fro_m = m.full().frobenius_norm().powi(2);
        let fro_ab = m.a_plus_b().unwrap().frobenius_norm().powi(2);
        assert!((fro_m - 17.25).abs() < 1e-12 && (fro_ab - 15.25).abs() < 1e-12);
    }

    #[test]
    fn main_inequality_errors() {
        let uneven = PsdBlockMatrix::split(&random_psd(5, 1), 2).unwrap();
        assert!(matches!(check_main_inequality(&uneven), Err(Error::BlocksNotSquareEqual { .. })));
        assert!(matches!(check_main_inequality(&example_mx(0.0)), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn hypothesis_names_fixed() {
        let r = check_main_inequality(&example_mx(0.4)).unwrap();
        let names: Vec<&str> = r.hypothesis_checks.iter().map(|h| h.name.as_str()).collect();
        assert_eq!(
            names,
            [X_HERMITIAN, A_DIAGONAL, B_DIAGONAL, XSTARX_DIAGONAL, XSTAR_COMMUTES_A, X_COMMUTES_B, X_NORMAL]
        );
    }

    #[test]
    fn structured_distinct_entries_reduces_to_diagonal() {
        let x = ComplexMatrix::from_diagonal(&[C64::new(0.0, 0.5), C64::new(0.0, -0.5)]);
        let rep = check_structured_inequality(&[0.3, 0.99], &[0.99, 0.5], &x).unwrap();
        assert_eq!(rep.groups.len(), 2);
        assert!(rep.pooled_spectrum_matches);
        assert_eq!(rep.report.matched_theorem, Some(MatchedTheorem::DiagonalCommutingGram));
        assert_eq!(rep.report.dominance.verdict, DominanceVerdict::Dominated);
        assert!(rep.report.dominance.margins[3].abs() < 1e-12);
    }

    #[test]
    fn structured_single_group() {
        let mut rng = seeded_rng(12);
        for _ in 0..50 {
            let a: f64 = 1.0 + rng.random_range(0.0..2.0);
            let nu: [f64; 2] = [rng.random_range(0.5..3.0), rng.random_range(0.5..3.0)];
            // scale X so that the assembled matrix stays PSD
            let g = random_gaussian(2, 2, &mut rng);
            let bound = (a * nu[0].min(nu[1])).sqrt() / g.frobenius_norm().max(1e-12);
            let x = g.scale(C64::new(0.9 * bound, 0.0));
            let rep = check_structured_inequality(&[a, a], &nu, &x).unwrap();
            assert_eq!(rep.groups.len(), 1);
            assert!(rep.groups[0].psd && rep.pooled_spectrum_matches);
            assert!(rep.report.conclusion_holds, "{:?}", rep.report.dominance);
        }
    }

    #[test]
    fn structured_permutation_groups_entries() {
        let a = [2.0, 1.0, 2.0];
        let nu = [1.0, 1.0, 3.0];
        let mut x = nalgebra::DMatrix::from_element(3, 3, ZERO);
        x[(0, 2)] = C64::new(0.3, 0.1);
        x[(2, 0)] = C64::new(-0.2, 0.0);
        x[(1, 1)] = C64::new(0.0, 0.4);
        let x = ComplexMatrix::from_raw(x);
        let rep = check_structured_inequality(&a, &nu, &x).unwrap();
        assert_eq!(rep.permutation, vec![1, 0, 2]);
        assert_eq!(rep.groups.iter().map(|g| g.indices.clone()).collect::<Vec<_>>(), vec![vec![1], vec![0, 2]]);
        assert!(rep.pooled_spectrum_matches);
        assert!(rep.groups.iter().all(|g| g.dominance.verdict.lhs_le_rhs()));
        assert!(rep.report.conclusion_holds);
        assert_eq!(rep.permuted.matrix().get(0, 0), C64::new(1.0, 0.0));
    }

    #[test]
    fn structured_errors() {
        let x = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(matches!(
            check_structured_inequality(&[1.0, 2.0], &[1.0, 1.0], &x),
            Err(Error::CommutationViolated(_))
        ));
        let big = ComplexMatrix::identity(2).scale(C64::new(5.0, 0.0));
        assert!(matches!(
            check_structured_inequality(&[1.0, 1.0], &[1.0, 1.0], &big),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn ordered_diagonalization_examples() {
        let a = HermitianMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let b = HermitianMatrix::from_real_diagonal(&[5.0, 0.0]);
        let od = ordered_diagonalization(&a, &b).unwrap();
        assert!((od.d_o[0] - 3.0).abs() < 1e-14 && (od.d_o[1] - 1.0).abs() < 1e-14);
        assert_eq!(od.g_o, vec![5.0, 0.0]);
        let sum = singular_values(&(&od.d_matrix() + &od.g_matrix())).unwrap();
        assert!((sum.ky_fan(1) - 8.0).abs() < 1e-13 && (sum.ky_fan(2) - 9.0).abs() < 1e-13);
        assert!(a.congruence(&od.u).matrix().approx_eq(&od.d_matrix(), 1e-13));
        assert!(b.congruence(&od.v).matrix().approx_eq(&od.g_matrix(), 1e-13));

        let id = HermitianMatrix::identity(2);
        let od = ordered_diagonalization(&id, &id).unwrap();
        let sum = singular_values(&(&od.d_matrix() + &od.g_matrix())).unwrap();
        assert_eq!((sum.ky_fan(1), sum.ky_fan(2)), (2.0, 4.0));

        let asc = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let od = ordered_diagonalization(&asc, &asc).unwrap();
        assert_eq!(od.d_o, vec![3.0, 2.0, 1.0]);
        for i in 0..3 {
            assert!((od.u.get(i, 2 - i).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn ordered_diagonalization_errors() {
        let neg = HermitianMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(matches!(ordered_diagonalization(&neg, &HermitianMatrix::identity(2)), Err(Error::NotPsd { .. })));
        assert!(matches!(
            ordered_diagonalization(&HermitianMatrix::identity(3), &HermitianMatrix::identity(2)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn normal_case_examples() {
        let r = verify_commuting_normal_case(&example_mx(0.3)).unwrap();
        assert!(r.theorem_applies && r.conclusion_holds);

        for seed in 0..10 {
            let r = verify_commuting_normal_case(&random_commuting_normal_instance(4, seed)).unwrap();
            assert!(r.theorem_applies, "seed {seed}");
            assert!(r.conclusion_holds, "seed {seed}");
        }

        let r = verify_commuting_normal_case(&example_c()).unwrap();
        assert_eq!(r.hypothesis(XSTAR_COMMUTES_A), Some(false));
        assert!(!r.theorem_applies);
    }

    #[test]
    fn zero_block_examples() {
        let a = random_psd(3, 4);
        let v = zero_block_verdict(&a, &ComplexMatrix::zeros(3, 3)).unwrap();
        assert!(v.is_psd && v.offdiag_norm == 0.0 && !v.definite_flags.any());

        let v = zero_block_verdict(&HermitianMatrix::identity(2), &ComplexMatrix::identity(2).scale(I)).unwrap();
        assert!(!v.is_psd);
        assert!(v.definite_flags.imag_positive && !v.definite_flags.imag_negative);

        let a = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        let x = ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(!zero_block_verdict(&a, &x).unwrap().is_psd);

        let neg = HermitianMatrix::from_real_diagonal(&[-1.0]);
        assert!(matches!(zero_block_verdict(&neg, &cscalar(0.0)), Err(Error::NotPsd { .. })));
    }

    use rand::Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn quadratic_pair_invariants(l in -5.0f64..5.0, n in -5.0f64..5.0, d in 0.0f64..10.0) {
            let p = QuadraticPair::solve(l, n, d);
            prop_assert!((p.root_a + p.root_b - (l + n)).abs() <= 1e-12 * (l + n).abs().max(1.0));
            prop_assert!((p.root_a * p.root_b - (l * n - d)).abs() <= 1e-10 * (l * n - d).abs().max(1.0));
            prop_assert!(p.root_a >= p.root_b);
        }

        #[test]
        fn ordered_additivity(n in 1usize..6, seed in any::<u64>()) {
            let a = random_psd(n, seed);
            let b = random_psd(n, seed.wrapping_add(1));
            let od = ordered_diagonalization(&a, &b).unwrap();
            let s = singular_values(&(&od.d_matrix() + &od.g_matrix())).unwrap();
            let (sa, sb) = (singular_values(a.matrix()).unwrap(), singular_values(b.matrix()).unwrap());
            for k in 1..=n {
                prop_assert!((s.ky_fan(k) - sa.ky_fan(k) - sb.ky_fan(k)).abs() <= 1e-9 * s.ky_fan(k).max(1.0));
            }
        }
    }
}
