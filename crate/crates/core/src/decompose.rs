//! Unitary orbit decompositions of PSD block matrices with explicit unitaries.
//!
//! Every routine returns `M = U P U* + V Q V*` where `P` lives on the top-left
//! block and `Q` on the bottom-right block. The unitaries are recovered from
//! the square root `[[C, Y], [Y*, D]]` of `M`: with `T` its top block row and
//! `S` its bottom block row, `M = T*T + S*S`, `TT* = A ⊕ 0` and `SS* = 0 ⊕ B`.
//! If `T = W Σ Z*` then `T*T = (Z W*) (TT*) (Z W*)*`, so `U = Z W*`.
//!
//! The rotated variants conjugate `M` by
//! `J = (1/√2)[[I, −I], [I, I]]` (and by `J₁ = I ⊕ (−i I)` first for the
//! imaginary-part form), decompose there, and rotate the unitaries back.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_desc, imag_part, matrix_abs, real_part, sqrt_psd, svd_full};
use crate::matrix::{ComplexMatrix, HermitianMatrix, PsdBlockMatrix, C64, ONE};
use crate::tol;

/// `M = U P U* + V Q V*` with `P = P_block ⊕ 0` and `Q = 0 ⊕ Q_block`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    #[serde(rename = "U")]
    pub u: ComplexMatrix,
    #[serde(rename = "V")]
    pub v: ComplexMatrix,
    #[serde(rename = "P")]
    pub p: HermitianMatrix,
    #[serde(rename = "Q")]
    pub q: HermitianMatrix,
    /// `‖M − UPU* − VQV*‖_F`.
    pub residual: f64,
}

impl Decomposition {
    fn build(
        m: &HermitianMatrix,
        u: ComplexMatrix,
        v: ComplexMatrix,
        p: HermitianMatrix,
        q: HermitianMatrix,
    ) -> Result<Self> {
        let residual = reconstruction_error(m, &u, &v, &p, &q);
        let dec = Self { u, v, p, q, residual };
        let scale = m.frobenius_norm().max(1.0);
        let (du, dv) = (dec.u.unitarity_defect(), dec.v.unitarity_defect());
        if du > tol::UNITARY || dv > tol::UNITARY || residual > tol::RECONSTRUCTION * scale {
            return Err(Error::UnitaryRecoveryFailure(format!(
                "residual {:.3e}, unitarity defects {du:.3e}/{dv:.3e}",
                residual / scale
            )));
        }
        Ok(dec)
    }

    /// `U P U* + V Q V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.p.congruence(&self.u).into_matrix() + self.q.congruence(&self.v).matrix()
    }

    /// Eigenvalues of the top-left block of `P`, descending.
    pub fn p_block_spectrum(&self, n: usize) -> Result<Vec<f64>> {
        let idx: Vec<usize> = (0..n).collect();
        eigenvalues_desc(&self.p.principal_submatrix(&idx))
    }

    /// Eigenvalues of the bottom-right block of `Q`, descending.
    pub fn q_block_spectrum(&self, n: usize) -> Result<Vec<f64>> {
        let idx: Vec<usize> = (n..self.q.dim()).collect();
        eigenvalues_desc(&self.q.principal_submatrix(&idx))
    }
}

fn reconstruction_error(
    m: &HermitianMatrix,
    u: &ComplexMatrix,
    v: &ComplexMatrix,
    p: &HermitianMatrix,
    q: &HermitianMatrix,
) -> f64 {
    let rebuilt = &p.congruence(u).into_matrix() + q.congruence(v).matrix();
    (m.matrix() - &rebuilt).frobenius_norm()
}

/// Unitary `U` with `U (T T*) U* = T* T`.
fn congruence_unitary(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (w, _, z_adj) = svd_full(t)?;
    Ok(ComplexMatrix::from_raw(z_adj.adjoint() * w.adjoint()))
}

/// Orbit unitaries for a PSD matrix split after `n` rows.
fn orbit_unitaries(m: &HermitianMatrix, n: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let root = sqrt_psd(m)?;
    let total = m.dim();
    let k = total - n;
    let r = root.matrix();
    let top = r.block(0, 0, n, total);
    let bottom = r.block(n, 0, k, total);
    let t = ComplexMatrix::from_blocks(
        &top.block(0, 0, n, n),
        &top.block(0, n, n, k),
        &ComplexMatrix::zeros(k, n),
        &ComplexMatrix::zeros(k, k),
    )?;
    let s = ComplexMatrix::from_blocks(
        &ComplexMatrix::zeros(n, n),
        &ComplexMatrix::zeros(n, k),
        &bottom.block(0, 0, k, n),
        &bottom.block(0, n, k, k),
    )?;
    Ok((congruence_unitary(&t)?, congruence_unitary(&s)?))
}

/// `M = U (A ⊕ 0) U* + V (0 ⊕ B) V*` for any PSD block matrix.
pub fn lemma1_decompose(m: &PsdBlockMatrix) -> Result<Decomposition> {
    m.ensure_psd()?;
    let full = m.full();
    let (u, v) = orbit_unitaries(&full, m.n())?;
    let p = m.a().direct_sum(&HermitianMatrix::zeros(m.m()));
    let q = HermitianMatrix::zeros(m.n()).direct_sum(m.b());
    Decomposition::build(&full, u, v, p, q)
}

/// `J = (1/√2)[[I, −I], [I, I]]`.
pub fn rotation_j(n: usize) -> ComplexMatrix {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let id = ComplexMatrix::identity(n).scale(h);
    ComplexMatrix::from_blocks(&id, &(-&id), &id, &id).expect("square tiles")
}

/// `J₁ = I ⊕ (−i I)`.
pub fn rotation_j1(n: usize) -> ComplexMatrix {
    let mut diag = vec![ONE; n];
    diag.extend(std::iter::repeat_n(C64::new(0.0, -1.0), n));
    ComplexMatrix::from_diagonal(&diag)
}

/// Decomposes `M` after rotating it by `rot`, with prescribed summand blocks
/// (the top-left and bottom-right blocks of `rot M rot*`).
fn rotated_decompose(
    m: &PsdBlockMatrix,
    rot: &ComplexMatrix,
    p_block: HermitianMatrix,
    q_block: HermitianMatrix,
) -> Result<Decomposition> {
    m.ensure_psd()?;
    let full = m.full();
    let n = m.n();
    let rotated = full.congruence(rot);
    let (u_rot, v_rot) = orbit_unitaries(&rotated, n)?;
    let back = rot.adjoint();
    let p = p_block.direct_sum(&HermitianMatrix::zeros(n));
    let q = HermitianMatrix::zeros(n).direct_sum(&q_block);
    Decomposition::build(&full, &back * &u_rot, &back * &v_rot, p, q)
}

/// `(A+B)/2 ∓ R(X)`.
pub fn real_midpoints(m: &PsdBlockMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let half = m.a_plus_b()?.scale(0.5);
    let r = real_part(m.x())?;
    Ok((half.try_sub(&r)?, half.try_add(&r)?))
}

/// `(A+B)/2 ± I(X)`.
pub fn imag_midpoints(m: &PsdBlockMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let half = m.a_plus_b()?.scale(0.5);
    let im = imag_part(m.x())?;
    Ok((half.try_add(&im)?, half.try_sub(&im)?))
}

/// `M = U (((A+B)/2 − R(X)) ⊕ 0) U* + V (0 ⊕ ((A+B)/2 + R(X))) V*`, square blocks.
pub fn corollary_r_decompose(m: &PsdBlockMatrix) -> Result<Decomposition> {
    let n = m.require_square_blocks()?;
    let (minus, plus) = real_midpoints(m)?;
    rotated_decompose(m, &rotation_j(n), minus, plus)
}

/// `M = U (((A+B)/2 + I(X)) ⊕ 0) U* + V (0 ⊕ ((A+B)/2 − I(X))) V*`, square blocks.
pub fn corollary_i_decompose(m: &PsdBlockMatrix) -> Result<Decomposition> {
    let n = m.require_square_blocks()?;
    let (plus, minus) = imag_midpoints(m)?;
    let rot = &rotation_j(n) * &rotation_j1(n);
    rotated_decompose(m, &rot, plus, minus)
}

/// Upper bound `M ≤ ½{U (K ⊕ 0) U* + V (0 ⊕ K) V*}` with `K = A + B + |X − X*|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsBound {
    pub bound_p: HermitianMatrix,
    pub bound_q: HermitianMatrix,
    #[serde(rename = "U")]
    pub u: ComplexMatrix,
    #[serde(rename = "V")]
    pub v: ComplexMatrix,
    /// Eigenvalues of the bound minus `M`, descending.
    pub gap_spectrum: Vec<f64>,
}

impl AbsBound {
    pub fn min_gap(&self) -> f64 {
        self.gap_spectrum.last().copied().unwrap_or(0.0)
    }
}

pub fn corollary_abs_bound(m: &PsdBlockMatrix) -> Result<AbsBound> {
    let n = m.require_square_blocks()?;
    let dec = corollary_i_decompose(m)?;
    let skew = m.x() - &m.x().adjoint();
    let k = m.a_plus_b()?.try_add(&matrix_abs(&skew)?)?;
    let bound_p = k.direct_sum(&HermitianMatrix::zeros(n));
    let bound_q = HermitianMatrix::zeros(n).direct_sum(&k);
    let upper = bound_p.congruence(&dec.u).try_add(&bound_q.congruence(&dec.v))?.scale(0.5);
    let gap = upper.try_sub(&m.full())?;
    Ok(AbsBound { bound_p, bound_q, u: dec.u, v: dec.v, gap_spectrum: eigenvalues_desc(&gap)? })
}

/// Audit of a decomposition against a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    /// `‖M − UPU* − VQV*‖_F / max(1, ‖M‖_F)`.
    pub relative_residual: f64,
    pub unitarity_defect_u: f64,
    pub unitarity_defect_v: f64,
}

impl DecompositionCheck {
    pub fn is_valid(&self) -> bool {
        self.relative_residual <= tol::RECONSTRUCTION
            && self.unitarity_defect_u <= tol::UNITARY
            && self.unitarity_defect_v <= tol::UNITARY
    }
}

pub fn verify_decomposition(m: &PsdBlockMatrix, d: &Decomposition) -> Result<DecompositionCheck> {
    let full = m.full();
    let dim = full.dim();
    for (name, r) in [("U", d.u.rows()), ("V", d.v.rows()), ("P", d.p.dim()), ("Q", d.q.dim())] {
        if r != dim {
            return Err(Error::DimensionMismatch(format!("{name} has dimension {r}, M has {dim}")));
        }
    }
    if !d.u.is_square() || !d.v.is_square() {
        return Err(Error::DimensionMismatch("U and V must be square".into()));
    }
    let residual = reconstruction_error(&full, &d.u, &d.v, &d.p, &d.q);
    Ok(DecompositionCheck {
        relative_residual: residual / full.frobenius_norm().max(1.0),
        unitarity_defect_u: d.u.unitarity_defect(),
        unitarity_defect_v: d.v.unitarity_defect(),
    })
}

/// True when every entry outside the principal window `r0..r0+len` is an exact zero.
#[cfg(test)]
pub(crate) fn supported_on(h: &HermitianMatrix, r0: usize, len: usize) -> bool {
    let n = h.dim();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let inside = (r0..r0 + len).contains(&i) && (r0..r0 + len).contains(&j);
            inside || h.matrix().get(i, j) == crate::matrix::ZERO
        })
    })
}
