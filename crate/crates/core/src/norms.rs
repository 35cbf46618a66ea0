//! Singular spectra, Ky Fan / Schatten norms and Fan dominance.
//!
//! A symmetric (unitarily invariant) norm inequality `‖L‖ ≤ ‖R‖` holds for
//! every symmetric norm exactly when `‖L‖_k ≤ ‖R‖_k` for every Ky Fan
//! k-norm. [`dominance`] checks all k at once and keeps the per-k margins.
//!
//! Spectra of different lengths are compared after zero-padding the shorter
//! one, which is the embedding `‖A‖ = ‖A ⊕ 0‖`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::svd_full;
use crate::matrix::ComplexMatrix;

/// Descending, nonnegative singular values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    /// Sorts descending and clamps negatives (rounding noise) to zero.
    pub fn new(mut values: Vec<f64>) -> Self {
        for v in &mut values {
            *v = v.max(0.0);
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of the `k` largest values; indices past the end count as zero.
    pub fn ky_fan(&self, k: usize) -> f64 {
        self.values.iter().take(k).sum()
    }

    /// All partial sums `‖·‖_1, …, ‖·‖_len` padded with the total up to `len`.
    pub fn ky_fan_profile(&self, len: usize) -> Vec<f64> {
        let mut acc = 0.0;
        (0..len)
            .map(|k| {
                acc += self.values.get(k).copied().unwrap_or(0.0);
                acc
            })
            .collect()
    }

    pub fn spectral(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn schatten(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidP(p));
        }
        if p.is_infinite() {
            return Ok(self.spectral());
        }
        let top = self.spectral();
        if top == 0.0 {
            return Ok(0.0);
        }
        // Scale by the largest value to stay finite for large p.
        Ok(top * self.values.iter().map(|v| (v / top).powf(p)).sum::<f64>().powf(1.0 / p))
    }
}

/// Singular values of `m`, descending.
pub fn singular_values(m: &ComplexMatrix) -> Result<SingularSpectrum> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(SingularSpectrum::new(Vec::new()));
    }
    // rectangular inputs are padded to square; zeros leave the spectrum unchanged
    let n = m.rows().max(m.cols());
    let square = if m.is_square() {
        m.clone()
    } else {
        let (r, c) = (m.rows(), m.cols());
        ComplexMatrix::from_blocks(
            m,
            &ComplexMatrix::zeros(r, n - c),
            &ComplexMatrix::zeros(n - r, c),
            &ComplexMatrix::zeros(n - r, n - c),
        )?
    };
    let (_, sigma, _) = svd_full(&square)?;
    Ok(SingularSpectrum::new(sigma))
}

/// Ky Fan k-norm: the sum of the `k` largest singular values.
pub fn ky_fan(m: &ComplexMatrix, k: usize) -> Result<f64> {
    Ok(singular_values(m)?.ky_fan(k))
}

pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.spectral())
}

/// Entrywise ℓ₂ norm; equals the ℓ₂ norm of the singular values.
pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm()
}

/// Schatten p-norm, `p ≥ 1`; `p = ∞` gives the spectral norm.
pub fn schatten(m: &ComplexMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidP(p));
    }
    singular_values(m)?.schatten(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceVerdict {
    /// Every margin is within tolerance of zero.
    Equal,
    /// `lhs_k < rhs_k − tol` at every k.
    StrictlyDominatedBy,
    /// `lhs_k ≤ rhs_k + tol` at every k.
    Dominated,
    /// `lhs_k > rhs_k + tol` at every k.
    StrictlyDominates,
    /// `lhs_k ≥ rhs_k − tol` at every k.
    Dominates,
    Incomparable,
}

impl DominanceVerdict {
    /// True when `‖L‖ ≤ ‖R‖` for every symmetric norm.
    pub fn lhs_le_rhs(self) -> bool {
        matches!(self, Self::Equal | Self::Dominated | Self::StrictlyDominatedBy)
    }

    /// True when `‖L‖ ≥ ‖R‖` for every symmetric norm.
    pub fn lhs_ge_rhs(self) -> bool {
        matches!(self, Self::Equal | Self::Dominates | Self::StrictlyDominates)
    }
}

/// Per-k comparison of `L` (lhs) against `R` (rhs).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub k_norms_lhs: Vec<f64>,
    pub k_norms_rhs: Vec<f64>,
    /// `rhs_k − lhs_k`.
    pub margins: Vec<f64>,
    pub verdict: DominanceVerdict,
    pub tolerance: f64,
}

impl DominanceReport {
    pub fn from_spectra(lhs: &SingularSpectrum, rhs: &SingularSpectrum, tol: f64) -> Self {
        let len = lhs.len().max(rhs.len());
        let k_norms_lhs = lhs.ky_fan_profile(len);
        let k_norms_rhs = rhs.ky_fan_profile(len);
        let margins: Vec<f64> = k_norms_rhs.iter().zip(&k_norms_lhs).map(|(r, l)| r - l).collect();
        let verdict = Self::classify(&margins, tol);
        Self { k_norms_lhs, k_norms_rhs, margins, verdict, tolerance: tol }
    }

    /// Recomputes the verdict from margins and tolerance.
    pub fn classify(margins: &[f64], tol: f64) -> DominanceVerdict {
        let all = |pred: &dyn Fn(f64) -> bool| margins.iter().all(|&m| pred(m));
        if all(&|m| m.abs() <= tol) {
            DominanceVerdict::Equal
        } else if all(&|m| m > tol) {
            DominanceVerdict::StrictlyDominatedBy
        } else if all(&|m| m >= -tol) {
            DominanceVerdict::Dominated
        } else if all(&|m| m < -tol) {
            DominanceVerdict::StrictlyDominates
        } else if all(&|m| m <= tol) {
            DominanceVerdict::Dominates
        } else {
            DominanceVerdict::Incomparable
        }
    }

    /// `lhs_k − rhs_k`, the amount by which the left side exceeds the right.
    pub fn excess(&self) -> Vec<f64> {
        self.margins.iter().map(|m| -m).collect()
    }

    /// Smallest margin and the (1-based) k where it occurs.
    pub fn worst_margin(&self) -> Option<(usize, f64)> {
        self.margins
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, m)| (i + 1, m))
    }

    /// One row per k: `k,lhs,rhs,margin`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,lhs,rhs,margin\n");
        for (i, ((l, r), m)) in self.k_norms_lhs.iter().zip(&self.k_norms_rhs).zip(&self.margins).enumerate() {
            let _ = writeln!(out, "{},{l:e},{r:e},{m:e}", i + 1);
        }
        out
    }
}

/// Ky Fan dominance of `lhs` against `rhs` for k = 1..max(len).
pub fn dominance(lhs: &ComplexMatrix, rhs: &ComplexMatrix, tol: f64) -> Result<DominanceReport> {
    Ok(DominanceReport::from_spectra(&singular_values(lhs)?, &singular_values(rhs)?, tol))
}
