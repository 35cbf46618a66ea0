//! Default tolerances. Every routine that takes a tolerance argument also
//! has a default here; nothing else in the crate uses a bare literal.

/// Relative anti-Hermitian residue accepted by [`crate::linalg::hermitize`].
pub const HERMITIAN: f64 = 1e-10;

/// An eigenvalue `λ` counts as nonnegative iff `λ ≥ −PSD·max(1, ρ)` where
/// `ρ` is the spectral radius.
pub const PSD: f64 = 1e-10;

/// Absolute slack on Ky Fan comparisons; strictness requires margins beyond it.
pub const DOMINANCE: f64 = 1e-9;

/// Relative commutator size accepted as "commutes".
pub const COMMUTE: f64 = 1e-10;

/// Relative slack used for diagonality and normality hypothesis checks.
pub const STRUCTURE: f64 = 1e-10;

/// Relative tolerance under which two diagonal entries are grouped as equal.
pub const GROUPING: f64 = 1e-9;

/// Relative reconstruction residual accepted for a decomposition.
pub const RECONSTRUCTION: f64 = 1e-10;

/// `‖U*U − I‖_F` accepted for a recovered unitary.
pub const UNITARY: f64 = 1e-10;
