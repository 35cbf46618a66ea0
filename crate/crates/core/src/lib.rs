//! Positive semidefinite 2×2 block matrices `M = [[A, X], [X*, B]]`: unitary
//! orbit decompositions, comparisons of `M` against `A + B` in every symmetric
//! norm, and positivity criteria with explicit witnesses.
//!
//! All norm comparisons go through Ky Fan dominance, which decides an
//! inequality for every unitarily invariant norm at once.

pub mod constructions;
pub mod criteria;
pub mod decompose;
pub mod error;
mod jacobi;
pub mod linalg;
pub mod matrix;
pub mod norms;
pub mod sweep;
pub mod tol;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, HermitianMatrix, PsdBlockMatrix, C64};
pub use norms::{DominanceReport, DominanceVerdict, SingularSpectrum};
