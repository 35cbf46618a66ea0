use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix entries must be finite (offending entry at ({row}, {col}))")]
    NonFinite { row: usize, col: usize },

    #[error("anti-Hermitian residue {residue:e} exceeds tolerance {allowed:e}")]
    HermitianResidueTooLarge { residue: f64, allowed: f64 },

    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPd { min_eigenvalue: f64 },

    #[error("Hermitian eigensolver did not converge")]
    EigensolverFailure,

    #[error("singular value decomposition did not converge")]
    SvdFailure,

    #[error("Schatten exponent must satisfy p >= 1, got {0}")]
    InvalidP(f64),

    #[error("unitary recovery failed: {0}")]
    UnitaryRecoveryFailure(String),

    #[error("blocks must be square and of equal size (n = {n}, m = {m})")]
    BlocksNotSquareEqual { n: usize, m: usize },

    #[error("B block is not invertible (positive definite required)")]
    BNotInvertible,

    #[error("commutation hypothesis violated: {0}")]
    CommutationViolated(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("d[{index}] = {value} is negative")]
    NegativeD { index: usize, value: f64 },

    #[error("neither I(X) nor R(X) is definite")]
    PreconditionIXNotDefinite,

    #[error("no multiplier l <= {l_max} gives strict Ky Fan dominance")]
    LMaxExceeded { l_max: u64 },

    #[error("no scaling t <= {t_max} makes F_t positive definite")]
    TMaxExceeded { t_max: u64 },

    #[error("precondition violated at index {index}: {condition}")]
    PreconditionViolated { index: usize, condition: String },

    #[error("unknown sweep suite `{0}`")]
    UnknownSuite(String),

    #[error("invalid sweep configuration: {0}")]
    InvalidSweep(String),
}

impl Error {
    /// True for failures of the numerical kernels themselves rather than of
    /// the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigensolverFailure | Error::SvdFailure | Error::UnitaryRecoveryFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
