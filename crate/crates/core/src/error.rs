use thiserror::Error;

/// Errors produced by the linear algebra, state construction, entropy and
/// threshold-search layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^dagger| = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("eigensolver did not converge within {max_iterations} iterations")]
    NoConvergence { max_iterations: usize },

    #[error("negative power of a singular matrix (eigenvalue {eigenvalue:e} <= support tolerance)")]
    SingularNegativePower { eigenvalue: f64 },

    #[error("subsystem index {index} is invalid for {parties} subsystems")]
    BadSubsystemIndex { index: usize, parties: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the dense construction cap {cap}")]
    DimensionCapExceeded { dim: u64, cap: u64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid entropic index q = {0}")]
    InvalidOrder(f64),

    #[error("criterion has no sign change on [{lo}, {hi}] (values {f_lo:e}, {f_hi:e})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("bisection stopped after {iterations} iterations with bracket width {width:e}")]
    ToleranceNotReached { iterations: usize, width: f64 },

    #[error("operation not supported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Short machine-readable tag, used for per-row failure markers.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "not_hermitian",
            Error::NoConvergence { .. } => "no_convergence",
            Error::SingularNegativePower { .. } => "singular_negative_power",
            Error::BadSubsystemIndex { .. } => "bad_subsystem_index",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DimensionCapExceeded { .. } => "dimension_cap_exceeded",
            Error::NotDensityMatrix(_) => "not_density_matrix",
            Error::InvalidParams(_) => "invalid_params",
            Error::InvalidOrder(_) => "invalid_order",
            Error::NoSignChange { .. } => "no_sign_change",
            Error::ToleranceNotReached { .. } => "tolerance_not_reached",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
