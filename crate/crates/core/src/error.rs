use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EdmError {
    #[error("region has {sites} sites, enumeration cap is {cap}")]
    RegionTooLarge { sites: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("every configuration has infinite energy (Z = 0)")]
    InfeasibleSystem,

    #[error("potential is not admissible: C(0) = {lhs} < {rhs}")]
    InadmissiblePotential { lhs: f64, rhs: f64 },

    #[error("product moment {0} is not positive")]
    NonpositiveMoment(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("variance {0} must be below 1")]
    InvalidVariance(f64),

    #[error("polynomial exceeds limit: {0}")]
    DegreeOverflow(String),

    #[error("Hermite support {support} exceeds truncation {truncation}")]
    TruncationOverflow { support: usize, truncation: usize },

    #[error("power iteration did not converge after {iters} iterations (best estimate {best})")]
    NotConverged { best: f64, iters: usize },
}

pub type Result<T> = std::result::Result<T, EdmError>;
