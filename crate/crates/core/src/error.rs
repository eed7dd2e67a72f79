use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardyError {
    /// A hypothesis of the selected inequality fails.
    #[error("{form}: {hypothesis} required")]
    Inadmissible { form: String, hypothesis: String },

    #[error("gamma function pole at argument {0}")]
    GammaPole(f64),

    #[error("profile carries derivatives up to order {have}, order {need} requested")]
    OrderTooLow { need: usize, have: usize },

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}")]
    NotConverged { estimate: f64, error: f64 },

    #[error("integral `{0}` diverges")]
    Divergent(String),

    #[error("radius {r} outside the chart domain (0, {limit})")]
    Domain { r: f64, limit: f64 },

    #[error("mesh too coarse: {0}")]
    MeshTooCoarse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, HardyError>;
