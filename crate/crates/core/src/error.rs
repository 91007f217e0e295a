use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A tabulated quantity was requested outside its sampled range.
    #[error("{quantity} = {value:e} outside tabulated range [{min:e}, {max:e}]")]
    OutOfRange {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// Drude parameters with zero relaxation rate: that is the plasma model.
    #[error("degenerate Drude model: {0}")]
    DegenerateModel(String),

    /// Input data failed validation.
    #[error("invalid input: {0}")]
    Validation(String),

    /// A precondition of an approximation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A quadrature or series did not reach its tolerance.
    #[error(
        "numerical failure: {message} (value {value:e}, estimated relative error {rel_error:e})"
    )]
    Numerical {
        message: String,
        value: f64,
        rel_error: f64,
    },

    /// The Matsubara sum hit its term cap before the truncation rule fired.
    #[error("Matsubara sum truncated at m = {terms} (partial value {partial:e})")]
    Truncated { terms: usize, partial: f64 },

    /// A least-squares design matrix does not have full column rank.
    #[error("rank-deficient fit: {0}")]
    RankDeficient(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
