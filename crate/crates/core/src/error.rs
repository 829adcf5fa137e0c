use thiserror::Error;

/// Errors raised by the exact algebra and the range engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at position {position} in {input:?}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("constant polynomial not allowed here")]
    ConstantPolynomial,

    #[error("division is not exact")]
    NonExactDivision,

    #[error("polynomial of degree {0} has no critical values")]
    NoCriticalValues(usize),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular")]
    Singular,

    #[error("spectrum not in Q(i): irreducible factors of degree {remaining_degrees:?} remain")]
    SpectrumNotInQi { remaining_degrees: Vec<usize> },

    #[error("witness unavailable over Q(i): {0}")]
    WitnessUnavailable(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(input: &str, position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            position,
            message: message.into(),
        }
    }

    /// Stable short name for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::Parse { .. } => "parse",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::ConstantPolynomial => "constant_function",
            Error::NonExactDivision => "non_exact_division",
            Error::NoCriticalValues(_) => "no_critical_values",
            Error::InvalidFunction(_) => "invalid_function",
            Error::Dimension(_) => "dimension",
            Error::Singular => "singular",
            Error::SpectrumNotInQi { .. } => "spectrum_not_in_qi",
            Error::WitnessUnavailable(_) => "witness_unavailable",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
