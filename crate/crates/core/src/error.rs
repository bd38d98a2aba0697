use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inf of empty family")]
    EmptyInf,
    #[error("ambient radius must be positive, got {0}")]
    NonPositiveRadius(String),
    #[error("ball radius must be positive, got {0}")]
    NonPositiveBallRadius(String),
    #[error("center not in K_R: |{center}| = {norm} > {bound}")]
    CenterNotInKR {
        center: String,
        norm: String,
        bound: String,
    },
    #[error("limit radius {radius} outside [0, {bound}]")]
    LimitRadiusOutOfRange { radius: String, bound: String },
    #[error("empty chain")]
    EmptyChain,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("t-adic base must satisfy 0 < b < 1, got {0}")]
    InvalidBase(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("factorization required")]
    FactorizationRequired,
    #[error("factorization witness does not expand to the coefficient list")]
    WitnessMismatch,
    #[error("scale factor must be non-negative, got {0}")]
    NegativeScale(String),
    #[error("precision must be positive, got {0}")]
    NonPositivePrecision(String),
    #[error("oracle not a seminorm: {0}")]
    OracleNotSeminorm(String),
    #[error("unclassifiable within bounds: {0}")]
    Unclassifiable(String),
    #[error("not a filter: distinct sub-unit centers {0} and {1}")]
    NotAFilter(String, String),
    #[error("field is not trivially valued")]
    NotTriviallyValued,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable machine-readable code for front ends.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyInf => "empty_inf",
            Error::NonPositiveRadius(_) | Error::NonPositiveBallRadius(_) => "bad_radius",
            Error::CenterNotInKR { .. } => "center_not_in_k_r",
            Error::LimitRadiusOutOfRange { .. } => "bad_limit_radius",
            Error::EmptyChain => "empty_chain",
            Error::NotPrime(_) => "not_prime",
            Error::InvalidBase(_) => "bad_base",
            Error::DivisionByZero => "division_by_zero",
            Error::FactorizationRequired => "factorization_required",
            Error::WitnessMismatch => "witness_mismatch",
            Error::NegativeScale(_) => "negative_scale",
            Error::NonPositivePrecision(_) => "bad_precision",
            Error::OracleNotSeminorm(_) => "oracle_not_seminorm",
            Error::Unclassifiable(_) => "unclassifiable",
            Error::NotAFilter(..) => "not_a_filter",
            Error::NotTriviallyValued => "not_trivially_valued",
            Error::InvalidParameter(_) => "invalid_parameter",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
