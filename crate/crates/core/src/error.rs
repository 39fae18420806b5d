use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("unsupported coefficient field: {0}")]
    UnsupportedCoefficientField(String),
    #[error("unsupported residue field: {0}")]
    UnsupportedResidueField(String),
    #[error("descent stuck: {0}")]
    DescentStuck(String),
    #[error("class is not tame at {0}")]
    NotTame(String),
    #[error("ramification at a non-rational place {0}")]
    NonRationalRamification(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("singular form: {0}")]
    SingularForm(String),
    #[error("odd dimension: {0}")]
    OddDimension(String),
    #[error("even dimension: {0}")]
    EvenDimension(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("bad index: {0}")]
    BadIndex(String),
    #[error("move B needs a nonzero scalar")]
    ZeroBeta,
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
    #[error("side condition violated: {0}")]
    SideConditionViolated(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("splitting budget exceeded: {0}")]
    SplittingBudgetExceeded(String),
    #[error("divided powers of odd degree classes need p = 2")]
    UnsupportedParity,
    #[error("parse error in <{production}>: {message}")]
    Parse { production: &'static str, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(production: &'static str, message: impl Into<String>) -> Error {
        Error::Parse { production, message: message.into() }
    }
}
