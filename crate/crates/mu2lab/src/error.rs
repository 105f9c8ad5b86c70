use thiserror::Error;

/// Errors surfaced by the exact-arithmetic engine and the classification layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element is not a unit (valuation {0})")]
    NonUnit(u32),
    #[error("not divisible: needed valuation {needed}, element has valuation {have}")]
    NotDivisible { needed: u32, have: u32 },
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("residue field is not finite in this configuration")]
    InfiniteResidueField,
    #[error("non-integral coefficient produced where an integral one was required: {0}")]
    NonIntegralCoefficient(String),
    #[error("operation requires p = {expected}, ring has p = {found}")]
    WrongPrime { expected: u64, found: u64 },
    #[error("case not applicable: {0}")]
    CaseNotApplicable(String),
    #[error("kernel search window too small: boundary entry nonzero at index {0}")]
    InsufficientWindow(usize),
    #[error("search space too large: {0} candidates exceeds cap {1}")]
    SearchSpaceTooLarge(u64, u64),
    #[error("descriptor violates the p-th power congruence (condition on F^p)")]
    ConditionCViolated,
    #[error("no cokernel series found for the isogeny")]
    NoCokernelSeries,
    #[error("descriptor does not describe a model of mu_{{p^2}}: {0}")]
    NotAModel(String),
    #[error("configuration has no distinguished p^2-th root of unity")]
    NoRootOfUnity,
    #[error("module membership witness not found")]
    WitnessNotFound,
    #[error("configuration mismatch: {0}")]
    ConfigMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
