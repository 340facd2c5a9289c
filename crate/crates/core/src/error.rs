use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero polynomial")]
    DivisionByZeroPolynomial,

    #[error("gcd of two zero polynomials")]
    ZeroGcd,

    #[error("{0} of the zero polynomial")]
    ZeroPolynomial(&'static str),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("condition indeterminate: dF/dy{n} vanishes up to x^{depth}")]
    Indeterminate { n: usize, depth: usize },

    #[error("condition does not hold: {0}")]
    ConditionFailed(String),

    #[error("ell = {ell} must exceed m = {m}")]
    EllTooSmall { ell: usize, m: usize },

    #[error("divisibility failure: {what} has valuation {found}, expected at least {expected}")]
    Divisibility { what: String, found: String, expected: usize },

    #[error("denominator {den} of {what} is not cleared by {by}")]
    Denominator { what: String, den: String, by: String },

    #[error("seed too short: coefficient R_{k} is not uniquely determined ({reason})")]
    SeedTooShort { k: usize, reason: String },

    #[error("no rational solution within bounds at k = {k}")]
    NoRationalSolution { k: usize },

    #[error("rational solution at k = {k} is not unique (homogeneous kernel of dimension {dim})")]
    NotUnique { k: usize, dim: usize },

    #[error("right-hand side at k = {k} has a pole outside the common pole set")]
    PoleOutsideSet { k: usize },

    #[error("r too small for operand (pole modulus bound {bound} >= r = {r})")]
    RadiusTooSmall { bound: String, r: String },

    #[error("norm did not reach tolerance within {0} Laurent terms")]
    NormTolerance(usize),

    #[error("log-pole proximity at x = {0}")]
    LogPole(String),

    #[error("evaluation at x = 0")]
    ZeroArgument,

    #[error("invalid sector: {0}")]
    InvalidSector(String),

    #[error("not invertible as power-log series")]
    NotInvertible,

    #[error("at least {needed} data points required, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}
