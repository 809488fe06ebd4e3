use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(
        "input does not span the full dimension {dim} (rank {rank}); the gauge would not be a norm"
    )]
    NotFullDimensional { dim: usize, rank: usize },

    #[error("{0} has infinitely many extreme points")]
    InfiniteExtremeSet(String),

    #[error("unsupported pair: {domain} -> {codomain}")]
    UnsupportedPair { domain: String, codomain: String },

    /// The operator norm is not exactly one. `squared` marks an l2 domain,
    /// where `norm` carries the squared value.
    #[error("operator norm{} {norm} is {} 1; extremality needs norm exactly 1", if *.squared { " (squared)" } else { "" }, if *.above { "above" } else { "below" })]
    NotContractionBoundary {
        norm: String,
        squared: bool,
        above: bool,
    },

    #[error("rule {rule} does not apply: {reason}")]
    RuleNotApplicable { rule: &'static str, reason: String },

    #[error("rules disagree on {operator}: {first} says {first_decision}, {second} says {second_decision}")]
    RuleDisagreement {
        operator: String,
        first: &'static str,
        first_decision: &'static str,
        second: &'static str,
        second_decision: &'static str,
    },

    #[error("problem size {size} exceeds the cap {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("{0}")]
    Precondition(String),

    #[error("internal verification failed: {0}")]
    Verification(String),
}
