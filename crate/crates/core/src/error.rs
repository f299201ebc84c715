use thiserror::Error;

use crate::functorlang::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An explicitly listed open family fails one of the topology axioms.
    /// `witness` holds the offending sets (one set for a missing boundary
    /// member, two sets for a failed union or intersection).
    #[error("not a topology: {reason}")]
    NotATopology {
        reason: String,
        witness: Vec<Vec<String>>,
    },

    #[error("relation is not a preorder: {0}")]
    NotAPreorder(String),

    #[error("maps are not parallel")]
    NotParallel,

    #[error("space is not T0: points {0} and {1} have the same neighbourhoods")]
    NotT0(String, String),

    #[error("subset {0} is not open")]
    NotOpen(String),

    #[error("map is not continuous: {0}")]
    NotContinuous(String),

    #[error("size cap exceeded: {what} needs {needed} points, cap is {cap}")]
    SizeCapExceeded {
        what: String,
        needed: usize,
        cap: usize,
    },

    #[error("constant space `{0}` is not bound")]
    UnboundConstant(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("need at least {needed} points, got {got}")]
    TooSmall { needed: usize, got: usize },

    #[error("functor mismatch: `{0}` vs `{1}`")]
    FunctorMismatch(String, String),

    #[error("natural transformation component undefined: {0}")]
    ComponentUndefined(String),

    #[error("not a monomorphism: {0}")]
    NotMono(String),

    #[error("not a subspace embedding: {0}")]
    NotEmbedding(String),

    #[error("invalid ball state: {0}")]
    InvalidState(String),

    #[error("unsupported export format `{0}`")]
    UnsupportedFormat(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),

    #[error("value is not an element of F(X): {0}")]
    InvalidValue(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}
