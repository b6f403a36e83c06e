use thiserror::Error;

/// Errors raised by the algebraic core.
///
/// Element references are carried as labels so that diagnostics can be shown
/// to users without access to the underlying index tables.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multiplication is not associative: ({x}*{y})*{z} != {x}*({y}*{z})")]
    NotAssociative { x: String, y: String, z: String },
    #[error("{x} violates the unit law for the declared identity")]
    BadIdentity { x: String },
    #[error("index {index} out of range (size {size}) in {context}")]
    IndexOutOfRange {
        context: String,
        index: usize,
        size: usize,
    },
    #[error("table shape mismatch: {0}")]
    TableShape(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unit law violated: {x}*1 != {x}")]
    UnitLawViolation { x: String },
    #[error("action law violated: ({x}*{m})*{n} != {x}*({m}{n})")]
    ActionLawViolation { x: String, m: String, n: String },
    #[error("map is not equivariant: f({x}*{m}) != f({x})*{m}")]
    NotEquivariant { x: String, m: String },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("objects are over different monoids")]
    MonoidMismatch,
    #[error("partition is not compatible with the action: {x} ~ {y} but {x}*{m} !~ {y}*{m}")]
    NotCompatible { x: String, y: String, m: String },
    #[error("principal congruence requested on identical elements `{0}`")]
    SameElement(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{which} is not monic")]
    NotMonic { which: String },
    #[error("{which} is not epic")]
    NotEpic { which: String },
    #[error("{which} is not an endomorphism")]
    NotEndo { which: String },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("search frontier exceeded the size guard of {limit} candidates")]
    SizeGuardExceeded { limit: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
