use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {value} is not in the carrier of {semiring}")]
    NotInCarrier { value: String, semiring: String },

    #[error("malformed semiring: {0}")]
    MalformedSemiring(String),

    #[error("operation requires a finite carrier: {0}")]
    RequiresFinite(String),

    #[error("carrier of {semiring} has {size} elements, above the bound {bound}")]
    CarrierTooLarge {
        semiring: String,
        size: usize,
        bound: usize,
    },

    #[error("partition is not a congruence: {0}")]
    NotCongruence(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("semiring mismatch: expected {expected}, found {found}")]
    SemiringMismatch { expected: String, found: String },

    #[error("mapping is not monotonic: {0}")]
    NotMonotonic(String),

    #[error("property {property} requires an upper adjoint")]
    MissingAdjoint { property: String },

    #[error("pair is not a Galois insertion: {0}")]
    NotGaloisInsertion(String),

    #[error("semiring {0} is not totally ordered")]
    NotTotallyOrdered(String),

    #[error("required certificate missing: {0}")]
    CertificateMissing(String),

    #[error("invalid scope: {0}")]
    InvalidScope(String),

    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("witness construction impossible: {0}")]
    WitnessConstruction(String),

    #[error("evaluation budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Parse(String),

    #[error("{pointer}: {message}")]
    Schema { pointer: String, message: String },
}

impl Error {
    pub(crate) fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}
