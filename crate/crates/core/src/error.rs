use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("enumeration too large: {atoms} atoms exceeds the ceiling of {ceiling}")]
    EnumerationTooLarge { atoms: usize, ceiling: usize },

    #[error("universe too large: {0} ground atoms (at most {max} supported)", max = crate::universe::MAX_ATOMS)]
    UniverseTooLarge(usize),

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid atom: {0}")]
    InvalidAtom(String),

    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported construct: {0}")]
    Unsupported(String),

    #[error("symbol leakage: {0}")]
    SymbolLeakage(String),

    #[error("ill-formed system: {0}")]
    IllFormed(String),

    #[error("inconsistent partial assignment: {0}")]
    InconsistentAssignment(String),
}
