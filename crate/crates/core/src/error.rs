use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Two automata were combined that live over different alphabets.
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    /// An operation required an automaton class (deterministic,
    /// bi-deterministic, ...) the input does not belong to.
    #[error("class violation: {0}")]
    ClassViolation(String),

    /// A letter or state identifier does not belong to the automaton.
    /// Distinct from an action being undefined, which is an ordinary result.
    #[error("input error: {0}")]
    InputError(String),

    /// A carry vector computed during the affine construction left its
    /// admissible range. This signals a bug, not bad user input.
    #[error("carry range violation: {0}")]
    CarryRangeViolation(String),

    /// The requested modulus shares a factor with a generator determinant.
    #[error("modulus {modulus} is not coprime to determinant {determinant}")]
    NonCoprimeModulus {
        modulus: String,
        determinant: String,
    },

    /// Column-boundary search on a recurrent strip found no repetition
    /// within the given width bound.
    #[error("no repeated column boundary within width bound {0}")]
    WidthBoundExceeded(usize),

    /// A parameter was outside its documented domain (`k = 0` for powers,
    /// empty matrix lists, oversized search spaces, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Malformed input data (JSON or otherwise).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
