//! Error type shared across the crate.
//!
//! Every fallible operation returns [`Error`]. The variants are grouped by how a
//! caller should react:
//!
//! * input problems (`InvalidGroup`, `WordSyntax`, `UnknownName`, ...) — reject the input;
//! * guard trips (`GuardExceeded`, `Indeterminate`, `QuotientNotFound`) — the computation
//!   was cut off before an answer could be certified, not that the answer is "no";
//! * `Internal` — a cross-checked identity failed, which means a bug in this crate,
//!   never bad user input.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("embedding is not injective")]
    NotInjective,

    #[error("image of the amalgamated subgroup is not normal in {0}")]
    NotNormal(String),

    #[error("images do not generate the target group (got {got} of {want} elements)")]
    DoesNotGenerate { got: usize, want: usize },

    #[error("word syntax error at byte {pos}: {msg}")]
    WordSyntax { pos: usize, msg: String },

    #[error("syllable ({factor}, {element}) out of range for this free product")]
    InvalidSyllable { factor: usize, element: usize },

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("operands live over different free products")]
    AmbientMismatch,

    #[error("operation requires a factor-free subgroup (automaton has a self-transition)")]
    NotFactorFree,

    #[error("operation requires a complete automaton (finite index)")]
    NotComplete,

    #[error("guard exceeded: {what} reached {reached}, limit {limit}")]
    GuardExceeded {
        what: &'static str,
        reached: usize,
        limit: usize,
    },

    #[error("computation did not close within the {max_states}-state guard")]
    Indeterminate { max_states: usize },

    #[error("no suitable finite quotient found within permutation degree {degree_bound}")]
    QuotientNotFound { degree_bound: usize },

    #[error("no twist assignment over T produced a full tau-image")]
    TwistSearchFailed,

    #[error("twist refers to basis generator {index}, but the basis has {len} generators")]
    UnknownBasisGenerator { index: usize, len: usize },

    #[error("word is not a member of the subgroup")]
    NotMember,

    #[error("amalgam mismatch: {0}")]
    AmalgamMismatch(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    ///
    /// 1 = bad input or internal failure, 3 = indeterminate (a guard stopped the
    /// computation before it could certify an answer). Exit code 2 (a bound or
    /// asserted equality found violated) is derived from reports, not from errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::GuardExceeded { .. }
            | Error::Indeterminate { .. }
            | Error::QuotientNotFound { .. } => 3,
            _ => 1,
        }
    }
}
