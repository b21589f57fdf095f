use thiserror::Error;

use crate::words::{Gen, Word};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at column {column} (0-based): {message}")]
    Parse { column: usize, message: String },

    #[error("no image given for generator {0}")]
    MissingImage(Gen),

    #[error("generator {0} is already present")]
    GeneratorCollision(Gen),

    #[error("generator {0} does not belong to the presentation")]
    ForeignGenerator(Gen),

    #[error(
        "relator {index} does not define {gen} (need the form {gen}·w⁻¹ with w free of {gen})"
    )]
    NotEliminable { gen: Gen, index: usize },

    #[error("relator index {0} is out of range")]
    RelatorIndex(usize),

    #[error("the oracle does not know generator {0}")]
    UnknownGenerator(Gen),

    #[error("generator {gen} lies outside the index window {lo}..{hi}")]
    WindowExceeded { gen: Gen, lo: i64, hi: i64 },

    #[error("operation `{op}` is not supported by the {oracle} oracle")]
    UnsupportedOracle { op: &'static str, oracle: String },

    #[error("witness letter {0} has no assigned subgroup generator")]
    ArityMismatch(Gen),

    #[error("group ring elements live over different oracles")]
    OracleMismatch,

    #[error("cannot factor {word} over the configured family window: {reason}")]
    FactorizationFailure { word: Word, reason: String },

    #[error("operation undefined on the zero element")]
    ZeroElement,

    #[error("fundamental identity fails for {0}")]
    IdentityViolation(Word),

    #[error("{0} is not trivial in the group")]
    NotARelator(Word),

    #[error("the map is not a homomorphism: relator {0} has a nontrivial image")]
    NotAHomomorphism(Word),

    #[error("path leaves the ball after prefix {0}")]
    BallExceeded(Word),

    #[error("ball exceeds the vertex budget of {0}")]
    VertexBudget(usize),

    #[error("group element {0} is not a vertex of the ball (or its edge leaves the ball)")]
    SupportOutsideBall(Word),

    #[error("edge chain has nonzero boundary")]
    NotACycle,

    #[error("cycle decomposition does not reassemble the input chain")]
    DecompositionMismatch,

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid group descriptor `{0}`")]
    InvalidDescriptor(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
