use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {0} is not declared")]
    GeneratorOutOfRange(u32),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("malformed word at column {column}: {message}")]
    MalformedWord { column: usize, message: String },
    #[error("invalid backend: {0}")]
    InvalidBackend(String),
    #[error("relator {index} is not trivial under the backend")]
    RelatorNotTrivial { index: usize },
    #[error("declared central generator `{0}` does not commute with every generator")]
    NotCentral(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("element has negative character value and does not lie in G_chi")]
    NotInGChi,
    #[error("invalid character: relator {relator} has residual {residual}")]
    InvalidCharacter { relator: usize, residual: String },
    #[error("character has {got} values, presentation has {expected} generators")]
    CharacterArity { expected: usize, got: usize },
    #[error("substitution dictionary has no entry for letter {0}")]
    DictIncomplete(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("presentation backend is not a free group on its generators")]
    NotFreeBasis,
    #[error("word is not a relation")]
    NotARelation,
    #[error("word has negative character track")]
    NegativeTrack,
    #[error("dictionary word for {0} does not attain its track minimum at an endpoint")]
    EndpointMinViolated(String),
    #[error("small stage is not contained in large stage")]
    StageNotNested,
    #[error("generator map is not a homomorphism: relator {0} maps to a non-trivial element")]
    NotAHomomorphism(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(&'static str),
}
