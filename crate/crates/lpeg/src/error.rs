use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("duplicate rule `{0}`")]
    DuplicateRule(String),

    #[error("reference to undefined nonterminal `{0}`")]
    UndefinedNonterminal(String),

    #[error("`.` used but the alphabet is empty (add an %alphabet directive)")]
    EmptyAlphabetWithAny,

    #[error("primed nonterminal name `{0}` is reserved for the conversion pipeline")]
    ReservedPrimedName(String),

    #[error("recursion depth guard exceeded while evaluating `{0}` (grammar is not well-formed)")]
    RecursionGuard(String),

    #[error("grammar is not well-formed: {0:?}")]
    NotWellFormed(Vec<String>),

    #[error("grammar is not an LPEG: {0:?}")]
    NotLpeg(Vec<String>),

    #[error("boolean function refers to unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("BFA is not finalized: temporary variable `{0}` present")]
    TempVariablePresent(String),

    #[error("unresolved temporary variable `{0}` after substitution")]
    UnresolvedTemp(String),

    #[error("state budget exceeded: more than {0} DFA states reachable")]
    StateBudgetExceeded(usize),

    #[error("alphabet mismatch between automata")]
    AlphabetMismatch,

    #[error("invalid DFA description: {0}")]
    InvalidDfa(String),

    #[error("unsupported construct in conversion pipeline: {0}")]
    PipelineDefect(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
