use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{line}:{column}: undeclared symbol `{name}`")]
    UndeclaredSymbol {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("symbol `{0}` is declared as both a test and an action")]
    ConflictingSymbol(String),

    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),

    #[error("{tests} primitive tests exceed the atom cap of {cap} (2^{tests} atoms)")]
    AtomBlowup { tests: usize, cap: usize },

    #[error("resource limit exceeded: more than {limit} {what}")]
    ResourceLimit { what: &'static str, limit: usize },

    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),

    #[error("interpretation does not cover symbol `{0}`")]
    MissingSymbol(String),

    #[error("invalid interpretation: {0}")]
    InvalidInterpretation(String),

    #[error("relation for `{0}` is not a partial function under a functional interpretation")]
    FunctionalityViolation(String),

    #[error("malformed automaton: {0}")]
    MalformedAutomaton(String),

    #[error("malformed guarded string: {0}")]
    MalformedGuardedString(String),

    #[error("law `{law}`: {message}")]
    Binding { law: String, message: String },

    #[error("no witness: the verdict is `equivalent`")]
    NoWitness,

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by hitting a configured size limit.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::AtomBlowup { .. } | Error::ResourceLimit { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Size limits shared by the oracle and the automaton constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of primitive tests (the atom universe has 2^n members).
    pub max_tests: usize,
    /// Ceiling on the number of guarded strings held by the bounded oracle.
    pub max_strings: usize,
    /// Ceiling on automaton states (GKAT derivative closure and KAT determinization).
    pub max_states: usize,
}

/// Absolute maximum number of primitive tests, regardless of configuration.
pub const HARD_MAX_TESTS: usize = 20;

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_tests: 12,
            max_strings: 1_000_000,
            max_states: 100_000,
        }
    }
}

impl Limits {
    pub fn with_max_tests(self, max_tests: usize) -> Self {
        Limits { max_tests, ..self }
    }

    pub(crate) fn check_tests(&self, tests: usize) -> Result<()> {
        let cap = self.max_tests.min(HARD_MAX_TESTS);
        if tests > cap {
            Err(Error::AtomBlowup { tests, cap })
        } else {
            Ok(())
        }
    }
}
