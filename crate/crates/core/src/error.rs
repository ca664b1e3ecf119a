use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which list of a raw automaton description an item index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Section {
    Alphabet,
    States,
    Initial,
    Marked,
    Transitions,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {what} name {name:?}: names must be nonempty and contain no whitespace")]
    InvalidName { what: &'static str, name: String },

    #[error("duplicate event {name:?} in alphabet")]
    DuplicateEvent { name: String, item: usize },

    #[error("duplicate state {name:?}")]
    DuplicateState { name: String, item: usize },

    #[error("nondeterministic transition: ({state}, {event}) already has a successor")]
    Nondeterminism {
        state: String,
        event: String,
        item: usize,
    },

    #[error("unknown state {name:?} referenced")]
    UnknownState {
        name: String,
        section: Section,
        item: usize,
    },

    #[error("unknown event {name:?} referenced")]
    UnknownEvent { name: String, item: usize },

    #[error("automaton has states but no initial state")]
    MissingInitial,

    #[error("more than one initial state given")]
    MultipleInitial,

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("{relation} violated; witness string {witness:?}")]
    Containment {
        relation: &'static str,
        witness: String,
    },

    #[error("bound must be a positive integer")]
    ZeroBound,

    #[error("bounds do not match the plant marker support: missing {missing:?}, unexpected {unexpected:?}")]
    BoundsMismatch {
        missing: Vec<String>,
        unexpected: Vec<String>,
    },

    #[error("the specification reaches no plant marker state")]
    EmptyMarkerSupport,

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}, column {column}: {source}")]
    Located {
        line: usize,
        column: usize,
        #[source]
        source: Box<Error>,
    },
}
