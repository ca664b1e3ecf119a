//! Quantitatively nonblocking supervisory control for discrete-event
//! systems.
//!
//! Plants and specifications are deterministic [`Generator`]s. The
//! [`analysis`] module decides bounded coreachability properties and
//! returns replayable counterexamples. The supremal sublanguages live in
//! [`synthesis`]. Brute-force cross-checks and a seeded sampler are in
//! [`oracle`]; the text format is handled by [`io`].

pub mod analysis;
pub mod automaton;
pub mod error;
pub mod io;
pub mod oracle;
pub mod synthesis;
pub mod verdict;

pub use automaton::{
    marked_language_compare, product, union_marked, Alphabet, Builder, Controllability, Event,
    EventId, Generator, LanguageRelation, RawAutomaton, StateId, Word,
};
pub use error::{Error, Result};
pub use verdict::{Verdict, Witness, WitnessKind};
