//! Deterministic generators: finite automata with a partial transition
//! function, an optional initial state and a set of marked states, over an
//! alphabet partitioned into controllable and uncontrollable events.

pub(crate) mod ops;
pub(crate) mod scc;

pub use ops::{marked_language_compare, product, union_marked, LanguageRelation};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Section};

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EventId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A string of events.
pub type Word = Vec<EventId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Controllability {
    Controllable,
    Uncontrollable,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub name: String,
    pub controllability: Controllability,
}

impl Event {
    pub fn new(name: impl Into<String>, controllability: Controllability) -> Self {
        Event {
            name: name.into(),
            controllability,
        }
    }

    pub fn is_controllable(&self) -> bool {
        self.controllability == Controllability::Controllable
    }
}

/// Event set sorted by name. Event ids are positions in that order, so two
/// equal alphabets assign the same id to the same event.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    events: Vec<Event>,
}

pub(crate) fn valid_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

impl Alphabet {
    pub fn new(events: impl IntoIterator<Item = Event>) -> Result<Self> {
        let mut events: Vec<(usize, Event)> = events.into_iter().enumerate().collect();
        for (_, e) in &events {
            if !valid_token(&e.name) {
                return Err(Error::InvalidName {
                    what: "event",
                    name: e.name.clone(),
                });
            }
        }
        events.sort_by(|a, b| a.1.name.cmp(&b.1.name).then(a.0.cmp(&b.0)));
        for w in events.windows(2) {
            if w[0].1.name == w[1].1.name {
                return Err(Error::DuplicateEvent {
                    name: w[1].1.name.clone(),
                    item: w[1].0,
                });
            }
        }
        Ok(Alphabet {
            events: events.into_iter().map(|(_, e)| e).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn ids(&self) -> impl Iterator<Item = EventId> + Clone {
        (0..self.events.len() as u32).map(EventId)
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id.index()]
    }

    pub fn name(&self, id: EventId) -> &str {
        &self.events[id.index()].name
    }

    pub fn is_controllable(&self, id: EventId) -> bool {
        self.events[id.index()].is_controllable()
    }

    pub fn uncontrollable(&self) -> impl Iterator<Item = EventId> + '_ {
        self.ids().filter(|&e| !self.is_controllable(e))
    }

    pub fn find(&self, name: &str) -> Option<EventId> {
        self.events
            .binary_search_by(|e| e.name.as_str().cmp(name))
            .ok()
            .map(|i| EventId(i as u32))
    }

    pub fn word_names(&self, word: &[EventId]) -> Vec<String> {
        word.iter().map(|&e| self.name(e).to_string()).collect()
    }

    /// Renders a word with `.` between events, `ε` for the empty word.
    pub fn render(&self, word: &[EventId]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        self.word_names(word).join(".")
    }

    /// Parses a word written as event names separated by `.`; if every event
    /// name is a single character the separators may be omitted.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text.is_empty() || text == "ε" {
            return Ok(Vec::new());
        }
        let pieces: Vec<String> = if text.contains('.') {
            text.split('.').map(str::to_string).collect()
        } else if self.events.iter().all(|e| e.name.chars().count() == 1) {
            text.chars().map(|c| c.to_string()).collect()
        } else {
            vec![text.to_string()]
        };
        pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                self.find(p).ok_or_else(|| Error::UnknownEvent {
                    name: p.clone(),
                    item: i,
                })
            })
            .collect()
    }

    /// Binary operations require the same events with the same controllability.
    pub fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            return Ok(());
        }
        let mine: Vec<&str> = self.events.iter().map(|e| e.name.as_str()).collect();
        let theirs: Vec<&str> = other.events.iter().map(|e| e.name.as_str()).collect();
        if mine != theirs {
            return Err(Error::AlphabetMismatch(format!(
                "{{{}}} vs {{{}}}",
                mine.join(", "),
                theirs.join(", ")
            )));
        }
        let differing: Vec<&str> = self
            .events
            .iter()
            .zip(&other.events)
            .filter(|(a, b)| a.controllability != b.controllability)
            .map(|(a, _)| a.name.as_str())
            .collect();
        Err(Error::AlphabetMismatch(format!(
            "controllability differs for {}",
            differing.join(", ")
        )))
    }
}

/// Unvalidated automaton description, e.g. as read from a file.
#[derive(Debug, Clone, Default)]
pub struct RawAutomaton {
    pub alphabet: Vec<Event>,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    pub marked: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
}

impl RawAutomaton {
    pub fn validate(&self) -> Result<Generator> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let mut index: HashMap<&str, u32> = HashMap::with_capacity(self.states.len());
        for (i, s) in self.states.iter().enumerate() {
            if !valid_token(s) {
                return Err(Error::InvalidName {
                    what: "state",
                    name: s.clone(),
                });
            }
            if index.insert(s.as_str(), i as u32).is_some() {
                return Err(Error::DuplicateState {
                    name: s.clone(),
                    item: i,
                });
            }
        }
        let lookup = |name: &str, section: Section, item: usize| {
            index
                .get(name)
                .copied()
                .map(StateId)
                .ok_or_else(|| Error::UnknownState {
                    name: name.to_string(),
                    section,
                    item,
                })
        };

        let initial = match self.initial.as_slice() {
            [] if self.states.is_empty() => None,
            [] => return Err(Error::MissingInitial),
            [one] => Some(lookup(one, Section::Initial, 0)?),
            _ => return Err(Error::MultipleInitial),
        };

        let mut b = Builder::new(alphabet);
        for name in &self.states {
            b.add_state(name.clone(), false);
        }
        for (i, m) in self.marked.iter().enumerate() {
            let s = lookup(m, Section::Marked, i)?;
            b.marked[s.index()] = true;
        }
        for (i, (src, ev, dst)) in self.transitions.iter().enumerate() {
            let s = lookup(src, Section::Transitions, i)?;
            let e = b.alphabet.find(ev).ok_or_else(|| Error::UnknownEvent {
                name: ev.clone(),
                item: i,
            })?;
            let t = lookup(dst, Section::Transitions, i)?;
            if b.succ(s, e).is_some() {
                return Err(Error::Nondeterminism {
                    state: src.clone(),
                    event: ev.clone(),
                    item: i,
                });
            }
            b.set(s, e, t);
        }
        Ok(b.finish(initial))
    }
}

/// Deterministic finite generator.
///
/// Transitions are stored in a dense `states × events` table. A generator
/// with no states has no initial state and represents the empty language.
#[derive(Clone, PartialEq, Eq)]
pub struct Generator {
    alphabet: Alphabet,
    names: Vec<String>,
    initial: Option<StateId>,
    marked: Vec<bool>,
    delta: Vec<u32>,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Generator");
        d.field(
            "alphabet",
            &self
                .alphabet
                .events()
                .iter()
                .map(|e| &e.name)
                .collect::<Vec<_>>(),
        );
        d.field("states", &self.names);
        d.field("initial", &self.initial.map(|s| self.name(s)));
        d.field(
            "marked",
            &self
                .marked_states()
                .map(|s| self.name(s))
                .collect::<Vec<_>>(),
        );
        d.field(
            "transitions",
            &self
                .transitions()
                .map(|(s, e, t)| (self.name(s), self.alphabet.name(e), self.name(t)))
                .collect::<Vec<_>>(),
        );
        d.finish()
    }
}

impl Generator {
    /// The empty generator over `alphabet`.
    pub fn empty(alphabet: Alphabet) -> Self {
        Builder::new(alphabet).finish(None)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn num_events(&self) -> usize {
        self.alphabet.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().filter(|&&t| t != NONE).count()
    }

    pub fn is_empty(&self) -> bool {
        self.initial.is_none()
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.names.len() as u32).map(StateId)
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s.index()]
    }

    pub fn find_state(&self, name: &str) -> Option<StateId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| StateId(i as u32))
    }

    pub fn state_index(&self) -> HashMap<&str, StateId> {
        self.states().map(|s| (self.name(s), s)).collect()
    }

    pub fn is_marked(&self, s: StateId) -> bool {
        self.marked[s.index()]
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(|&s| self.marked[s.index()])
    }

    #[inline]
    pub fn succ(&self, s: StateId, e: EventId) -> Option<StateId> {
        let t = self.delta[s.index() * self.alphabet.len() + e.index()];
        (t != NONE).then_some(StateId(t))
    }

    /// Outgoing transitions of `s` in event order.
    pub fn out(&self, s: StateId) -> impl Iterator<Item = (EventId, StateId)> + '_ {
        let m = self.alphabet.len();
        self.delta[s.index() * m..(s.index() + 1) * m]
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != NONE)
            .map(|(e, &t)| (EventId(e as u32), StateId(t)))
    }

    pub fn transitions(&self) -> impl Iterator<Item = (StateId, EventId, StateId)> + '_ {
        self.states()
            .flat_map(move |s| self.out(s).map(move |(e, t)| (s, e, t)))
    }

    /// Runs `word` from `from`; `None` if some step is undefined.
    pub fn run_from(&self, from: StateId, word: &[EventId]) -> Option<StateId> {
        word.iter().try_fold(from, |s, &e| self.succ(s, e))
    }

    pub fn run(&self, word: &[EventId]) -> Option<StateId> {
        self.run_from(self.initial?, word)
    }

    pub fn accepts(&self, word: &[EventId]) -> bool {
        self.run(word).is_some_and(|s| self.is_marked(s))
    }

    pub fn generates(&self, word: &[EventId]) -> bool {
        self.run(word).is_some()
    }

    /// Predecessor lists indexed by state.
    pub(crate) fn reverse_edges(&self) -> Vec<Vec<StateId>> {
        let mut rev = vec![Vec::new(); self.num_states()];
        for (s, _, t) in self.transitions() {
            rev[t.index()].push(s);
        }
        rev
    }

    /// Breadth-first access words from the initial state, events tried in
    /// order, so each word is the shortest and lexicographically least.
    pub fn access_words(&self) -> Vec<Option<Word>> {
        let mut parent: Vec<Option<(StateId, EventId)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        if let Some(x0) = self.initial {
            let mut queue = VecDeque::from([x0]);
            seen[x0.index()] = true;
            while let Some(s) = queue.pop_front() {
                order.push(s);
                for (e, t) in self.out(s) {
                    if !seen[t.index()] {
                        seen[t.index()] = true;
                        parent[t.index()] = Some((s, e));
                        queue.push_back(t);
                    }
                }
            }
        }
        let mut words: Vec<Option<Word>> = vec![None; self.num_states()];
        for s in order {
            let w = match parent[s.index()] {
                None => Vec::new(),
                Some((p, e)) => {
                    let mut w = words[p.index()].clone().expect("parent visited first");
                    w.push(e);
                    w
                }
            };
            words[s.index()] = Some(w);
        }
        words
    }

    /// Copy with every state marked; for a trim generator its marked
    /// language is the prefix closure of the original marked language.
    pub fn with_all_marked(&self) -> Generator {
        let mut g = self.clone();
        g.marked.iter_mut().for_each(|m| *m = true);
        g
    }

    /// Copy whose marked set is exactly `marked`.
    pub fn with_marked(&self, marked: impl IntoIterator<Item = StateId>) -> Generator {
        let mut g = self.clone();
        g.marked.iter_mut().for_each(|m| *m = false);
        for s in marked {
            g.marked[s.index()] = true;
        }
        g
    }

    /// Renames states to `0..n` in breadth-first discovery order from the
    /// initial state (events in name order); unreachable states follow in
    /// their current order.
    pub fn renumbered(&self) -> Generator {
        let order = self.bfs_order();
        let mut new_id = vec![NONE; self.num_states()];
        for (i, &s) in order.iter().enumerate() {
            new_id[s.index()] = i as u32;
        }
        let mut b = Builder::new(self.alphabet.clone());
        for (i, &s) in order.iter().enumerate() {
            b.add_state(i.to_string(), self.is_marked(s));
        }
        for (s, e, t) in self.transitions() {
            b.set(StateId(new_id[s.index()]), e, StateId(new_id[t.index()]));
        }
        b.finish(self.initial.map(|s| StateId(new_id[s.index()])))
    }

    /// All states, reachable ones first in breadth-first order.
    pub(crate) fn bfs_order(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::with_capacity(self.num_states());
        if let Some(x0) = self.initial {
            seen[x0.index()] = true;
            order.push(x0);
            let mut head = 0;
            while head < order.len() {
                let s = order[head];
                head += 1;
                for (_, t) in self.out(s) {
                    if !seen[t.index()] {
                        seen[t.index()] = true;
                        order.push(t);
                    }
                }
            }
        }
        order.extend(self.states().filter(|s| !seen[s.index()]));
        order
    }

    /// Subgenerator induced by the states with `keep[s]`; empty if the
    /// initial state is dropped.
    pub fn restrict(&self, keep: &[bool]) -> Generator {
        let keeps_initial = self.initial.is_some_and(|s| keep[s.index()]);
        if !keeps_initial {
            return Generator::empty(self.alphabet.clone());
        }
        let mut new_id = vec![NONE; self.num_states()];
        let mut b = Builder::new(self.alphabet.clone());
        for s in self.states().filter(|s| keep[s.index()]) {
            new_id[s.index()] = b.add_state(self.name(s).to_string(), self.is_marked(s)).0;
        }
        for (s, e, t) in self.transitions() {
            if keep[s.index()] && keep[t.index()] {
                b.set(StateId(new_id[s.index()]), e, StateId(new_id[t.index()]));
            }
        }
        b.finish(self.initial.map(|s| StateId(new_id[s.index()])))
    }

    pub fn uses_unique_names(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.names.len());
        self.names.iter().all(|n| seen.insert(n.as_str()))
    }
}

/// Incremental construction of a generator. Callers are responsible for
/// determinism; `set` overwrites.
#[derive(Debug, Clone)]
pub struct Builder {
    pub(crate) alphabet: Alphabet,
    names: Vec<String>,
    pub(crate) marked: Vec<bool>,
    delta: Vec<u32>,
}

impl Builder {
    pub fn new(alphabet: Alphabet) -> Self {
        Builder {
            alphabet,
            names: Vec::new(),
            marked: Vec::new(),
            delta: Vec::new(),
        }
    }

    pub fn with_capacity(alphabet: Alphabet, states: usize) -> Self {
        let m = alphabet.len();
        Builder {
            alphabet,
            names: Vec::with_capacity(states),
            marked: Vec::with_capacity(states),
            delta: Vec::with_capacity(states * m),
        }
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn add_state(&mut self, name: String, marked: bool) -> StateId {
        let id = StateId(self.names.len() as u32);
        self.names.push(name);
        self.marked.push(marked);
        self.delta
            .extend(std::iter::repeat_n(NONE, self.alphabet.len()));
        id
    }

    pub fn set_marked(&mut self, s: StateId, marked: bool) {
        self.marked[s.index()] = marked;
    }

    #[inline]
    pub fn set(&mut self, src: StateId, e: EventId, dst: StateId) {
        let m = self.alphabet.len();
        self.delta[src.index() * m + e.index()] = dst.0;
    }

    pub fn succ(&self, s: StateId, e: EventId) -> Option<StateId> {
        let t = self.delta[s.index() * self.alphabet.len() + e.index()];
        (t != NONE).then_some(StateId(t))
    }

    pub fn finish(self, initial: Option<StateId>) -> Generator {
        let (names, marked, delta) = if initial.is_none() {
            (Vec::new(), Vec::new(), Vec::new())
        } else {
            (self.names, self.marked, self.delta)
        };
        Generator {
            alphabet: self.alphabet,
            names,
            initial,
            marked,
            delta,
        }
    }
}
