//! Brute-force reference procedures and seeded instance generators. These
//! are deliberately simple so they can certify the real algorithms on small
//! inputs.

mod sample;

pub use sample::{
    sample_alphabet, sample_generator, sample_generator_over, sample_subautomaton, SamplerParams,
};

use std::collections::BTreeSet;

use crate::analysis::is_quantitatively_completable;
use crate::automaton::{union_marked, Builder, Generator, StateId, Word};
use crate::error::{Error, Result};

/// Default cap on the number of strings an enumeration may consider.
pub const DEFAULT_STRING_CAP: u64 = 1_000_000;

/// Default cap on the number of transitions for the subautomaton brute force.
pub const DEFAULT_TRANSITION_CAP: usize = 12;

/// Closed and marked strings of a generator up to a length bound.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundedLanguage {
    pub max_len: usize,
    pub marked: BTreeSet<Word>,
    pub closed: BTreeSet<Word>,
}

impl BoundedLanguage {
    /// Marked strings in shortlex order.
    pub fn marked_shortlex(&self) -> Vec<&Word> {
        let mut v: Vec<&Word> = self.marked.iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        v
    }
}

fn check_budget(events: usize, max_len: usize, cap: u64) -> Result<()> {
    let mut total: u64 = 1;
    for _ in 0..max_len {
        total = total.saturating_mul(events as u64);
    }
    if total > cap {
        return Err(Error::Budget(format!(
            "{events}^{max_len} strings exceed the cap of {cap}"
        )));
    }
    Ok(())
}

pub fn enumerate_bounded(g: &Generator, max_len: usize) -> Result<BoundedLanguage> {
    enumerate_bounded_capped(g, max_len, DEFAULT_STRING_CAP)
}

/// Exhaustive walk of every generated string of length at most `max_len`.
pub fn enumerate_bounded_capped(
    g: &Generator,
    max_len: usize,
    cap: u64,
) -> Result<BoundedLanguage> {
    check_budget(g.num_events(), max_len, cap)?;
    let mut lang = BoundedLanguage {
        max_len,
        ..Default::default()
    };
    let Some(x0) = g.initial() else {
        return Ok(lang);
    };
    let mut stack: Vec<(StateId, Word)> = vec![(x0, Vec::new())];
    while let Some((s, w)) = stack.pop() {
        if g.is_marked(s) {
            lang.marked.insert(w.clone());
        }
        if w.len() < max_len {
            for (e, t) in g.out(s) {
                let mut w2 = w.clone();
                w2.push(e);
                stack.push((t, w2));
            }
        }
        lang.closed.insert(w);
    }
    Ok(lang)
}

/// Searches for `s` and a first completion `t` of `s` into `L_m(g)` with
/// `|t| > n`, among strings `st` of length at most `budget`. Only a found
/// pair means anything: `None` is not a proof of completability.
///
/// The returned pair has `|t| = n + 1` and `st` first in shortlex order.
pub fn refute_qc(g: &Generator, n: u32, budget: usize) -> Result<Option<(Word, Word)>> {
    if n == 0 {
        return Err(Error::ZeroBound);
    }
    let lang = enumerate_bounded(g, budget)?;
    let n = n as usize;
    for u in lang.marked_shortlex() {
        // last proper prefix of u in K, if any
        let last = (0..u.len()).rev().find(|&p| lang.marked.contains(&u[..p]));
        let longest = match last {
            Some(p) => u.len() - p - 1,
            None => u.len(),
        };
        if longest > n {
            let cut = u.len() - (n + 1);
            return Ok(Some((u[..cut].to_vec(), u[cut..].to_vec())));
        }
    }
    Ok(None)
}

/// Union of the marked languages of all subautomata of trim `k` (subsets of
/// its transitions) whose trim is quantitatively completable wrt `n`.
///
/// This can only underapproximate the true supremum: the supremal language
/// may need to split a state by how many steps have passed.
pub fn brute_supremal_subautomaton(k: &Generator, n: u32) -> Result<Generator> {
    brute_supremal_subautomaton_capped(k, n, DEFAULT_TRANSITION_CAP)
}

pub fn brute_supremal_subautomaton_capped(k: &Generator, n: u32, cap: usize) -> Result<Generator> {
    if n == 0 {
        return Err(Error::ZeroBound);
    }
    let kt = k.trim();
    let edges: Vec<_> = kt.transitions().collect();
    if edges.len() > cap {
        return Err(Error::Budget(format!(
            "{} transitions exceed the subautomaton cap of {cap}",
            edges.len()
        )));
    }
    let subsets = 1u32 << edges.len();
    let mut passing: Vec<u32> = Vec::new();
    for mask in (0..subsets).rev() {
        if passing.iter().any(|&p| p & mask == mask) {
            continue; // a superset already passed
        }
        let sub = keep_transitions(&kt, &edges, mask).trim();
        if !sub.is_empty() && is_quantitatively_completable(&sub, n)?.holds {
            passing.push(mask);
        }
    }
    let mut acc = Generator::empty(kt.alphabet().clone());
    for mask in passing {
        let sub = keep_transitions(&kt, &edges, mask).trim();
        acc = union_marked(&acc, &sub)?;
    }
    Ok(acc)
}

fn keep_transitions(
    g: &Generator,
    edges: &[(StateId, crate::automaton::EventId, StateId)],
    mask: u32,
) -> Generator {
    let mut b = Builder::with_capacity(g.alphabet().clone(), g.num_states());
    for s in g.states() {
        b.add_state(g.name(s).to_string(), g.is_marked(s));
    }
    for (i, &(s, e, t)) in edges.iter().enumerate() {
        if mask >> i & 1 == 1 {
            b.set(s, e, t);
        }
    }
    b.finish(g.initial())
}

/// String-level membership for the language route, decided by direct walks
/// of the trim specification.
///
/// `K_N` is the set of strings `s` in the prefix closure of `K` such that
/// `|s| ≤ N - 1` or some prefix of `s` lies in `K` at most `N` events before
/// the end of `s`.
#[derive(Debug, Clone)]
pub struct StringOracle {
    k: Generator,
    n: usize,
}

impl StringOracle {
    pub fn new(k: &Generator, n: u32) -> Self {
        StringOracle {
            k: k.trim(),
            n: n as usize,
        }
    }

    pub fn in_closure(&self, s: &[crate::automaton::EventId]) -> bool {
        self.k.generates(s)
    }

    pub fn in_k(&self, s: &[crate::automaton::EventId]) -> bool {
        self.k.accepts(s)
    }

    pub fn in_k_n(&self, s: &[crate::automaton::EventId]) -> bool {
        if !self.in_closure(s) {
            return false;
        }
        if s.len() < self.n {
            return true;
        }
        (s.len() - self.n..=s.len()).any(|p| self.in_k(&s[..p]))
    }

    /// Every prefix of `s`, including `s`, lies in `K_N`.
    pub fn in_pre_k_n(&self, s: &[crate::automaton::EventId]) -> bool {
        (0..=s.len()).all(|p| self.in_k_n(&s[..p]))
    }

    /// Membership in `pre(K_N) ∩ K`.
    pub fn in_supremum(&self, s: &[crate::automaton::EventId]) -> bool {
        self.in_k(s) && self.in_pre_k_n(s)
    }
}

/// First completions of `s` into the strings of `K` that drive the plant
/// to `marker`, up to `max_len` further events. A completion may not pass
/// through another such string on the way.
pub fn first_completions_to(
    g: &Generator,
    k: &Generator,
    marker: StateId,
    s: &[crate::automaton::EventId],
    max_len: usize,
) -> Vec<Word> {
    let hit = |w: &[crate::automaton::EventId]| k.accepts(w) && g.run(w) == Some(marker);
    let mut out = Vec::new();
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..=max_len {
        let mut next = Vec::new();
        for t in frontier {
            let mut st = s.to_vec();
            st.extend_from_slice(&t);
            if !k.generates(&st) {
                continue;
            }
            if hit(&st) {
                out.push(t);
                continue;
            }
            for e in g.alphabet().ids() {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        frontier = next;
    }
    out
}
