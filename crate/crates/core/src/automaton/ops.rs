use std::collections::{HashMap, HashSet, VecDeque};

use super::scc::Components;
use super::{Builder, EventId, Generator, StateId, Word};
use crate::error::{Error, Result};
use crate::verdict::{Verdict, Witness, WitnessKind};

impl Generator {
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let Some(x0) = self.initial() else {
            return seen;
        };
        let mut stack = vec![x0];
        seen[x0.index()] = true;
        while let Some(s) = stack.pop() {
            for (_, t) in self.out(s) {
                if !seen[t.index()] {
                    seen[t.index()] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// States from which some string leads into `target`.
    pub fn can_reach(&self, target: &[bool]) -> Vec<bool> {
        let rev = self.reverse_edges();
        let mut seen = target.to_vec();
        let mut stack: Vec<StateId> = self.states().filter(|s| target[s.index()]).collect();
        while let Some(s) = stack.pop() {
            for &p in &rev[s.index()] {
                if !seen[p.index()] {
                    seen[p.index()] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    pub fn coreachable(&self) -> Vec<bool> {
        let marked: Vec<bool> = self.states().map(|s| self.is_marked(s)).collect();
        self.can_reach(&marked)
    }

    pub fn is_trim(&self) -> bool {
        let r = self.reachable();
        let c = self.coreachable();
        r.iter().zip(&c).all(|(&r, &c)| r && c)
    }

    /// Subgenerator on the reachable and coreachable states.
    pub fn trim(&self) -> Generator {
        let r = self.reachable();
        let c = self.coreachable();
        let keep: Vec<bool> = r.iter().zip(&c).map(|(&r, &c)| r && c).collect();
        if keep.iter().all(|&k| k) {
            return self.clone();
        }
        self.restrict(&keep)
    }

    pub fn reachable_part(&self) -> Generator {
        let r = self.reachable();
        if r.iter().all(|&k| k) {
            return self.clone();
        }
        self.restrict(&r)
    }

    /// Nonblocking iff every reachable state is coreachable. The witness is
    /// the first state in breadth-first order where a blocked run gets
    /// trapped: a member of a bottom component of the reachable,
    /// non-coreachable states (a deadlock or a livelock).
    pub fn is_nonblocking(&self) -> Verdict {
        let reach = self.reachable();
        let co = self.coreachable();
        let blocking = |s: StateId| reach[s.index()] && !co[s.index()];
        if !self.states().any(blocking) {
            return Verdict::pass();
        }
        let comps = Components::compute(self, blocking);
        let access = self.access_words();
        let s = self
            .bfs_order()
            .into_iter()
            .find(|&s| blocking(s) && comps.is_bottom(self, comps.comp[s.index()]))
            .expect("every blocking region has a bottom component");
        Verdict::fail(vec![Witness {
            state: self.name(s).to_string(),
            access: self
                .alphabet()
                .word_names(access[s.index()].as_ref().expect("reachable")),
            trace: Vec::new(),
            cycle: Vec::new(),
            kind: WitnessKind::Unreachable,
            bound: None,
            marker: None,
        }])
    }

    /// Totalises with one dump state and swaps marked and unmarked states.
    /// The dump state is only added if some transition is undefined.
    pub fn complement(&self) -> Generator {
        let m = self.num_events();
        let mut b = Builder::with_capacity(self.alphabet().clone(), self.num_states() + 1);
        for s in self.states() {
            b.add_state(self.name(s).to_string(), !self.is_marked(s));
        }
        let needs_dump = self.is_empty() || self.states().any(|s| self.out(s).count() < m);
        let dump = needs_dump.then(|| {
            let mut name = "dump".to_string();
            while self.find_state(&name).is_some() {
                name.push('_');
            }
            b.add_state(name, true)
        });
        for s in self.states() {
            for e in self.alphabet().ids() {
                let t = self.succ(s, e).or(dump).expect("dump present when partial");
                b.set(s, e, t);
            }
        }
        if let Some(d) = dump {
            for e in self.alphabet().ids() {
                b.set(d, e, d);
            }
        }
        b.finish(self.initial().or(dump))
    }
}

/// Reachable part of the synchronous product. Composite states are named
/// `(a,b)`.
pub fn product(a: &Generator, b: &Generator) -> Result<Generator> {
    a.alphabet().ensure_same(b.alphabet())?;
    Ok(product_unchecked(a, b))
}

pub(crate) fn product_unchecked(a: &Generator, b: &Generator) -> Generator {
    sync_product(a, b).0
}

/// Reachable synchronous product together with the component pair of each
/// product state.
pub(crate) fn sync_product(a: &Generator, b: &Generator) -> (Generator, Vec<(StateId, StateId)>) {
    let mut out = Builder::new(a.alphabet().clone());
    let (Some(a0), Some(b0)) = (a.initial(), b.initial()) else {
        return (out.finish(None), Vec::new());
    };
    let nb = b.num_states();
    let mut index: HashMap<usize, StateId> = HashMap::new();
    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut intern =
        |out: &mut Builder, pairs: &mut Vec<(StateId, StateId)>, x: StateId, y: StateId| {
            *index.entry(x.index() * nb + y.index()).or_insert_with(|| {
                pairs.push((x, y));
                out.add_state(
                    format!("({},{})", a.name(x), b.name(y)),
                    a.is_marked(x) && b.is_marked(y),
                )
            })
        };
    let start = intern(&mut out, &mut pairs, a0, b0);
    let mut current = 0usize;
    while current < pairs.len() {
        let (x, y) = pairs[current];
        let src = StateId(current as u32);
        current += 1;
        for (e, x2) in a.out(x) {
            if let Some(y2) = b.succ(y, e) {
                let dst = intern(&mut out, &mut pairs, x2, y2);
                out.set(src, e, dst);
            }
        }
    }
    (out.finish(Some(start)), pairs)
}

/// Generator marking `L_m(a) ∪ L_m(b)`, built as the complement of the
/// product of complements and then trimmed.
pub fn union_marked(a: &Generator, b: &Generator) -> Result<Generator> {
    a.alphabet().ensure_same(b.alphabet())?;
    let both_out = product_unchecked(&a.complement(), &b.complement());
    Ok(both_out.complement().trim())
}

/// Relation between two marked languages. Witnesses are shortest
/// distinguishing strings, least in event order among those.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LanguageRelation {
    Equal,
    /// `L_m(a) ⊊ L_m(b)`; the witness is in `b` only.
    ASubsetB {
        witness: Word,
    },
    /// `L_m(b) ⊊ L_m(a)`; the witness is in `a` only.
    BSubsetA {
        witness: Word,
    },
    Incomparable {
        only_a: Word,
        only_b: Word,
    },
}

impl LanguageRelation {
    pub fn is_equal(&self) -> bool {
        matches!(self, LanguageRelation::Equal)
    }

    /// True when `L_m(a) ⊆ L_m(b)`.
    pub fn a_within_b(&self) -> bool {
        matches!(
            self,
            LanguageRelation::Equal | LanguageRelation::ASubsetB { .. }
        )
    }

    pub fn b_within_a(&self) -> bool {
        matches!(
            self,
            LanguageRelation::Equal | LanguageRelation::BSubsetA { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            LanguageRelation::Equal => "equal",
            LanguageRelation::ASubsetB { .. } => "a_subset_b",
            LanguageRelation::BSubsetA { .. } => "b_subset_a",
            LanguageRelation::Incomparable { .. } => "incomparable",
        }
    }
}

/// Decides the relation between `L_m(a)` and `L_m(b)` by a breadth-first
/// walk over pairs of states, undefined moves going to an implicit dump.
pub fn marked_language_compare(a: &Generator, b: &Generator) -> Result<LanguageRelation> {
    a.alphabet().ensure_same(b.alphabet())?;
    let (only_a, only_b) = distinguish(a, b);
    Ok(match (only_a, only_b) {
        (None, None) => LanguageRelation::Equal,
        (None, Some(w)) => LanguageRelation::ASubsetB { witness: w },
        (Some(w), None) => LanguageRelation::BSubsetA { witness: w },
        (Some(only_a), Some(only_b)) => LanguageRelation::Incomparable { only_a, only_b },
    })
}

fn distinguish(a: &Generator, b: &Generator) -> (Option<Word>, Option<Word>) {
    // Pair encoding: index + 1, with 0 for the dump.
    let enc = |s: Option<StateId>| s.map_or(0usize, |s| s.index() + 1);
    let wb = b.num_states() + 1;
    let start = (a.initial(), b.initial());
    if start == (None, None) {
        return (None, None);
    }
    let mut parent: HashMap<usize, (usize, EventId)> = HashMap::new();
    let key = |p: (Option<StateId>, Option<StateId>)| enc(p.0) * wb + enc(p.1);
    let start_key = key(start);
    let mut visited: HashSet<usize> = HashSet::from([start_key]);
    let mut queue = VecDeque::from([start]);
    let mut only_a: Option<usize> = None;
    let mut only_b: Option<usize> = None;
    while let Some(p @ (x, y)) = queue.pop_front() {
        let k = key(p);
        let ma = x.is_some_and(|x| a.is_marked(x));
        let mb = y.is_some_and(|y| b.is_marked(y));
        if ma && !mb && only_a.is_none() {
            only_a = Some(k);
        }
        if mb && !ma && only_b.is_none() {
            only_b = Some(k);
        }
        if only_a.is_some() && only_b.is_some() {
            break;
        }
        for e in a.alphabet().ids() {
            let nx = x.and_then(|x| a.succ(x, e));
            let ny = y.and_then(|y| b.succ(y, e));
            if nx.is_none() && ny.is_none() {
                continue;
            }
            let nk = key((nx, ny));
            if visited.insert(nk) {
                parent.insert(nk, (k, e));
                queue.push_back((nx, ny));
            }
        }
    }
    let word_to = |mut k: usize| {
        let mut w = Vec::new();
        while let Some(&(p, e)) = parent.get(&k) {
            w.push(e);
            k = p;
        }
        w.reverse();
        w
    };
    (only_a.map(word_to), only_b.map(word_to))
}

/// Walks `a` and `b` in lockstep and returns the first string (breadth-first,
/// event order) that `b` generates but `a` does not, if any. Both are
/// restricted to their reachable parts.
pub(crate) fn closed_escape(a: &Generator, b: &Generator) -> Option<Word> {
    let (Some(a0), Some(b0)) = (a.initial(), b.initial()) else {
        return None;
    };
    let nb = b.num_states();
    let mut parent: HashMap<usize, (usize, EventId)> = HashMap::new();
    let mut seen = vec![false; a.num_states() * nb];
    seen[a0.index() * nb + b0.index()] = true;
    let mut queue = VecDeque::from([(a0, b0)]);
    while let Some((x, y)) = queue.pop_front() {
        let k = x.index() * nb + y.index();
        for (e, y2) in b.out(y) {
            match a.succ(x, e) {
                None => {
                    let mut w = vec![e];
                    let mut k = k;
                    while let Some(&(p, e)) = parent.get(&k) {
                        w.push(e);
                        k = p;
                    }
                    w.reverse();
                    return Some(w);
                }
                Some(x2) => {
                    let k2 = x2.index() * nb + y2.index();
                    if !seen[k2] {
                        seen[k2] = true;
                        parent.insert(k2, (k, e));
                        queue.push_back((x2, y2));
                    }
                }
            }
        }
    }
    None
}

/// Error unless `L_m(inner) ⊆ L_m(outer)`.
pub(crate) fn ensure_marked_within(
    inner: &Generator,
    outer: &Generator,
    what: &'static str,
) -> Result<()> {
    match marked_language_compare(inner, outer)? {
        LanguageRelation::Equal | LanguageRelation::ASubsetB { .. } => Ok(()),
        LanguageRelation::BSubsetA { witness }
        | LanguageRelation::Incomparable {
            only_a: witness, ..
        } => Err(Error::Containment {
            relation: what,
            witness: inner.alphabet().render(&witness),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{Controllability, Event, RawAutomaton};

    fn gen(
        events: &[&str],
        states: &[&str],
        init: &str,
        marked: &[&str],
        trans: &[(&str, &str, &str)],
    ) -> Generator {
        RawAutomaton {
            alphabet: events
                .iter()
                .map(|e| Event::new(*e, Controllability::Controllable))
                .collect(),
            states: states.iter().map(|s| s.to_string()).collect(),
            initial: if init.is_empty() {
                vec![]
            } else {
                vec![init.to_string()]
            },
            marked: marked.iter().map(|s| s.to_string()).collect(),
            transitions: trans
                .iter()
                .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
                .collect(),
        }
        .validate()
        .unwrap()
    }

    const ABC: &[&str] = &["a", "b", "c"];

    fn f1() -> Generator {
        gen(
            &["a", "b"],
            &["A", "B"],
            "A",
            &["A"],
            &[("A", "a", "B"), ("B", "b", "A")],
        )
    }

    fn f2() -> Generator {
        gen(
            ABC,
            &["0", "1", "2"],
            "0",
            &["2"],
            &[("0", "a", "1"), ("1", "b", "1"), ("1", "c", "2")],
        )
    }

    fn f2_cut() -> Generator {
        gen(
            ABC,
            &["0", "1", "2"],
            "0",
            &["2"],
            &[("0", "a", "1"), ("1", "b", "1")],
        )
    }

    fn set(g: &Generator, flags: &[bool]) -> Vec<String> {
        g.states()
            .filter(|s| flags[s.index()])
            .map(|s| g.name(s).to_string())
            .collect()
    }

    fn w(g: &Generator, s: &str) -> Word {
        g.alphabet().parse_word(s).unwrap()
    }

    #[test]
    fn reachable_examples() {
        assert_eq!(set(&f1(), &f1().reachable()), ["A", "B"]);
        let g = gen(
            &["a", "b"],
            &["A", "B", "C"],
            "A",
            &["A"],
            &[("A", "a", "B"), ("B", "b", "A")],
        );
        assert_eq!(set(&g, &g.reachable()), ["A", "B"]);
        let e = Generator::empty(f1().alphabet().clone());
        assert!(e.reachable().is_empty());
    }

    #[test]
    fn coreachable_examples() {
        assert_eq!(set(&f1(), &f1().coreachable()), ["A", "B"]);
        assert_eq!(set(&f2(), &f2().coreachable()), ["0", "1", "2"]);
        assert_eq!(set(&f2_cut(), &f2_cut().coreachable()), ["2"]);
    }

    #[test]
    fn trim_examples() {
        assert_eq!(f1().trim(), f1());
        assert!(f2_cut().trim().is_empty());
        let with_extra = gen(
            ABC,
            &["0", "1", "2", "3"],
            "0",
            &["2", "3"],
            &[
                ("0", "a", "1"),
                ("1", "b", "1"),
                ("1", "c", "2"),
                ("3", "a", "2"),
            ],
        );
        assert_eq!(with_extra.trim(), f2());
    }

    #[test]
    fn nonblocking_examples() {
        assert!(f1().is_nonblocking().holds);
        let v = f2_cut().is_nonblocking();
        assert!(!v.holds);
        assert_eq!(v.witnesses[0].state, "1");
        assert_eq!(v.witnesses[0].access, ["a"]);
        assert!(
            Generator::empty(f1().alphabet().clone())
                .is_nonblocking()
                .holds
        );
    }

    #[test]
    fn product_examples() {
        let p = product(&f1(), &f1()).unwrap();
        assert!(marked_language_compare(&p, &f1()).unwrap().is_equal());
        assert_eq!(p.name(p.initial().unwrap()), "(A,A)");

        let all = gen(
            ABC,
            &["u"],
            "u",
            &["u"],
            &[("u", "a", "u"), ("u", "b", "u"), ("u", "c", "u")],
        );
        let p = product(&f2(), &all).unwrap();
        assert!(marked_language_compare(&p, &f2()).unwrap().is_equal());

        assert!(matches!(
            product(&f1(), &f2()),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn product_with_disjoint_initial_event_is_empty() {
        // F1 over {a,b,c} and an F2 variant whose first event is c.
        let f1c = gen(
            ABC,
            &["A", "B"],
            "A",
            &["A"],
            &[("A", "a", "B"), ("B", "b", "A")],
        );
        let f2c = gen(
            ABC,
            &["0", "1", "2"],
            "0",
            &["2"],
            &[("0", "c", "1"), ("1", "b", "1"), ("1", "a", "2")],
        );
        let p = product(&f1c, &f2c).unwrap();
        assert!(p.trim().is_empty());
        // bounded cross-check up to length 6
        let mut words: Vec<Word> = vec![vec![]];
        for _ in 0..6 {
            let next: Vec<Word> = words
                .iter()
                .flat_map(|w| {
                    f1c.alphabet().ids().map(move |e| {
                        let mut w = w.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
            for w in &words {
                assert!(!(f1c.accepts(w) && f2c.accepts(w)));
            }
            words = next;
        }
    }

    #[test]
    fn complement_examples() {
        let e = Generator::empty(f1().alphabet().clone());
        let u = e.complement();
        assert_eq!(u.num_states(), 1);
        assert_eq!(u.num_transitions(), 2);
        assert!(u.accepts(&w(&u, "abba")));

        let c = f1().complement();
        assert!(c.accepts(&w(&c, "a")));
        assert!(!c.accepts(&[]));
        assert!(!c.accepts(&w(&c, "ab")));
        assert!(c.accepts(&w(&c, "b")));
        let cc = c.complement();
        assert!(marked_language_compare(&cc, &f1()).unwrap().is_equal());
    }

    #[test]
    fn union_examples() {
        let e = Generator::empty(f2().alphabet().clone());
        assert!(
            marked_language_compare(&union_marked(&f2(), &e).unwrap(), &f2())
                .unwrap()
                .is_equal()
        );
        assert!(
            marked_language_compare(&union_marked(&f2(), &f2()).unwrap(), &f2())
                .unwrap()
                .is_equal()
        );

        let only_a = gen(ABC, &["0", "1"], "0", &["1"], &[("0", "a", "1")]);
        let only_b = gen(ABC, &["0", "1"], "0", &["1"], &[("0", "b", "1")]);
        let u = union_marked(&only_a, &only_b).unwrap();
        let lang = crate::oracle::enumerate_bounded(&u, 4).unwrap();
        let got: Vec<String> = lang.marked.iter().map(|w| u.alphabet().render(w)).collect();
        assert_eq!(got, ["a", "b"]);
    }

    #[test]
    fn compare_examples() {
        assert!(marked_language_compare(&f1(), &f1().trim())
            .unwrap()
            .is_equal());
        let ac = gen(
            ABC,
            &["0", "1", "2"],
            "0",
            &["2"],
            &[("0", "a", "1"), ("1", "c", "2")],
        );
        match marked_language_compare(&ac, &f2()).unwrap() {
            LanguageRelation::ASubsetB { witness } => assert_eq!(witness, w(&ac, "abc")),
            other => panic!("{other:?}"),
        }
        let only_a = gen(ABC, &["0", "1"], "0", &["1"], &[("0", "a", "1")]);
        let only_b = gen(ABC, &["0", "1"], "0", &["1"], &[("0", "b", "1")]);
        match marked_language_compare(&only_a, &only_b).unwrap() {
            LanguageRelation::Incomparable {
                only_a: x,
                only_b: y,
            } => {
                assert_eq!(x, w(&only_a, "a"));
                assert_eq!(y, w(&only_a, "b"));
            }
            other => panic!("{other:?}"),
        }
    }
}
