//! Maximal first-passage distances to a target set.
//!
//! The supremum of first-passage string lengths from `x` is unbounded
//! exactly when a cycle of non-target states that can still reach the target
//! is reachable from `x` without passing through the target. The profile is
//! computed by strongly connected components on the non-target states that
//! can reach the target, followed by a longest-path pass over the
//! condensation, which Tarjan's algorithm already emits in reverse
//! topological order.

use std::collections::VecDeque;

use crate::automaton::scc::{Components, NO_COMP};
use crate::automaton::{EventId, Generator, StateId, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Finite(u32),
    Infinite,
    /// No string from the state reaches the target.
    Unreachable,
}

impl Distance {
    /// True if the distance is finite and at most `bound`.
    pub fn within(self, bound: u32) -> bool {
        matches!(self, Distance::Finite(k) if k <= bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PassageWitness {
    /// Longest first-passage string.
    Path(Word),
    /// `stem` leads to a state on `cycle`; both avoid the target.
    Lasso { stem: Word, cycle: Word },
}

#[derive(Debug, Clone)]
pub struct FirstPassageProfile {
    target: Vec<bool>,
    values: Vec<Distance>,
    // argmax successor for finite non-target states
    next: Vec<Option<(EventId, StateId)>>,
    // component id within the non-target, target-reaching subgraph
    comp: Vec<u32>,
    cyclic_comp: Vec<bool>,
}

impl FirstPassageProfile {
    pub fn compute(g: &Generator, target: &[bool]) -> Self {
        let n = g.num_states();
        assert_eq!(target.len(), n, "target must cover every state");
        let reaches = g.can_reach(target);
        let in_h = |s: StateId| reaches[s.index()] && !target[s.index()];

        let mut values: Vec<Distance> = (0..n)
            .map(|i| {
                if target[i] {
                    Distance::Finite(0)
                } else {
                    Distance::Unreachable
                }
            })
            .collect();
        let mut next = vec![None; n];
        let comps = Components::compute(g, in_h);
        let mut cyclic_comp = Vec::with_capacity(comps.members.len());
        // emission order puts every successor component first
        for (id, group) in comps.members.iter().enumerate() {
            let cyclic = comps.is_cyclic(g, id as u32);
            cyclic_comp.push(cyclic);
            if cyclic {
                for &w in group {
                    values[w.index()] = Distance::Infinite;
                }
            } else {
                let v = group[0];
                let (value, choice) = longest_step(g, v, target, &values, &in_h);
                values[v.index()] = value;
                next[v.index()] = choice;
            }
        }
        let comp = comps.comp;

        FirstPassageProfile {
            target: target.to_vec(),
            values,
            next,
            comp,
            cyclic_comp,
        }
    }

    pub fn value(&self, s: StateId) -> Distance {
        self.values[s.index()]
    }

    pub fn values(&self) -> &[Distance] {
        &self.values
    }

    pub fn target(&self) -> &[bool] {
        &self.target
    }

    /// Witness for the value at `s`; `None` when unreachable.
    pub fn witness(&self, g: &Generator, s: StateId) -> Option<PassageWitness> {
        match self.values[s.index()] {
            Distance::Unreachable => None,
            Distance::Finite(_) => {
                let mut word = Vec::new();
                let mut cur = s;
                while !self.target[cur.index()] {
                    let (e, t) = self.next[cur.index()].expect("finite state has a choice");
                    word.push(e);
                    cur = t;
                }
                Some(PassageWitness::Path(word))
            }
            Distance::Infinite => {
                let (stem, entry) = self.stem_to_cycle(g, s);
                let cycle = self.shortest_cycle(g, entry);
                Some(PassageWitness::Lasso { stem, cycle })
            }
        }
    }

    fn in_h(&self, s: StateId) -> bool {
        self.comp[s.index()] != NO_COMP
    }

    fn is_cyclic(&self, s: StateId) -> bool {
        self.in_h(s) && self.cyclic_comp[self.comp[s.index()] as usize]
    }

    fn bfs_path(
        &self,
        g: &Generator,
        from: StateId,
        allowed: impl Fn(StateId) -> bool,
        goal: impl Fn(StateId) -> bool,
        include_start: bool,
    ) -> Option<(Word, StateId)> {
        if include_start && goal(from) {
            return Some((Vec::new(), from));
        }
        let mut parent: Vec<Option<(StateId, EventId)>> = vec![None; g.num_states()];
        let mut seen = vec![false; g.num_states()];
        seen[from.index()] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for (e, w) in g.out(v) {
                if !allowed(w) {
                    continue;
                }
                if goal(w) {
                    let mut word = vec![e];
                    let mut cur = v;
                    while let Some((p, pe)) = parent[cur.index()] {
                        word.push(pe);
                        cur = p;
                    }
                    word.reverse();
                    return Some((word, w));
                }
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    parent[w.index()] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        None
    }

    fn stem_to_cycle(&self, g: &Generator, s: StateId) -> (Word, StateId) {
        self.bfs_path(g, s, |w| self.in_h(w), |w| self.is_cyclic(w), true)
            .expect("infinite state reaches a cyclic component")
    }

    fn shortest_cycle(&self, g: &Generator, c: StateId) -> Word {
        let id = self.comp[c.index()];
        self.bfs_path(g, c, |w| self.comp[w.index()] == id, |w| w == c, false)
            .expect("cyclic component has a cycle")
            .0
    }
}

fn longest_step(
    g: &Generator,
    v: StateId,
    target: &[bool],
    values: &[Distance],
    in_h: &impl Fn(StateId) -> bool,
) -> (Distance, Option<(EventId, StateId)>) {
    let mut best: Option<(u32, EventId, StateId)> = None;
    for (e, w) in g.out(v) {
        let len = if target[w.index()] {
            1
        } else if in_h(w) {
            match values[w.index()] {
                Distance::Finite(k) => k + 1,
                Distance::Infinite => return (Distance::Infinite, None),
                Distance::Unreachable => unreachable!("H states reach the target"),
            }
        } else {
            continue;
        };
        if best.is_none_or(|(b, _, _)| len > b) {
            best = Some((len, e, w));
        }
    }
    let (len, e, w) = best.expect("H state has a successor towards the target");
    (Distance::Finite(len), Some((e, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::*;

    fn target(g: &Generator, names: &[&str]) -> Vec<bool> {
        g.states().map(|s| names.contains(&g.name(s))).collect()
    }

    fn val(g: &Generator, p: &FirstPassageProfile, name: &str) -> Distance {
        p.value(g.find_state(name).unwrap())
    }

    #[test]
    fn f1_profile() {
        let g = f1();
        let p = FirstPassageProfile::compute(&g, &target(&g, &["A"]));
        assert_eq!(val(&g, &p, "A"), Distance::Finite(0));
        assert_eq!(val(&g, &p, "B"), Distance::Finite(1));
        let b = g.find_state("B").unwrap();
        assert_eq!(p.witness(&g, b), Some(PassageWitness::Path(word(&g, "b"))));
    }

    #[test]
    fn lasso_profile() {
        let g = f2();
        let p = FirstPassageProfile::compute(&g, &target(&g, &["2"]));
        assert_eq!(val(&g, &p, "0"), Distance::Infinite);
        assert_eq!(val(&g, &p, "1"), Distance::Infinite);
        assert_eq!(val(&g, &p, "2"), Distance::Finite(0));
        let s1 = g.find_state("1").unwrap();
        assert_eq!(
            p.witness(&g, s1),
            Some(PassageWitness::Lasso {
                stem: vec![],
                cycle: word(&g, "b")
            })
        );
        let s0 = g.find_state("0").unwrap();
        assert_eq!(
            p.witness(&g, s0),
            Some(PassageWitness::Lasso {
                stem: word(&g, "a"),
                cycle: word(&g, "b")
            })
        );
    }

    #[test]
    fn all_target_is_zero() {
        let g = f3();
        let all = vec![true; g.num_states()];
        let p = FirstPassageProfile::compute(&g, &all);
        assert!(p.values().iter().all(|&d| d == Distance::Finite(0)));
    }

    #[test]
    fn unreachable_is_separate_from_infinite() {
        let g = f2_cut();
        let p = FirstPassageProfile::compute(&g, &target(&g, &["2"]));
        assert_eq!(val(&g, &p, "0"), Distance::Unreachable);
        assert_eq!(val(&g, &p, "1"), Distance::Unreachable);
        assert_eq!(p.witness(&g, g.find_state("1").unwrap()), None);
    }

    #[test]
    fn tri_cycle_per_marker() {
        let g = f3();
        let p1 = FirstPassageProfile::compute(&g, &target(&g, &["1"]));
        assert_eq!(val(&g, &p1, "0"), Distance::Finite(1));
        assert_eq!(val(&g, &p1, "2"), Distance::Finite(2));
        let p2 = FirstPassageProfile::compute(&g, &target(&g, &["2"]));
        assert_eq!(val(&g, &p2, "0"), Distance::Finite(2));
        assert_eq!(val(&g, &p2, "1"), Distance::Finite(1));
    }
}
