//! Language route to the supremal quantitatively completable sublanguage.
//!
//! With `Σ^{≤j}` the strings of length at most `j`, let
//! `K_N = pre(K) ∩ (Σ^{≤N-1} ∪ KΣ^{≤N})`. A string of `K` lies in the
//! supremum iff every one of its prefixes lies in `K_N`. The construction
//! builds automata for the two parts of the union, intersects with the
//! closed behaviour of `K`, keeps the strings whose prefixes all stay inside
//! `K_N`, and finally intersects with `K` again.

use std::collections::HashMap;

use crate::automaton::{product, union_marked, Builder, Generator, StateId};
use crate::error::{Error, Result};

use super::trace::SynthesisTrace;

/// All strings of length at most `n - 1`: a chain of `n` marked states.
pub fn short_strings(k: &Generator, n: u32) -> Generator {
    let mut b = Builder::with_capacity(k.alphabet().clone(), n as usize);
    let ys: Vec<StateId> = (0..n).map(|i| b.add_state(format!("y{i}"), true)).collect();
    for w in ys.windows(2) {
        for e in k.alphabet().ids() {
            b.set(w[0], e, w[1]);
        }
    }
    b.finish(Some(ys[0]))
}

/// Deterministic automaton for `KΣ^{≤n}`: strings with a prefix in `L_m(k)`
/// followed by at most `n` further events.
///
/// A state pairs the run of `k` (or `None` once it has died) with the number
/// of steps since its last marked visit, or `None` when no marked visit lies
/// within the last `n` steps.
pub fn extend_by(k: &Generator, n: u32) -> Generator {
    type Key = (Option<StateId>, Option<u32>);
    let mut b = Builder::new(k.alphabet().clone());
    let Some(x0) = k.initial() else {
        return b.finish(None);
    };
    let name = |(x, j): Key| {
        let x = x.map_or("⊥", |x| k.name(x));
        match j {
            Some(j) => format!("({x},{j})"),
            None => format!("({x},-)"),
        }
    };
    let mut ids: HashMap<Key, StateId> = HashMap::new();
    let start: Key = (Some(x0), k.is_marked(x0).then_some(0));
    let mut todo = vec![start];
    ids.insert(start, b.add_state(name(start), start.1.is_some()));
    while let Some(key @ (x, j)) = todo.pop() {
        let src = ids[&key];
        for e in k.alphabet().ids() {
            let y = x.and_then(|x| k.succ(x, e));
            let j2 = match (y, j) {
                (Some(y), _) if k.is_marked(y) => Some(0),
                (_, Some(j)) if j < n => Some(j + 1),
                _ => None,
            };
            // once the run of k has died no marked visit can come back
            if y.is_none() && j2.is_none() {
                continue;
            }
            let next: Key = (y, j2);
            let dst = *ids.entry(next).or_insert_with(|| {
                todo.push(next);
                b.add_state(name(next), j2.is_some())
            });
            b.set(src, e, dst);
        }
    }
    b.finish(Some(ids[&start]))
}

/// Prefix restriction: the strings whose every prefix is marked in `a`,
/// all marked.
fn prefix_restriction(a: &Generator) -> Generator {
    let keep: Vec<bool> = a.states().map(|s| a.is_marked(s)).collect();
    a.restrict(&keep).reachable_part().with_all_marked()
}

pub fn sup_qc_language(k: &Generator, n: u32) -> Result<Generator> {
    sup_qc_language_traced(k, n, None)
}

pub fn sup_qc_language_traced(
    k: &Generator,
    n: u32,
    mut trace: Option<&mut SynthesisTrace>,
) -> Result<Generator> {
    if n == 0 {
        return Err(Error::ZeroBound);
    }
    let kt = k.trim();
    if kt.is_empty() {
        return Ok(kt);
    }
    let mut log = |step: &str, before: &Generator, after: &Generator| {
        if let Some(t) = trace.as_deref_mut() {
            t.step("sup_qc_language", step, before, after);
        }
    };
    let a1 = short_strings(&kt, n);
    log("A1 short strings", &kt, &a1);
    let a2 = extend_by(&kt, n);
    log("A2 bounded extension", &kt, &a2);
    let a3 = union_marked(&a1, &a2)?;
    log("A3 union", &a2, &a3);
    let a4 = product(&kt.with_all_marked(), &a3)?;
    log("A4 closed intersection", &a3, &a4);
    let a5 = prefix_restriction(&a4);
    log("A5 prefix restriction", &a4, &a5);
    let out = product(&a5, &kt)?.trim();
    log("done", &a5, &out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::marked_language_compare;
    use crate::oracle::enumerate_bounded;
    use crate::synthesis::sup_qc;
    use crate::test_fixtures::*;

    #[test]
    fn short_strings_language() {
        let g = f2();
        let a1 = short_strings(&g, 3);
        let lang = enumerate_bounded(&a1, 4).unwrap();
        assert!(lang.marked.iter().all(|w| w.len() <= 2));
        assert_eq!(lang.marked.len(), 1 + 3 + 9);
    }

    #[test]
    fn extension_language() {
        let g = f2();
        let a2 = extend_by(&g, 1);
        let lang = enumerate_bounded(&a2, 6).unwrap();
        // every word of L_m(f2) plus at most one event
        for w in &lang.marked {
            let ok = (0..=w.len())
                .rev()
                .any(|i| w.len() - i <= 1 && g.accepts(&w[..i]));
            assert!(ok, "{}", g.alphabet().render(w));
        }
        let abc = word(&g, "abc");
        assert!(a2.accepts(&abc));
        let mut abcb = abc.clone();
        abcb.extend(word(&g, "ba"));
        assert!(!a2.accepts(&abcb));
    }

    #[test]
    fn agrees_with_counter_route() {
        for k in [
            f1(),
            f2(),
            f3(),
            chain(),
            example2_cycle(),
            tri_one_marker(),
        ] {
            for n in 1..=5 {
                let a = sup_qc(&k, n).unwrap();
                let b = sup_qc_language(&k, n).unwrap();
                assert!(
                    marked_language_compare(&a, &b).unwrap().is_equal(),
                    "n={n} k={k:?}"
                );
            }
        }
    }

    #[test]
    fn empty_stays_empty() {
        let e = Generator::empty(f1().alphabet().clone());
        assert!(sup_qc_language(&e, 3).unwrap().is_empty());
    }
}
