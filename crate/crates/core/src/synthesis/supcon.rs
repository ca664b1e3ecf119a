use crate::automaton::ops::{ensure_marked_within, sync_product};
use crate::automaton::{Generator, StateId};
use crate::error::Result;

use super::trace::SynthesisTrace;

/// Supremal controllable sublanguage of `L_m(k)` with respect to `g`.
///
/// Works on the product of `g` and `k`: a state is bad when some
/// uncontrollable event is enabled in the plant but leads nowhere alive in
/// the candidate. Removing bad states and trimming repeat until nothing
/// changes.
pub fn supcon(g: &Generator, k: &Generator) -> Result<Generator> {
    supcon_traced(g, k, None)
}

pub fn supcon_traced(
    g: &Generator,
    k: &Generator,
    mut trace: Option<&mut SynthesisTrace>,
) -> Result<Generator> {
    g.alphabet().ensure_same(k.alphabet())?;
    ensure_marked_within(k, g, "marked-language containment L_m(k) ⊆ L_m(g)")?;
    let (p, pairs) = sync_product(g, k);
    let unc: Vec<_> = g.alphabet().uncontrollable().collect();
    let mut alive = vec![true; p.num_states()];
    trim_mask(&p, &mut alive);

    let mut round = 0;
    loop {
        round += 1;
        let bad: Vec<StateId> = p
            .states()
            .filter(|s| alive[s.index()])
            .filter(|&s| {
                let q = pairs[s.index()].0;
                unc.iter().any(|&e| {
                    g.succ(q, e).is_some() && !p.succ(s, e).is_some_and(|t| alive[t.index()])
                })
            })
            .collect();
        if bad.is_empty() {
            break;
        }
        let before = alive.iter().filter(|&&a| a).count();
        if let Some(t) = trace.as_deref_mut() {
            for &s in &bad {
                for (e, d) in p.out(s) {
                    if alive[d.index()] {
                        t.remove(
                            "supcon",
                            &p,
                            s,
                            e,
                            d,
                            "source disables an uncontrollable event",
                        );
                    }
                }
            }
        }
        for &s in &bad {
            alive[s.index()] = false;
        }
        let snapshot = alive.clone();
        trim_mask(&p, &mut alive);
        if let Some(t) = trace.as_deref_mut() {
            for s in p
                .states()
                .filter(|s| snapshot[s.index()] && !alive[s.index()])
            {
                for (e, d) in p.out(s) {
                    if snapshot[d.index()] {
                        t.remove("supcon", &p, s, e, d, "blocking after removal");
                    }
                }
            }
            let after = alive.iter().filter(|&&a| a).count();
            t.steps.push(super::trace::TraceStep {
                algorithm: "supcon".into(),
                step: format!("round {round}"),
                states_before: before,
                states_after: after,
                transitions_before: p.num_transitions(),
                transitions_after: p.num_transitions(),
                language_unchanged: None,
                note: format!("{} bad states", bad.len()),
            });
        }
    }
    let out = p.restrict(&alive);
    if let Some(t) = trace {
        t.step("supcon", "done", &p, &out);
    }
    Ok(out)
}

/// Clears every alive state that is unreachable or non-coreachable within
/// the alive subgraph.
fn trim_mask(p: &Generator, alive: &mut [bool]) {
    let mut reach = vec![false; p.num_states()];
    if let Some(x0) = p.initial().filter(|s| alive[s.index()]) {
        reach[x0.index()] = true;
        let mut stack = vec![x0];
        while let Some(s) = stack.pop() {
            for (_, t) in p.out(s) {
                if alive[t.index()] && !reach[t.index()] {
                    reach[t.index()] = true;
                    stack.push(t);
                }
            }
        }
    }
    let target: Vec<bool> = p
        .states()
        .map(|s| reach[s.index()] && p.is_marked(s))
        .collect();
    let mut co = target.clone();
    let rev = p.reverse_edges();
    let mut stack: Vec<StateId> = p.states().filter(|s| target[s.index()]).collect();
    while let Some(s) = stack.pop() {
        for &r in &rev[s.index()] {
            if reach[r.index()] && !co[r.index()] {
                co[r.index()] = true;
                stack.push(r);
            }
        }
    }
    for (i, a) in alive.iter_mut().enumerate() {
        *a = *a && reach[i] && co[i];
    }
}

/// Supremal controllable and quantitatively completable sublanguage: one
/// pass of `sup_qc` followed by `supcon` suffices, since removing
/// uncontrollable violations keeps quantitative completability.
pub fn sup_cqc(g: &Generator, k: &Generator, n: u32) -> Result<Generator> {
    sup_cqc_traced(g, k, n, None)
}

pub fn sup_cqc_traced(
    g: &Generator,
    k: &Generator,
    n: u32,
    mut trace: Option<&mut SynthesisTrace>,
) -> Result<Generator> {
    g.alphabet().ensure_same(k.alphabet())?;
    ensure_marked_within(k, g, "marked-language containment L_m(k) ⊆ L_m(g)")?;
    let q = super::supqc::sup_qc_with(k, n, Default::default(), trace.as_deref_mut())?;
    supcon_traced(g, &q, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{is_controllable, is_quantitatively_completable};
    use crate::automaton::marked_language_compare;
    use crate::synthesis::sup_qc;
    use crate::test_fixtures::*;

    fn same(a: &Generator, b: &Generator) -> bool {
        marked_language_compare(a, b).unwrap().is_equal()
    }

    #[test]
    fn full_spec_is_fixpoint() {
        let g = f3();
        assert!(same(&supcon(&g, &g).unwrap(), &g));
    }

    #[test]
    fn disabled_uncontrollable_at_start_empties() {
        assert!(supcon(&unc_plant(), &only_a_spec()).unwrap().is_empty());
    }

    #[test]
    fn all_controllable_is_trim() {
        let g = f3();
        let k = g.with_marked([g.find_state("1").unwrap()]);
        assert!(same(&supcon(&g, &k).unwrap(), &k.trim()));
    }

    #[test]
    fn prunes_to_controllable_part() {
        // plant: 0 -a-> 1 -u-> 2, 0 -b-> 3, markers 1,2,3; spec forbids u
        let (g, k) = prune_case();
        let s = supcon(&g, &k).unwrap();
        assert!(is_controllable(&g, &s).unwrap().holds);
        assert!(s.accepts(&word(&g, "b")));
        assert!(!s.accepts(&word(&g, "a")));
    }

    #[test]
    fn lasso_with_uncontrollable_b() {
        let g = f2_b_unc();
        let s = sup_cqc(&g, &g, 2).unwrap();
        assert!(is_controllable(&g, &s).unwrap().holds);
        assert!(is_quantitatively_completable(&s, 2).unwrap().holds);
        // b cannot be disabled at state 1, so the only candidate goes
        assert!(s.is_empty());
    }

    #[test]
    fn cqc_all_controllable_equals_supqc() {
        let g = f2();
        for n in 1..=4 {
            let a = sup_cqc(&g, &g, n).unwrap();
            let b = sup_qc(&g, n).unwrap();
            assert!(same(&a, &b));
        }
    }

    #[test]
    fn supcon_requires_containment() {
        let g = f3();
        let k = f3().with_all_marked();
        assert!(supcon(&g, &k).is_err());
    }
}
