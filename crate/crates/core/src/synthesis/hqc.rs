use crate::analysis::{marker_correspondence, BoundSpec};
use crate::automaton::ops::{ensure_marked_within, sync_product};
use crate::automaton::{marked_language_compare, product, Generator, StateId};
use crate::error::{Error, Result};

use super::supcon::supcon_traced;
use super::supqc::{sup_qc_with, Frontier};
use super::trace::SynthesisTrace;

/// Supremal heterogeneously quantitatively completable sublanguage of
/// `L_m(k)`. The bound keys must be exactly the plant markers that `k`
/// realises.
pub fn sup_hqc(g: &Generator, k: &Generator, bounds: &BoundSpec) -> Result<Generator> {
    sup_hqc_traced(g, k, bounds, None)
}

pub fn sup_hqc_traced(
    g: &Generator,
    k: &Generator,
    bounds: &BoundSpec,
    trace: Option<&mut SynthesisTrace>,
) -> Result<Generator> {
    let support = marker_correspondence(g, k)?;
    let resolved = bounds.resolve_exact(g, &support)?;
    sup_hqc_resolved(g, k, &resolved, trace)
}

/// Sweeps the markers in ascending plant-state order until a full sweep
/// leaves the marked language unchanged.
///
/// Markers in `bounds` that the current candidate no longer realises still
/// count: every nonempty sublanguage must reach each of them.
pub(crate) fn sup_hqc_resolved(
    g: &Generator,
    k: &Generator,
    bounds: &[(StateId, u32)],
    mut trace: Option<&mut SynthesisTrace>,
) -> Result<Generator> {
    let mut cand = k.trim().renumbered();
    let mut sweep = 0;
    loop {
        sweep += 1;
        let start = cand.clone();
        for &(q, n) in bounds {
            if cand.is_empty() {
                break;
            }
            let before = cand.clone();
            let gi = g.with_marked([q]);
            let (gk, pairs) = sync_product(&gi, &cand);
            // target: plant at q and the candidate in a marked state
            let gk = gk.with_marked(
                gk.states()
                    .filter(|s| {
                        let (pq, x) = pairs[s.index()];
                        pq == q && cand.is_marked(x)
                    })
                    .collect::<Vec<_>>(),
            );
            let x = sup_qc_with(&gk, n, Frontier::Stack, None)?;
            // restore the candidate's markers: the closed behaviour of x
            // intersected with the candidate's marked language
            cand = product(&x.with_all_marked(), &cand)?.trim().renumbered();
            if let Some(t) = trace.as_deref_mut() {
                t.step(
                    "sup_hqc",
                    format!("sweep {sweep}, marker {} (N={n})", g.name(q)),
                    &before,
                    &cand,
                );
            }
        }
        let unchanged = marked_language_compare(&start, &cand)?.is_equal();
        if let Some(t) = trace.as_deref_mut() {
            t.step("sup_hqc", format!("sweep {sweep} compare"), &start, &cand);
            t.compared(
                unchanged,
                "marked language of the candidate before and after the sweep",
            );
        }
        if unchanged || cand.is_empty() {
            break;
        }
    }
    if let Some(t) = trace {
        t.step("sup_hqc", "fixpoint", &cand, &cand);
    }
    Ok(cand)
}

/// Supremal controllable and heterogeneously quantitatively completable
/// sublanguage of `L_m(e) ∩ L_m(g)`: alternate `sup_hqc` and `supcon` to a
/// fixpoint.
pub fn sup_chqc(g: &Generator, e: &Generator, bounds: &BoundSpec) -> Result<Generator> {
    sup_chqc_traced(g, e, bounds, None)
}

pub fn sup_chqc_traced(
    g: &Generator,
    e: &Generator,
    bounds: &BoundSpec,
    mut trace: Option<&mut SynthesisTrace>,
) -> Result<Generator> {
    g.alphabet().ensure_same(e.alphabet())?;
    let k = product(g, e)?.trim().renumbered();
    let support = marker_correspondence(g, &k)?;
    let resolved = bounds.resolve_exact(g, &support)?;
    let mut cand = k;
    let mut round = 0;
    loop {
        round += 1;
        let h = sup_hqc_resolved(g, &cand, &resolved, trace.as_deref_mut())?;
        let c = supcon_traced(g, &h, trace.as_deref_mut())?.renumbered();
        let unchanged = marked_language_compare(&cand, &c)?.is_equal();
        if let Some(t) = trace.as_deref_mut() {
            t.step("sup_chqc", format!("round {round} compare"), &cand, &c);
            t.compared(
                unchanged,
                "marked language before and after sup_hqc then supcon",
            );
        }
        cand = c;
        if unchanged || cand.is_empty() {
            break;
        }
    }
    if let Some(t) = trace {
        t.step("sup_chqc", "fixpoint", &cand, &cand);
    }
    Ok(cand)
}

/// Result containment check shared by the command-line front end.
pub fn ensure_result_within(result: &Generator, input: &Generator) -> Result<()> {
    ensure_marked_within(result, input, "result containment").map_err(|e| match e {
        Error::Containment { witness, .. } => Error::Containment {
            relation: "synthesis output ⊆ input",
            witness,
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{is_controllable, is_heterogeneously_quantitatively_completable};
    use crate::synthesis::sup_qc;
    use crate::test_fixtures::*;

    fn same(a: &Generator, b: &Generator) -> bool {
        marked_language_compare(a, b).unwrap().is_equal()
    }

    #[test]
    fn tri_cycle_already_completable() {
        let g = f3();
        let b: BoundSpec = "1=2,2=2".parse().unwrap();
        let s = sup_hqc(&g, &g, &b).unwrap();
        assert!(same(&s, &g));
    }

    #[test]
    fn tri_cycle_tight_bound_is_empty() {
        let g = f3();
        let b: BoundSpec = "1=1,2=2".parse().unwrap();
        assert!(sup_hqc(&g, &g, &b).unwrap().is_empty());
        assert!(sup_chqc(&g, &g, &b).unwrap().is_empty());
    }

    #[test]
    fn single_marker_matches_sup_qc() {
        let g = f3();
        let q2 = g.find_state("2").unwrap();
        let g2 = g.with_marked([q2]);
        for n in 1..=4 {
            let b = BoundSpec::new([("2".to_string(), n)]).unwrap();
            let h = sup_hqc(&g2, &g2, &b).unwrap();
            let q = sup_qc(&g2, n).unwrap();
            assert!(same(&h, &q), "N={n}");
        }
    }

    #[test]
    fn chqc_with_uncontrollable_c() {
        let g = f3_c_unc();
        let b: BoundSpec = "1=2,2=2".parse().unwrap();
        let s = sup_chqc(&g, &g, &b).unwrap();
        assert!(same(&s, &g));
        assert!(is_controllable(&g, &s).unwrap().holds);
        assert!(
            is_heterogeneously_quantitatively_completable(&g, &s, &b)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn outputs_pass_checker() {
        let g = f3();
        for (n1, n2) in [(1, 1), (2, 1), (3, 3), (2, 5)] {
            let b = BoundSpec::new([("1".to_string(), n1), ("2".to_string(), n2)]).unwrap();
            let s = sup_hqc(&g, &g, &b).unwrap();
            if !s.is_empty() {
                assert!(
                    is_heterogeneously_quantitatively_completable(&g, &s, &b)
                        .unwrap()
                        .holds
                );
            }
        }
    }

    #[test]
    fn trace_ends_in_fixpoint() {
        let g = f3();
        let b: BoundSpec = "1=2,2=2".parse().unwrap();
        let mut t = SynthesisTrace::new();
        sup_hqc_traced(&g, &g, &b, Some(&mut t)).unwrap();
        assert_eq!(t.steps.last().unwrap().step, "fixpoint");
        assert!(t.steps.iter().any(|s| s.language_unchanged == Some(true)));
    }

    #[test]
    fn empty_support_rejected() {
        let g = f3();
        let e = Generator::empty(g.alphabet().clone());
        let b: BoundSpec = "1=2".parse().unwrap();
        assert!(matches!(
            sup_hqc(&g, &e, &b),
            Err(Error::EmptyMarkerSupport)
        ));
    }
}
