//! Decision procedures for bounded coreachability, quantitative and
//! heterogeneous completability, marker correspondence and
//! controllability. Every negative verdict carries a replayable witness.

mod profile;

pub use profile::{Distance, FirstPassageProfile, PassageWitness};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::automaton::ops::{closed_escape, ensure_marked_within, sync_product};
use crate::automaton::{Generator, StateId, Word};
use crate::error::{Error, Result};
use crate::verdict::{Verdict, Witness, WitnessKind};

fn check_bound(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroBound)
    } else {
        Ok(())
    }
}

fn bounded_witness(
    g: &Generator,
    profile: &FirstPassageProfile,
    s: StateId,
    access: &Word,
    bound: u32,
) -> Witness {
    let names = |w: &[_]| g.alphabet().word_names(w);
    let (kind, trace, cycle) = match profile.witness(g, s) {
        None => (WitnessKind::Unreachable, Vec::new(), Vec::new()),
        Some(PassageWitness::Path(w)) => (WitnessKind::Path, names(&w), Vec::new()),
        Some(PassageWitness::Lasso { stem, cycle }) => {
            (WitnessKind::Cycle, names(&stem), names(&cycle))
        }
    };
    Witness {
        state: g.name(s).to_string(),
        access: names(access),
        trace,
        cycle,
        kind,
        bound: Some(bound),
        marker: None,
    }
}

/// First reachable state (breadth-first) whose first-passage distance to
/// `target` exceeds `bound` or is undefined.
fn first_violation(g: &Generator, target: &[bool], bound: u32) -> Option<Witness> {
    let profile = FirstPassageProfile::compute(g, target);
    let access = g.access_words();
    g.bfs_order()
        .into_iter()
        .take_while(|s| access[s.index()].is_some())
        .find(|&s| !profile.value(s).within(bound))
        .map(|s| bounded_witness(g, &profile, s, access[s.index()].as_ref().unwrap(), bound))
}

/// Every reachable state is `n`-step coreachable: nonblocking, and every
/// first-passage string to a marked state has length at most `n`.
pub fn is_quantitatively_nonblocking(g: &Generator, n: u32) -> Result<Verdict> {
    check_bound(n)?;
    let nb = g.is_nonblocking();
    if !nb.holds {
        return Ok(nb);
    }
    let marked: Vec<bool> = g.states().map(|s| g.is_marked(s)).collect();
    Ok(match first_violation(g, &marked, n) {
        None => Verdict::pass(),
        Some(w) => Verdict::fail(vec![w]),
    })
}

/// Quantitative completability of `L_m(k)` with respect to `n`, decided on
/// the trim generator.
pub fn is_quantitatively_completable(k: &Generator, n: u32) -> Result<Verdict> {
    check_bound(n)?;
    let kt = k.trim();
    if kt.is_empty() {
        return Ok(Verdict::pass());
    }
    is_quantitatively_nonblocking(&kt, n)
}

/// Plant marker states realised by the specification, and for each of
/// them the specification states reached together with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerCorrespondence {
    pub plant_markers: Vec<StateId>,
    pub rch: BTreeMap<StateId, BTreeSet<StateId>>,
}

impl MarkerCorrespondence {
    pub fn is_empty(&self) -> bool {
        self.plant_markers.is_empty()
    }

    pub fn marker_names<'g>(&self, g: &'g Generator) -> Vec<&'g str> {
        self.plant_markers.iter().map(|&q| g.name(q)).collect()
    }
}

/// Requires `L_m(k) ⊆ L_m(g)`.
pub fn marker_correspondence(g: &Generator, k: &Generator) -> Result<MarkerCorrespondence> {
    g.alphabet().ensure_same(k.alphabet())?;
    ensure_marked_within(k, g, "marked-language containment L_m(k) ⊆ L_m(g)")?;
    let (_, pairs) = sync_product(g, k);
    let mut rch: BTreeMap<StateId, BTreeSet<StateId>> = BTreeMap::new();
    for &(q, x) in &pairs {
        if k.is_marked(x) {
            debug_assert!(g.is_marked(q));
            rch.entry(q).or_default().insert(x);
        }
    }
    Ok(MarkerCorrespondence {
        plant_markers: rch.keys().copied().collect(),
        rch,
    })
}

/// Per-marker step bounds, keyed by plant state name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoundSpec {
    bounds: BTreeMap<String, u32>,
}

impl BoundSpec {
    pub fn new(entries: impl IntoIterator<Item = (String, u32)>) -> Result<Self> {
        let mut bounds = BTreeMap::new();
        for (q, n) in entries {
            check_bound(n)?;
            bounds.insert(q, n);
        }
        Ok(BoundSpec { bounds })
    }

    pub fn get(&self, marker: &str) -> Option<u32> {
        self.bounds.get(marker).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.bounds.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn min_bound(&self) -> Option<u32> {
        self.bounds.values().copied().min()
    }

    /// Resolves names against the plant, ordered by plant state id.
    pub(crate) fn resolve(&self, g: &Generator) -> Result<Vec<(StateId, u32)>> {
        let index = g.state_index();
        let mut unknown = Vec::new();
        let mut out = Vec::new();
        for (name, &n) in &self.bounds {
            match index.get(name.as_str()) {
                Some(&q) => out.push((q, n)),
                None => unknown.push(name.clone()),
            }
        }
        if !unknown.is_empty() {
            return Err(Error::BoundsMismatch {
                missing: Vec::new(),
                unexpected: unknown,
            });
        }
        out.sort();
        Ok(out)
    }

    /// Resolves and requires the key set to be exactly `support`.
    pub(crate) fn resolve_exact(
        &self,
        g: &Generator,
        support: &MarkerCorrespondence,
    ) -> Result<Vec<(StateId, u32)>> {
        if support.is_empty() {
            return Err(Error::EmptyMarkerSupport);
        }
        let resolved = self.resolve(g)?;
        let keys: BTreeSet<StateId> = resolved.iter().map(|&(q, _)| q).collect();
        let wanted: BTreeSet<StateId> = support.plant_markers.iter().copied().collect();
        if keys != wanted {
            return Err(Error::BoundsMismatch {
                missing: wanted
                    .difference(&keys)
                    .map(|&q| g.name(q).to_string())
                    .collect(),
                unexpected: keys
                    .difference(&wanted)
                    .map(|&q| g.name(q).to_string())
                    .collect(),
            });
        }
        Ok(resolved)
    }
}

impl FromStr for BoundSpec {
    type Err = Error;

    /// Parses `q=N[,q=N...]`.
    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (q, n) = part.split_once('=').ok_or_else(|| Error::Syntax {
                line: 1,
                column: 1,
                message: format!("bound {part:?} is not of the form state=N"),
            })?;
            let n: u32 = n.trim().parse().map_err(|_| Error::Syntax {
                line: 1,
                column: 1,
                message: format!("bound {part:?} has a non-numeric step count"),
            })?;
            entries.push((q.trim().to_string(), n));
        }
        BoundSpec::new(entries)
    }
}

impl fmt::Display for BoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bounds
            .iter()
            .map(|(q, n)| format!("{q}={n}"))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Heterogeneous completability of `L_m(k)` with respect to per-marker
/// bounds. The bound keys must be exactly the plant markers realised by
/// `k`, and there must be at least one.
pub fn is_heterogeneously_quantitatively_completable(
    g: &Generator,
    k: &Generator,
    bounds: &BoundSpec,
) -> Result<Verdict> {
    let support = marker_correspondence(g, k)?;
    let resolved = bounds.resolve_exact(g, &support)?;
    Ok(hqc_verdict(g, k, &resolved))
}

/// Works on the product of the plant with trim `k`, so that a target state
/// pins down both the specification state and the plant marker reached.
/// Bound keys with no realisation make every state violate condition (i).
pub(crate) fn hqc_verdict(g: &Generator, k: &Generator, bounds: &[(StateId, u32)]) -> Verdict {
    let kt = k.trim();
    if kt.is_empty() {
        return Verdict::pass();
    }
    let (p, pairs) = sync_product(g, &kt);
    let access = p.access_words();
    let order = p.bfs_order();
    let mut witnesses = Vec::new();
    for &(q, n) in bounds {
        let target: Vec<bool> = pairs
            .iter()
            .map(|&(pq, x)| pq == q && kt.is_marked(x))
            .collect();
        let profile = FirstPassageProfile::compute(&p, &target);
        let found = order
            .iter()
            .copied()
            .take_while(|s| access[s.index()].is_some())
            .find(|&s| !profile.value(s).within(n));
        if let Some(s) = found {
            let mut w = bounded_witness(&p, &profile, s, access[s.index()].as_ref().unwrap(), n);
            w.state = kt.name(pairs[s.index()].1).to_string();
            w.marker = Some(g.name(q).to_string());
            witnesses.push(w);
        }
    }
    if witnesses.is_empty() {
        Verdict::pass()
    } else {
        Verdict::fail(witnesses)
    }
}

/// Controllability of `L_m(k)` with respect to `g` and its uncontrollable
/// events. Requires the closed behaviour of trim `k` to lie in `L(g)`.
pub fn is_controllable(g: &Generator, k: &Generator) -> Result<Verdict> {
    g.alphabet().ensure_same(k.alphabet())?;
    let kt = k.trim();
    if let Some(w) = closed_escape(g, &kt) {
        return Err(Error::Containment {
            relation: "closed-behaviour containment L(k) ⊆ L(g)",
            witness: g.alphabet().render(&w),
        });
    }
    Ok(match first_disabled(g, &kt) {
        None => Verdict::pass(),
        Some(w) => Verdict::fail(vec![w]),
    })
}

fn first_disabled(g: &Generator, kt: &Generator) -> Option<Witness> {
    let (p, pairs) = sync_product(g, kt);
    let access = p.access_words();
    let unc: Vec<_> = g.alphabet().uncontrollable().collect();
    for s in p.bfs_order() {
        let (q, x) = pairs[s.index()];
        for &e in &unc {
            if g.succ(q, e).is_some() && kt.succ(x, e).is_none() {
                return Some(Witness {
                    state: kt.name(x).to_string(),
                    access: g.alphabet().word_names(access[s.index()].as_ref().unwrap()),
                    trace: vec![g.alphabet().name(e).to_string()],
                    cycle: Vec::new(),
                    kind: WitnessKind::Disabled,
                    bound: None,
                    marker: None,
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::*;

    #[test]
    fn qn_examples() {
        assert!(is_quantitatively_nonblocking(&f1(), 1).unwrap().holds);
        for n in 1..=10 {
            let v = is_quantitatively_nonblocking(&f2(), n).unwrap();
            assert!(!v.holds);
            assert_eq!(v.witnesses[0].kind, WitnessKind::Cycle);
            assert_eq!(v.witnesses[0].cycle, ["b"]);
        }
        assert!(
            is_quantitatively_nonblocking(&Generator::empty(f1().alphabet().clone()), 1)
                .unwrap()
                .holds
        );
        assert!(matches!(
            is_quantitatively_nonblocking(&f1(), 0),
            Err(Error::ZeroBound)
        ));
    }

    #[test]
    fn qn_requires_nonblocking() {
        let v = is_quantitatively_nonblocking(&f2_cut(), 5).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witnesses[0].kind, WitnessKind::Unreachable);
    }

    #[test]
    fn qn_finite_violation() {
        let g = chain();
        let v = is_quantitatively_nonblocking(&g, 1).unwrap();
        assert!(!v.holds);
        let w = &v.witnesses[0];
        assert_eq!(w.kind, WitnessKind::Path);
        assert_eq!(w.state, "0");
        assert_eq!(w.trace, ["a", "b"]);
        assert!(is_quantitatively_nonblocking(&g, 2).unwrap().holds);
    }

    #[test]
    fn example_two_cycle_fixture_never_completable() {
        let g = example2_cycle();
        for n in 1..=10 {
            assert!(
                !is_quantitatively_completable(&g, n).unwrap().holds,
                "N={n}"
            );
        }
    }

    #[test]
    fn qc_examples() {
        assert!(is_quantitatively_completable(&f1(), 1).unwrap().holds);
        assert!(!is_quantitatively_completable(&f2(), 10).unwrap().holds);
        assert!(
            is_quantitatively_completable(&Generator::empty(f1().alphabet().clone()), 1)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn correspondence_examples() {
        let g = f3();
        let c = marker_correspondence(&g, &g).unwrap();
        assert_eq!(c.marker_names(&g), ["1", "2"]);
        let id = |n| g.find_state(n).unwrap();
        assert_eq!(c.rch[&id("1")], BTreeSet::from([id("1")]));
        assert_eq!(c.rch[&id("2")], BTreeSet::from([id("2")]));

        let k = g.with_marked([id("1")]);
        assert_eq!(
            marker_correspondence(&g, &k).unwrap().marker_names(&g),
            ["1"]
        );

        let empty = Generator::empty(g.alphabet().clone());
        assert!(marker_correspondence(&g, &empty).unwrap().is_empty());

        assert!(matches!(
            marker_correspondence(&k, &g),
            Err(Error::Containment { .. })
        ));
    }

    #[test]
    fn hqc_examples() {
        let g = f3();
        let ok: BoundSpec = "1=2,2=2".parse().unwrap();
        assert!(
            is_heterogeneously_quantitatively_completable(&g, &g, &ok)
                .unwrap()
                .holds
        );

        let tight: BoundSpec = "1=1,2=2".parse().unwrap();
        let v = is_heterogeneously_quantitatively_completable(&g, &g, &tight).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witnesses.len(), 1);
        let w = &v.witnesses[0];
        assert_eq!(w.state, "2");
        assert_eq!(w.trace, ["c", "a"]);
        assert_eq!(w.marker.as_deref(), Some("1"));
        assert_eq!(w.bound, Some(1));
    }

    #[test]
    fn hqc_errors() {
        let g = f3();
        let partial: BoundSpec = "1=2".parse().unwrap();
        assert!(matches!(
            is_heterogeneously_quantitatively_completable(&g, &g, &partial),
            Err(Error::BoundsMismatch { .. })
        ));
        let extra: BoundSpec = "0=1,1=2,2=2".parse().unwrap();
        assert!(matches!(
            is_heterogeneously_quantitatively_completable(&g, &g, &extra),
            Err(Error::BoundsMismatch { .. })
        ));
        let empty = Generator::empty(g.alphabet().clone());
        assert!(matches!(
            is_heterogeneously_quantitatively_completable(&g, &empty, &partial),
            Err(Error::EmptyMarkerSupport)
        ));
        assert!("1=0".parse::<BoundSpec>().is_err());
        assert!("1:3".parse::<BoundSpec>().is_err());
    }

    #[test]
    fn hqc_single_marker_matches_qc() {
        let g = f3();
        let id = |n| g.find_state(n).unwrap();
        let k = g.with_marked([id("2")]);
        let gk = g.with_marked([id("2")]);
        for n in 1..=4 {
            let bounds = BoundSpec::new([("2".to_string(), n)]).unwrap();
            let h = is_heterogeneously_quantitatively_completable(&gk, &k, &bounds).unwrap();
            let q = is_quantitatively_completable(&k, n).unwrap();
            assert_eq!(h.holds, q.holds, "N={n}");
        }
    }

    #[test]
    fn controllability_examples() {
        let g = f3();
        assert!(is_controllable(&g, &g).unwrap().holds);

        let plant = unc_plant();
        let spec = only_a_spec();
        let v = is_controllable(&plant, &spec).unwrap();
        assert!(!v.holds);
        assert!(v.witnesses[0].access.is_empty());
        assert_eq!(v.witnesses[0].trace, ["u"]);
        assert_eq!(v.witnesses[0].kind, WitnessKind::Disabled);

        // all controllable: any subautomaton is controllable
        let id = |n| g.find_state(n).unwrap();
        let sub = g.with_marked([id("1")]);
        assert!(is_controllable(&g, &sub).unwrap().holds);
    }

    #[test]
    fn controllability_requires_closed_containment() {
        let plant = unc_plant();
        let bigger = unc_plant_escape();
        assert!(matches!(
            is_controllable(&plant, &bigger),
            Err(Error::Containment { .. })
        ));
    }
}
