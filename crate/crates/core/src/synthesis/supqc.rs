use std::collections::VecDeque;

use crate::automaton::{Builder, Generator, StateId};
use crate::error::{Error, Result};

use super::trace::SynthesisTrace;

const UNSEEN: u32 = u32::MAX;

/// Order in which the counter-augmented traversal visits states. Both give
/// the same marked language; only state numbering differs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Frontier {
    #[default]
    Stack,
    Queue,
}

/// Supremal quantitatively completable sublanguage of `L_m(k)` for bound
/// `n`, computed on states `(x, d)` with `d < n`.
///
/// `d` counts the steps taken since the current excursion began, where an
/// excursion begins at the initial state or at the first state after a
/// marker visit. A transition into a non-marker that would bring `d` to `n`
/// is dropped.
pub fn sup_qc(k: &Generator, n: u32) -> Result<Generator> {
    sup_qc_with(k, n, Frontier::Stack, None)
}

pub fn sup_qc_with(
    k: &Generator,
    n: u32,
    frontier: Frontier,
    mut trace: Option<&mut SynthesisTrace>,
) -> Result<Generator> {
    if n == 0 {
        return Err(Error::ZeroBound);
    }
    let kt = k.trim();
    if let Some(t) = trace.as_deref_mut() {
        t.step("sup_qc", "trim input", k, &kt);
    }
    let Some(x0) = kt.initial() else {
        if let Some(t) = trace {
            t.step("sup_qc", "done", &kt, &kt);
        }
        return Ok(kt);
    };

    let width = n as usize;
    let mut index = vec![UNSEEN; kt.num_states() * width];
    let mut b = Builder::with_capacity(kt.alphabet().clone(), kt.num_states());
    let mut pending: VecDeque<(StateId, u32)> = VecDeque::new();

    let visit = |index: &mut [u32],
                 b: &mut Builder,
                 pending: &mut VecDeque<(StateId, u32)>,
                 x: StateId,
                 d: u32| {
        let slot = &mut index[x.index() * width + d as usize];
        if *slot == UNSEEN {
            *slot = b
                .add_state(format!("({},{d})", kt.name(x)), d == 0 && kt.is_marked(x))
                .0;
            pending.push_back((x, d));
        }
        StateId(*slot)
    };

    let init = visit(&mut index, &mut b, &mut pending, x0, 0);
    loop {
        let next = match frontier {
            Frontier::Stack => pending.pop_back(),
            Frontier::Queue => pending.pop_front(),
        };
        let Some((x, d)) = next else { break };
        let src = StateId(index[x.index() * width + d as usize]);
        for (e, y) in kt.out(x) {
            // a new excursion starts right after every marker visit
            let d2 = if kt.is_marked(x) || kt.is_marked(y) {
                0
            } else {
                d + 1
            };
            if d2 == n {
                if let Some(t) = trace.as_deref_mut() {
                    t.remove(
                        "sup_qc",
                        &kt,
                        x,
                        e,
                        y,
                        &format!("no marker within {n} steps (counter {d})"),
                    );
                }
                continue;
            }
            let dst = visit(&mut index, &mut b, &mut pending, y, d2);
            b.set(src, e, dst);
        }
    }
    let raw = b.finish(Some(init));
    let out = raw.trim();
    if let Some(t) = trace {
        t.step("sup_qc", "counter traversal", &kt, &raw);
        t.step("sup_qc", "done", &raw, &out);
    }
    Ok(out)
}
