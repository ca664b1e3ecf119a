use super::{EventId, Generator, StateId};

pub(crate) const NO_COMP: u32 = u32::MAX;

/// Strongly connected components of the subgraph induced by the states
/// with `include(s)`, by an iterative Tarjan search.
///
/// Component ids follow Tarjan's emission order, so every edge between two
/// components goes from a higher id to a lower one. Excluded states get
/// [`NO_COMP`].
pub(crate) struct Components {
    pub comp: Vec<u32>,
    pub members: Vec<Vec<StateId>>,
}

impl Components {
    pub fn compute(g: &Generator, include: impl Fn(StateId) -> bool) -> Self {
        let n = g.num_states();
        let m = g.num_events() as u32;
        let mut comp = vec![NO_COMP; n];
        let mut members: Vec<Vec<StateId>> = Vec::new();
        let mut index = vec![u32::MAX; n];
        let mut low = vec![0u32; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<StateId> = Vec::new();
        let mut counter = 0u32;

        for root in g.states().filter(|&s| include(s)) {
            if index[root.index()] != u32::MAX {
                continue;
            }
            // (state, next event to examine)
            let mut call: Vec<(StateId, u32)> = vec![(root, 0)];
            index[root.index()] = counter;
            low[root.index()] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root.index()] = true;

            while let Some(&(v, start)) = call.last() {
                let mut ei = start;
                let mut child = None;
                while ei < m {
                    let e = EventId(ei);
                    ei += 1;
                    let Some(w) = g.succ(v, e) else { continue };
                    if !include(w) {
                        continue;
                    }
                    if index[w.index()] == u32::MAX {
                        child = Some(w);
                        break;
                    } else if on_stack[w.index()] {
                        low[v.index()] = low[v.index()].min(index[w.index()]);
                    }
                }
                call.last_mut().expect("nonempty").1 = ei;
                if let Some(w) = child {
                    index[w.index()] = counter;
                    low[w.index()] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w.index()] = true;
                    call.push((w, 0));
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent.index()] = low[parent.index()].min(low[v.index()]);
                }
                if low[v.index()] == index[v.index()] {
                    let id = members.len() as u32;
                    let mut group = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w.index()] = false;
                        comp[w.index()] = id;
                        group.push(w);
                        if w == v {
                            break;
                        }
                    }
                    members.push(group);
                }
            }
        }
        Components { comp, members }
    }

    /// More than one member, or a self-loop.
    pub fn is_cyclic(&self, g: &Generator, id: u32) -> bool {
        let group = &self.members[id as usize];
        group.len() > 1 || g.out(group[0]).any(|(_, t)| t == group[0])
    }

    /// No edge leaves the component within the included subgraph; `include`
    /// must be the predicate used in [`Components::compute`].
    pub fn is_bottom(&self, g: &Generator, id: u32) -> bool {
        self.members[id as usize]
            .iter()
            .all(|&s| g.out(s).all(|(_, t)| self.comp[t.index()] == id))
    }
}
