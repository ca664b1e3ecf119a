use serde::{Deserialize, Serialize};

use crate::automaton::{Generator, StateId};

/// One logged step of a synthesis run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub algorithm: String,
    pub step: String,
    pub states_before: usize,
    pub states_after: usize,
    pub transitions_before: usize,
    pub transitions_after: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language_unchanged: Option<bool>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedTransition {
    pub algorithm: String,
    pub source: String,
    pub event: String,
    pub target: String,
    pub reason: String,
}

/// Step log plus a ledger of transitions removed along the way. The last
/// step is always a `fixpoint` or `done` entry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisTrace {
    pub steps: Vec<TraceStep>,
    pub removed: Vec<RemovedTransition>,
}

impl SynthesisTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("trace serializes");
        s.push('\n');
        s
    }

    pub(crate) fn step(
        &mut self,
        algorithm: &str,
        step: impl Into<String>,
        before: &Generator,
        after: &Generator,
    ) {
        self.steps.push(TraceStep {
            algorithm: algorithm.to_string(),
            step: step.into(),
            states_before: before.num_states(),
            states_after: after.num_states(),
            transitions_before: before.num_transitions(),
            transitions_after: after.num_transitions(),
            language_unchanged: None,
            note: String::new(),
        });
    }

    pub(crate) fn compared(&mut self, unchanged: bool, note: impl Into<String>) {
        if let Some(last) = self.steps.last_mut() {
            last.language_unchanged = Some(unchanged);
            last.note = note.into();
        }
    }

    pub(crate) fn remove(
        &mut self,
        algorithm: &str,
        g: &Generator,
        src: StateId,
        e: crate::automaton::EventId,
        dst: StateId,
        reason: &str,
    ) {
        self.removed.push(RemovedTransition {
            algorithm: algorithm.to_string(),
            source: g.name(src).to_string(),
            event: g.alphabet().name(e).to_string(),
            target: g.name(dst).to_string(),
            reason: reason.to_string(),
        });
    }
}
