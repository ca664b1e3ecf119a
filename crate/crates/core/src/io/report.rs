use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::automaton::Generator;
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyInfo {
    pub name: String,
    pub params: Map<String, Value>,
}

impl PropertyInfo {
    pub fn new(name: impl Into<String>) -> Self {
        PropertyInfo {
            name: name.into(),
            params: Map::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub states: usize,
    pub transitions: usize,
    pub elapsed_ms: f64,
}

impl Stats {
    pub fn of(g: &Generator, elapsed_ms: f64) -> Self {
        Stats {
            states: g.num_states(),
            transitions: g.num_transitions(),
            elapsed_ms,
        }
    }
}

/// JSON report written by the command-line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub verdict: bool,
    pub property: PropertyInfo,
    pub witnesses: Vec<Witness>,
    pub stats: Stats,
}

impl Report {
    pub fn from_verdict(property: PropertyInfo, verdict: Verdict, stats: Stats) -> Self {
        Report {
            verdict: verdict.holds,
            property,
            witnesses: verdict.witnesses,
            stats,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
