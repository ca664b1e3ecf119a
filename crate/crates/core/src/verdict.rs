use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    /// A first-passage string longer than the bound.
    Path,
    /// A target-avoiding cycle that can be pumped without bound.
    Cycle,
    /// The state cannot reach the target at all.
    Unreachable,
    /// An uncontrollable event enabled by the plant is disabled.
    Disabled,
}

/// Counterexample to a checked property.
///
/// `access` leads from the initial state to `state`. For `Path` the `trace`
/// is a complete first-passage string from `state`; for `Cycle` the `trace`
/// leads from `state` to the start of `cycle`; for `Disabled` it holds the
/// single offending event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub state: String,
    pub access: Vec<String>,
    pub trace: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycle: Vec<String>,
    pub kind: WitnessKind,
    pub bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marker: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            witnesses: Vec::new(),
        }
    }

    pub fn fail(witnesses: Vec<Witness>) -> Self {
        debug_assert!(!witnesses.is_empty());
        Verdict {
            holds: false,
            witnesses,
        }
    }
}
