//! Pass/fail reports with re-checkable counterexamples.

use serde::{Deserialize, Serialize};

use crate::algebra::GroupElement;

/// A concrete violation, phrased in element names so it survives a JSON
/// round trip and can be re-fed to the matching check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Counterexample {
    /// `π(element)` is incompatible or does not lie over the expected configs.
    Coherence { element: String, detail: String },
    /// A `Q`-tuple that is not compatible; `pair` is the failing `(i, j)`, 1-based.
    QIncompatible { tuple: Vec<String>, pair: (usize, usize) },
    /// Two `Q`-tuples that agree everywhere except at `slot` (1-based).
    HornCollision { slot: usize, first: Vec<String>, second: Vec<String> },
    /// An associativity grid over `config` whose rows are all in `Q` except `row` (1-based).
    Associativity { config: Vec<u32>, row: usize, grid: Vec<Vec<String>> },
    /// `Q(tuple)` holds, but shifting by `shifts` breaks the alternating-sum law.
    ActionLaw { tuple: Vec<String>, shifts: Vec<GroupElement>, shifted_in_q: bool },
    /// The action on a fiber is not a regular group action.
    ActionRegularity { config: Vec<u32>, detail: String },
    /// A tower invariant fails on the named edge or node.
    Tower { location: String, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    /// Number of instances examined.
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl AxiomCheck {
    pub fn pass(axiom: &str, checked: u64) -> Self {
        Self { axiom: axiom.into(), passed: true, checked, counterexample: None }
    }

    pub fn fail(axiom: &str, checked: u64, cx: Counterexample) -> Self {
        Self { axiom: axiom.into(), passed: false, checked, counterexample: Some(cx) }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn new(checks: Vec<AxiomCheck>) -> Self {
        Self { checks }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn first_counterexample(&self) -> Option<&Counterexample> {
        self.failures().find_map(|c| c.counterexample.as_ref())
    }

    pub fn extend(&mut self, other: AxiomReport) {
        self.checks.extend(other.checks);
    }

    /// One line per check, for text output.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{verdict} {} ({} checked)\n", c.axiom, c.checked));
            if let Some(cx) = &c.counterexample {
                out.push_str(&format!("  counterexample: {}\n", serde_json::to_string(cx).unwrap_or_default()));
            }
        }
        out
    }
}
