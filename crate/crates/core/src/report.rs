//! Verdicts shared by the axiom checker, the mapping property checks and the
//! theorem verification procedures.

use std::fmt;

use serde_json::{json, Value as Json};

use crate::semiring::Semiring;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Verified over every element (or every bounded configuration).
    Pass,
    /// Verified on seeded samples only.
    SampledPass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::SampledPass => "sampled-pass",
            Verdict::Fail => "fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One labelled piece of a counterexample.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessItem {
    pub label: String,
    pub values: Vec<Value>,
    pub text: String,
}

impl WitnessItem {
    pub fn new(label: impl Into<String>, semiring: &Semiring, values: Vec<Value>) -> Self {
        let text = match values.as_slice() {
            [v] => semiring.format_value(v),
            vs => {
                let parts: Vec<String> = vs.iter().map(|v| semiring.format_value(v)).collect();
                format!("[{}]", parts.join(", "))
            }
        };
        WitnessItem {
            label: label.into(),
            values,
            text,
        }
    }

    pub fn note(label: impl Into<String>, text: impl Into<String>) -> Self {
        WitnessItem {
            label: label.into(),
            values: Vec::new(),
            text: text.into(),
        }
    }

    pub fn value(&self) -> &Value {
        &self.values[0]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub property: String,
    pub verdict: Verdict,
    /// Empty unless the verdict is [`Verdict::Fail`].
    pub witness: Vec<WitnessItem>,
    /// Number of configurations examined.
    pub checked: u64,
    pub detail: Option<String>,
}

/// Report returned by [`check_axioms`](crate::semiring::check_axioms).
pub type CertificationReport = PropertyReport;

impl PropertyReport {
    pub fn pass(property: impl Into<String>, exhaustive: bool, checked: u64) -> Self {
        PropertyReport {
            property: property.into(),
            verdict: if exhaustive {
                Verdict::Pass
            } else {
                Verdict::SampledPass
            },
            witness: Vec::new(),
            checked,
            detail: None,
        }
    }

    pub fn fail(property: impl Into<String>, witness: Vec<WitnessItem>, checked: u64) -> Self {
        PropertyReport {
            property: property.into(),
            verdict: Verdict::Fail,
            witness,
            checked,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// True for both exhaustive and sampled passes.
    pub fn holds(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn witness(&self, label: &str) -> Option<&WitnessItem> {
        self.witness.iter().find(|w| w.label == label)
    }

    pub fn to_json(&self) -> Json {
        let witness: Vec<Json> = self
            .witness
            .iter()
            .map(|w| json!({"label": w.label, "value": w.text}))
            .collect();
        let mut out = json!({
            "property": self.property,
            "verdict": self.verdict.as_str(),
            "checked": self.checked,
            "witness": witness,
        });
        if let Some(d) = &self.detail {
            out["detail"] = json!(d);
        }
        out
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ({} checked)", self.property, self.verdict, self.checked)?;
        for w in &self.witness {
            write!(f, "\n  {} = {}", w.label, w.text)?;
        }
        if let Some(d) = &self.detail {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

/// Bounds for universally quantified checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Budget {
    /// Size of the seeded point pool used for infinite carriers.
    pub pool: usize,
    /// Largest multiset size for set-quantified properties.
    pub set_size: usize,
    /// Evaluation cap before exhaustive enumeration falls back to sampling.
    pub max_evaluations: u64,
    pub seed: u64,
    /// Denominator bound for sampled rationals.
    pub max_denominator: i128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            pool: 40,
            set_size: 3,
            max_evaluations: 10_000_000,
            seed: DEFAULT_SEED,
            max_denominator: 64,
        }
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed_2008;
