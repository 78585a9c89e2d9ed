use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleMargin {
    pub label: String,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of any verification: the pass flag, the worst margin and where it
/// occurred, offending samples, and named sub-checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub offending: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub samples: Vec<SampleMargin>,
}

impl VerificationReport {
    /// An empty report that passes until something fails.
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass: true,
            min_margin: None,
            argmin: None,
            offending: Vec::new(),
            checks: Vec::new(),
            warnings: Vec::new(),
            seed: None,
            samples: Vec::new(),
        }
    }

    pub fn record(&mut self, label: impl Into<String>, margin: f64, pass: bool) {
        let label = label.into();
        if self.min_margin.is_none_or(|m| margin < m) {
            self.min_margin = Some(margin);
            self.argmin = Some(label.clone());
        }
        if !pass {
            self.pass = false;
            self.offending.push(label.clone());
        }
        self.samples.push(SampleMargin { label, margin, pass });
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    /// Folds a sub-report into this one as a named check.
    pub fn absorb(&mut self, sub: &VerificationReport) {
        let detail = match (sub.min_margin, &sub.argmin) {
            (Some(m), Some(a)) => format!("min margin {m:.6e} at {a}"),
            _ => String::new(),
        };
        self.check(sub.name.clone(), sub.pass, detail);
        if let (Some(m), Some(a)) = (sub.min_margin, &sub.argmin) {
            if self.min_margin.is_none_or(|own| m < own) {
                self.min_margin = Some(m);
                self.argmin = Some(format!("{}: {a}", sub.name));
            }
        }
        self.warnings.extend(sub.warnings.iter().cloned());
        self.offending.extend(sub.offending.iter().map(|o| format!("{}: {o}", sub.name)));
    }

    /// Structured text (JSON). Per-sample margins only when `verbose`.
    pub fn to_text(&self, verbose: bool) -> String {
        let mut shown = self.clone();
        if !verbose {
            shown.samples.clear();
        }
        serde_json::to_string_pretty(&shown).expect("report serializes")
    }

    pub fn from_text(s: &str) -> crate::Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
