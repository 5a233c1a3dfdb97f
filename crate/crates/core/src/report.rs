use std::fmt;

use serde::Serialize;

/// One nonzero residual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub tuple: Vec<String>,
    /// Binder assignment, e.g. `λ=L μ=M`. Not serialized.
    #[serde(skip)]
    pub binders: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CheckReport {
    pub suite: String,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    suite: &'a str,
    pass: bool,
    violations: &'a [Violation],
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    notes: &'a [String],
}

impl CheckReport {
    pub fn new(suite: impl Into<String>) -> Self {
        CheckReport {
            suite: suite.into(),
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(ReportJson {
            suite: &self.suite,
            pass: self.pass(),
            violations: &self.violations,
            notes: &self.notes,
        })
        .expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        writeln!(
            f,
            "suite {}: {} ({} violations)",
            self.suite,
            verdict,
            self.violations.len()
        )?;
        for v in &self.violations {
            write!(f, "  {} ({})", v.identity, v.tuple.join(","))?;
            if !v.binders.is_empty() {
                write!(f, " [{}]", v.binders)?;
            }
            writeln!(f, ": {}", v.residual)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
