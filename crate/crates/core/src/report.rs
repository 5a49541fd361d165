//! Pass/fail reports shared by scenario verification and the self-test.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { id: id.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report { name: name.into(), checks: Vec::new(), data: None }
    }

    pub fn push(&mut self, id: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check::new(id, pass, detail));
    }

    pub fn with_data(mut self, data: serde_json::Value) -> Self {
        self.data = Some(data);
        self
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per check, `PASS id: detail` or `FAIL id: detail`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.name);
        for c in &self.checks {
            out.push_str(&format!("  {} {}: {}\n", if c.pass { "PASS" } else { "FAIL" }, c.id, c.detail));
        }
        out
    }
}
