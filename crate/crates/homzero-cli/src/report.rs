//! The report emitted by every command: deterministic, renderable as text or
//! JSON, round-trippable through the documented schema.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    /// Homology groups per dimension, rendered as `Z^r (+) Z/d1 (+) ...`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groups: BTreeMap<usize, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub verdicts: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, input_digest: String) -> Self {
        Report {
            command: command.to_string(),
            input_digest,
            groups: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("input digest: {}\n", self.input_digest));
        for (key, value) in &self.verdicts {
            out.push_str(&format!("{key}: {value}\n"));
        }
        for (dim, group) in &self.groups {
            out.push_str(&format!("H_{dim} = {group}\n"));
        }
        for warning in &self.warnings {
            out.push_str(&format!("warning: {warning}\n"));
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
