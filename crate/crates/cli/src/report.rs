//! Check reports in text and structured (JSON) form.

use gft_core::outcome::{Outcome, Verdict, Witness};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

impl CheckReport {
    pub fn from_outcome(check: &str, outcome: Outcome, ms: Option<u64>) -> Self {
        CheckReport {
            check: check.to_string(),
            verdict: outcome.verdict(),
            witness: outcome.witness().cloned(),
            detail: outcome.detail().map(str::to_string),
            ms,
        }
    }

    pub fn error(check: &str, message: impl Into<String>) -> Self {
        CheckReport::from_outcome(check, Outcome::error(message), None)
    }

    pub fn is_bad(&self) -> bool {
        matches!(self.verdict, Verdict::Fail | Verdict::Error)
    }

    /// `CHECK <name> <verdict> [witness=<w>] [reason="..."] [<ms>ms]`.
    /// Reasons are shown only for ERROR and NOT-APPLICABLE.
    pub fn text_line(&self) -> String {
        let mut line = format!("CHECK {} {}", self.check, self.verdict);
        if let Some(w) = &self.witness {
            line.push_str(&format!(" witness={w}"));
        }
        if matches!(self.verdict, Verdict::Error | Verdict::NotApplicable) {
            if let Some(d) = &self.detail {
                line.push_str(&format!(" reason={d:?}"));
            }
        }
        if let Some(ms) = self.ms {
            line.push_str(&format!(" {ms}ms"));
        }
        line
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub source: String,
    pub reports: Vec<CheckReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Document {
    pub format: &'static str,
    pub seed: u64,
    pub entries: Vec<EntryReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

pub fn render(doc: &Document, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            let many = doc.entries.len() > 1;
            for entry in &doc.entries {
                if many {
                    out.push_str(&format!("# {}\n", entry.source));
                }
                for r in &entry.reports {
                    out.push_str(&r.text_line());
                    out.push('\n');
                }
            }
            out
        }
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

/// 0 when nothing failed or errored, 1 otherwise.
pub fn exit_code(doc: &Document) -> i32 {
    let bad = doc
        .entries
        .iter()
        .flat_map(|e| &e.reports)
        .any(CheckReport::is_bad);
    i32::from(bad)
}
