//! The report every command produces, rendered as text or as JSON.

use qhsd_core::report::{CheckEntry, CheckReport, CheckStatus};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub command: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<CheckEntry>,
    pub data: Value,
}

/// A finished command: the envelope plus the human-readable lines that
/// precede the check list in text mode.
#[derive(Clone, Debug)]
pub struct Rendered {
    pub envelope: Envelope,
    pub lines: Vec<String>,
    /// Replaces the text rendering entirely, for output meant to be piped.
    pub raw: Option<String>,
}

impl Rendered {
    pub fn new(command: &str, report: CheckReport, data: Value, lines: Vec<String>) -> Self {
        let status = if report.passed() { Status::Pass } else { Status::Fail };
        Self {
            envelope: Envelope { command: command.into(), status, seed: None, checks: report.checks, data },
            lines,
            raw: None,
        }
    }

    pub fn error(command: &str, message: &str) -> Self {
        Self {
            envelope: Envelope {
                command: command.into(),
                status: Status::Error,
                seed: None,
                checks: Vec::new(),
                data: serde_json::json!({ "error": message }),
            },
            lines: vec![format!("error: {message}")],
            raw: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.envelope.seed = Some(seed);
        self
    }

    pub fn with_raw(mut self, text: String) -> Self {
        self.raw = Some(text);
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.envelope).expect("envelope serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        if let Some(raw) = &self.raw {
            return raw.clone();
        }
        let e = &self.envelope;
        let mut out = format!("qhsd {}: {}", e.command, status_word(e.status));
        if let Some(seed) = e.seed {
            out.push_str(&format!(" (seed {seed})"));
        }
        out.push('\n');
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        let report = CheckReport { checks: e.checks.clone() };
        out.push_str(&report.to_string());
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    }
}

/// Turns every failing entry into an advisory, for checks whose hypotheses
/// are not met.
pub fn demote_failures(mut report: CheckReport, why: &str) -> CheckReport {
    for c in &mut report.checks {
        if c.status == CheckStatus::Fail {
            c.status = CheckStatus::Advisory;
            c.details = format!("{} ({why})", c.details);
        }
    }
    report
}
