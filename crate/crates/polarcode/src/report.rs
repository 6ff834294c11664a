//! JSON reports. Struct fields serialize in declaration order and
//! `serde_json` objects in sorted key order, so reports are byte-stable.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Mismatch,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub check: String,
    pub params: Value,
    pub expected: Value,
    pub observed: Value,
    pub status: Status,
}

impl Check {
    /// Status from comparing `expected` with `observed`.
    pub fn compare(check: &str, params: Value, expected: Value, observed: Value) -> Self {
        let status = if expected == observed {
            Status::Ok
        } else {
            Status::Mismatch
        };
        Self {
            check: check.into(),
            params,
            expected,
            observed,
            status,
        }
    }

    pub fn skipped(check: &str, params: Value, reason: String) -> Self {
        Self {
            check: check.into(),
            params,
            expected: Value::Null,
            observed: Value::String(reason),
            status: Status::Skipped,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub q: u32,
    pub n: usize,
    pub checks: Vec<Check>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &'static str, q: u32, n: usize, checks: Vec<Check>) -> Self {
        let status = if checks.iter().any(|c| c.status == Status::Mismatch) {
            Status::Mismatch
        } else {
            Status::Ok
        };
        Self {
            command,
            q,
            n,
            checks,
            status,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// One line per check: name, status, parameters.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Ok => "ok",
                Status::Mismatch => "MISMATCH",
                Status::Skipped => "skipped",
            };
            out.push_str(&format!(
                "{} {} {} observed {}\n",
                c.check, status, c.params, c.observed
            ));
        }
        out.push_str(&format!(
            "status {}\n",
            if self.status == Status::Ok {
                "ok"
            } else {
                "mismatch"
            }
        ));
        out
    }
}
