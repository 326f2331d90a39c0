//! Check records and suite reports, with the JSON schema used by the CLI.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One verification item: a stable id, its status, and a human-readable
/// detail string (empty on success unless there is something to say).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub detail: String,
    /// Wall time in milliseconds. Excluded from determinism comparisons.
    pub wall_ms: u64,
}

impl Check {
    pub fn pass(id: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            status: Status::Pass,
            detail: String::new(),
            wall_ms: 0,
        }
    }

    pub fn fail(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            status: Status::Fail,
            detail: detail.into(),
            wall_ms: 0,
        }
    }

    pub fn from_bool(id: impl Into<String>, ok: bool, detail_on_fail: impl Into<String>) -> Self {
        if ok {
            Check::pass(id)
        } else {
            Check::fail(id, detail_on_fail)
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub example: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>, example: impl Into<String>, seed: u64) -> Self {
        Report {
            suite: suite.into(),
            example: example.into(),
            seed,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: Vec<Check>) {
        self.checks.extend(checks);
    }

    /// True when no non-skipped check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut skip = 0;
        for c in &self.checks {
            match c.status {
                Status::Pass => pass += 1,
                Status::Fail => fail += 1,
                Status::Skip => skip += 1,
            }
        }
        (pass, fail, skip)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Text rendering: one line per check plus a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "suite {} [{}] seed {}\n",
            self.suite, self.example, self.seed
        ));
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            if c.detail.is_empty() {
                out.push_str(&format!("  {tag}  {}\n", c.id));
            } else {
                out.push_str(&format!("  {tag}  {}  ({})\n", c.id, c.detail));
            }
        }
        let (pass, fail, skip) = self.counts();
        let run = pass + fail;
        if fail == 0 {
            out.push_str(&format!("OK: {pass}/{run} checks passed"));
        } else {
            out.push_str(&format!("FAIL: {fail}/{run} checks failed"));
        }
        if skip > 0 {
            out.push_str(&format!(" ({skip} skipped)"));
        }
        out.push('\n');
        out
    }
}

/// Overall exit status for a batch (0 pass, 1 fail).
pub fn batch_exit_code(reports: &[Report]) -> i32 {
    if reports.iter().all(|r| r.passed()) {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_format_and_exit() {
        let mut r = Report::new("cm", "h45", 0);
        r.push(Check::pass("gradient-identity"));
        r.push(Check::pass("laplacian-identity"));
        assert!(r.passed());
        let text = r.to_text();
        assert!(text.contains("PASS  gradient-identity"));
        assert!(text.trim_end().ends_with("OK: 2/2 checks passed"));

        r.push(Check::fail("extra", "residual 3 terms"));
        assert!(!r.passed());
        assert!(r.to_text().contains("FAIL: 1/3 checks failed"));
        assert_eq!(batch_exit_code(&[r]), 1);
    }

    #[test]
    fn json_roundtrip() {
        let mut r = Report::new("pencil", "fkm69", 42);
        r.push(Check::pass("nullity-s0"));
        r.push(Check::fail("scan", "r=2 at sample 7"));
        let s = r.to_json();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_json(), s);
        assert_eq!(back.checks.len(), 2);
        assert_eq!(back.checks[1].status, Status::Fail);
    }
}
