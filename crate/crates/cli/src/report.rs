//! Deterministic check reports. Serialization is byte-stable for a given
//! input and version: records are sorted by (suite, id) and wall times are
//! kept out of the canonical document.

use std::fmt::Write as _;
use std::time::Duration;

/// Outcome of one check, after the expected-failure annotation is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// the check found the failure the corpus said to expect
    ExpectedFailure,
}

impl Verdict {
    pub fn is_ok(self) -> bool {
        !matches!(self, Verdict::Fail)
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ExpectedFailure => "expected-failure",
        }
    }
}

/// One check record: suite, case id, sorted payload pairs, verdict.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub suite: String,
    pub id: String,
    pub payload: Vec<(String, String)>,
    pub verdict: Verdict,
}

impl CheckRecord {
    pub fn new(suite: &str, id: &str) -> CheckRecord {
        CheckRecord {
            suite: suite.to_string(),
            id: id.to_string(),
            payload: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    pub fn put(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.payload.push((key.to_string(), value.to_string()));
        self
    }

    /// Applies the expected-failure annotation to a raw outcome.
    pub fn settle(&mut self, ok: bool, expect_fail: bool) {
        self.verdict = match (ok, expect_fail) {
            (true, false) => Verdict::Pass,
            (false, true) => Verdict::ExpectedFailure,
            (true, true) => {
                self.payload
                    .push(("note".into(), "unexpected pass".into()));
                Verdict::Fail
            }
            (false, false) => Verdict::Fail,
        };
    }
}

/// A full report: records plus per-suite wall times (reported on stderr
/// only, never serialized).
#[derive(Debug, Default)]
pub struct Report {
    pub records: Vec<CheckRecord>,
    pub wall: Vec<(String, Duration)>,
}

impl Report {
    pub fn push(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn merge(&mut self, other: Report) {
        self.records.extend(other.records);
        self.wall.extend(other.wall);
    }

    pub fn failed(&self) -> usize {
        self.records.iter().filter(|r| !r.verdict.is_ok()).count()
    }

    /// Canonical document: stable ordering by (suite, id), one line per
    /// record, summaries per suite.
    pub fn serialize(&self) -> String {
        let mut records = self.records.clone();
        records.sort_by(|a, b| (&a.suite, &a.id).cmp(&(&b.suite, &b.id)));
        let mut out = String::from("h1lab-report v1\n");
        let mut i = 0;
        while i < records.len() {
            let suite = records[i].suite.clone();
            let _ = writeln!(out, "suite {suite}");
            let mut passed = 0;
            let mut failed = 0;
            let mut expected = 0;
            while i < records.len() && records[i].suite == suite {
                let r = &records[i];
                let mut payload = r.payload.clone();
                payload.sort();
                let mut line = format!("check {} {}", r.suite, r.id);
                for (k, v) in &payload {
                    let _ = write!(line, " {k}={v}");
                }
                let _ = writeln!(out, "{line} verdict={}", r.verdict.as_str());
                match r.verdict {
                    Verdict::Pass => passed += 1,
                    Verdict::Fail => failed += 1,
                    Verdict::ExpectedFailure => expected += 1,
                }
                i += 1;
            }
            let _ = writeln!(
                out,
                "summary {suite} checked={} passed={passed} failed={failed} expected-failures={expected}",
                passed + failed + expected
            );
        }
        out.push_str("end\n");
        out
    }
}

/// Sanitizes a free-form label into a report id: whitespace to dashes,
/// everything else as-is.
pub fn slug(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_whitespace() { '-' } else { c })
        .collect()
}
