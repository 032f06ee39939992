use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use ghat_core::{Error, Truth};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Unknown => "unknown",
        }
    }
}

/// One check. Failing and unknown records carry a witness.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub id: String,
    pub topic: String,
    pub inputs: Value,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl RunReport {
    pub fn new(suite: &str, seed: u64, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.id.cmp(&b.id));
        let mut summary = Summary::default();
        for r in &records {
            match r.outcome {
                Outcome::Pass => summary.pass += 1,
                Outcome::Fail => summary.fail += 1,
                Outcome::Unknown => summary.unknown += 1,
            }
        }
        RunReport { suite: suite.to_string(), seed, summary, records }
    }

    pub fn ok(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn record(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn to_text(&self) -> String {
        let width = self.records.iter().map(|r| r.id.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.records {
            let _ = write!(out, "{:<7} {:<width$}", r.outcome.as_str(), r.id);
            if let Some(w) = &r.witness {
                let _ = write!(out, "  {w}");
            }
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(out, "suite {}: {} pass, {} fail, {} unknown", self.suite, s.pass, s.fail, s.unknown);
        out
    }
}

/// Collects records for one suite.
#[derive(Default)]
pub struct Checks {
    records: Vec<Record>,
}

impl Checks {
    pub fn new() -> Self {
        Checks::default()
    }

    pub fn push(
        &mut self,
        id: impl Into<String>,
        topic: &str,
        inputs: Value,
        outcome: Outcome,
        witness: Option<String>,
    ) {
        let witness = match (outcome, witness) {
            (Outcome::Pass, w) => w,
            (_, Some(w)) => Some(w),
            (o, None) => Some(format!("check reported {}", o.as_str())),
        };
        self.records.push(Record { id: id.into(), topic: topic.to_string(), inputs, outcome, witness });
    }

    /// Pass iff `ok`; the witness is only built on failure.
    pub fn check(
        &mut self,
        id: impl Into<String>,
        topic: &str,
        inputs: Value,
        ok: bool,
        witness: impl FnOnce() -> String,
    ) {
        let (outcome, w) = if ok { (Outcome::Pass, None) } else { (Outcome::Fail, Some(witness())) };
        self.push(id, topic, inputs, outcome, w);
    }

    /// Pass iff `actual == expected`.
    pub fn truth(&mut self, id: impl Into<String>, topic: &str, inputs: Value, actual: Truth, expected: Truth) {
        let outcome = if actual == expected {
            Outcome::Pass
        } else if actual == Truth::Unknown {
            Outcome::Unknown
        } else {
            Outcome::Fail
        };
        let witness = (outcome != Outcome::Pass).then(|| format!("expected {expected:?}, got {actual:?}"));
        self.push(id, topic, inputs, outcome, witness);
    }

    /// Records an error from the library; bound exhaustion is `unknown`.
    pub fn error(&mut self, id: impl Into<String>, topic: &str, inputs: Value, e: &Error) {
        let outcome = match e {
            Error::Incomplete { .. } | Error::OracleUnknown | Error::BoundExhausted { .. } | Error::TooLarge { .. } => {
                Outcome::Unknown
            }
            _ => Outcome::Fail,
        };
        self.push(id, topic, inputs, outcome, Some(e.to_string()));
    }

    pub fn extend(&mut self, other: Checks) {
        self.records.extend(other.records);
    }

    pub fn into_records(self) -> Vec<Record> {
        self.records
    }
}
