//! Pass/fail records shared by the verification batteries and the CLI.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

use crate::diffop::DiffOp;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Value) -> Check {
        Check {
            name: name.into(),
            status: Status::Fail,
            witness: Some(witness),
        }
    }

    pub fn skipped(name: impl Into<String>, reason: &str) -> Check {
        Check {
            name: name.into(),
            status: Status::Skipped,
            witness: Some(Value::String(reason.into())),
        }
    }

    /// Passes iff the residual operator is zero; otherwise the residual is
    /// the witness.
    pub fn residual(name: impl Into<String>, r: &DiffOp) -> Check {
        if r.is_zero() {
            Check::pass(name)
        } else {
            Check::fail(name, serde_json::to_value(r).expect("serializable"))
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, witness: impl FnOnce() -> Value) -> Check {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, witness())
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        write!(f, "{tag} {}", self.name)?;
        if self.status != Status::Pass {
            if let Some(w) = &self.witness {
                match w {
                    Value::String(s) => write!(f, ": {s}")?,
                    other => write!(f, ": {other}")?,
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub schema_version: u32,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    pub elapsed: f64,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema_version: SCHEMA_VERSION,
            checks: Vec::new(),
            data: None,
            elapsed: 0.0,
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}
