//! Machine-readable verification reports.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stage {
    pub name: String,
    pub claim: String,
    pub status: Status,
    pub details: Map<String, Value>,
}

impl Stage {
    pub fn new(name: &str, claim: &str) -> Stage {
        Stage { name: name.into(), claim: claim.into(), status: Status::Pass, details: Map::new() }
    }

    /// Records a detail value.
    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.details.insert(key.into(), value.into());
        self
    }

    /// Records a check; any failed check fails the stage.
    pub fn check(&mut self, key: &str, ok: bool) -> &mut Self {
        if !ok {
            self.status = Status::Fail;
        }
        self.put(key, ok)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub subject: String,
    pub claim: String,
    pub status: Status,
    pub stages: Vec<Stage>,
}

impl Report {
    pub fn new(subject: &str, claim: &str) -> Report {
        Report { subject: subject.into(), claim: claim.into(), status: Status::Pass, stages: Vec::new() }
    }

    pub fn push(&mut self, stage: Stage) {
        if stage.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.stages.push(stage);
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn first_failure(&self) -> Option<&Stage> {
        self.stages.iter().find(|s| s.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
