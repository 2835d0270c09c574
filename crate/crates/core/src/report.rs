//! Pass/fail reports for the relation checkers, serializable as a JSON list
//! of `{relation, parameters, status, witness?}` entries.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct RelationEntry {
    pub relation: String,
    pub parameters: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub entries: Vec<RelationEntry>,
    /// Total number of (operator pair, class pair, basis state) combinations
    /// verified.
    pub combinations_checked: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationEntry> {
        self.entries.iter().filter(|e| e.status == Status::Fail)
    }

    pub fn push_pass(&mut self, relation: &str, parameters: String) {
        self.entries.push(RelationEntry {
            relation: relation.to_string(),
            parameters,
            status: Status::Pass,
            witness: None,
        });
    }

    pub fn push_fail(&mut self, relation: &str, parameters: String, witness: String) {
        self.entries.push(RelationEntry {
            relation: relation.to_string(),
            parameters,
            status: Status::Fail,
            witness: Some(witness),
        });
    }
}
