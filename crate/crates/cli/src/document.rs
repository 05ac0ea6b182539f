//! The JSON documents written by the tool.

use prior_forge::{ConstructionPlan, PlanRequest, TheoremTag};
use serde::{Deserialize, Serialize};

/// Bumped on any change to the fields of the documents in this module.
pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanStatus {
    Accepted,
    ChecklistFailed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WarningKind {
    /// A hypothesis taken on the word of the source rather than certified.
    PaperAsserted,
    /// A discrepancy in the displayed construction that the planner worked around.
    Flag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warning {
    pub kind: WarningKind,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub schema_version: String,
    pub status: PlanStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_item: Option<String>,
    pub request: PlanRequest,
    pub plan: ConstructionPlan,
    pub warnings: Vec<Warning>,
}

impl PlanDocument {
    pub fn new(plan: ConstructionPlan, failed_item: Option<String>) -> Self {
        PlanDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            status: match failed_item {
                None => PlanStatus::Accepted,
                Some(_) => PlanStatus::ChecklistFailed,
            },
            failed_item,
            request: plan.request.clone(),
            warnings: warnings_of(&plan),
            plan,
        }
    }
}

pub fn warnings_of(plan: &ConstructionPlan) -> Vec<Warning> {
    let asserted = plan.paper_asserted().map(|i| Warning {
        kind: WarningKind::PaperAsserted,
        code: i.id.clone(),
        message: i.hypothesis.clone(),
    });
    let flags = plan.flags.iter().map(|f| Warning {
        kind: WarningKind::Flag,
        code: f.code.clone(),
        message: f.message.clone(),
    });
    asserted.chain(flags).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Accepted,
    ChecklistFailed,
    Rejected,
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub g: i64,
    pub e: i64,
    pub rank: i64,
    pub s: i64,
    pub t: i64,
    pub c2: i64,
    pub status: RowStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0_lower: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2_threshold: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCounts {
    pub total: usize,
    pub accepted: usize,
    pub checklist_failed: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: String,
    pub counts: SweepCounts,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn new(rows: Vec<SweepRow>) -> Self {
        let mut counts = SweepCounts {
            total: rows.len(),
            ..SweepCounts::default()
        };
        for r in &rows {
            match r.status {
                RowStatus::Accepted => counts.accepted += 1,
                RowStatus::ChecklistFailed => counts.checklist_failed += 1,
                RowStatus::Rejected => counts.rejected += 1,
            }
        }
        SweepReport {
            schema_version: SCHEMA_VERSION.to_string(),
            counts,
            rows,
        }
    }
}

/// Outcome of `check`: verifier findings, oracle disagreements and
/// inconsistencies between the document and its embedded plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema_version: String,
    pub clean: bool,
    pub findings: Vec<prior_forge::planners::Finding>,
    pub oracle: Vec<prior_forge::oracle::CrossCheckEntry>,
    pub document: Vec<String>,
}
