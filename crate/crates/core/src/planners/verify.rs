//! Independent re-verification of a serialized plan.

use serde::{Deserialize, Serialize};

use crate::chern::{twist, ChernData};
use crate::lattice::DivisorClass;
use crate::sheaf::chern_of;

use super::{c2_threshold, normalize, ConstructionPlan, ItemStatus};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    InvalidRequest {
        message: String,
    },
    NormalizationMismatch,
    /// The chain does not have the (normalized) requested Chern data.
    ChernMismatch {
        expected: ChernData,
        found: ChernData,
    },
    ComputedMismatch {
        field: String,
        recorded: i64,
        recomputed: i64,
    },
    ReplayFailure {
        item: String,
        reason: String,
    },
    StatusMismatch {
        item: String,
        recorded: ItemStatus,
        recomputed: ItemStatus,
    },
    FailedItem {
        item: String,
    },
    ThresholdMismatch {
        recorded: i64,
        recomputed: i64,
    },
    H0Mismatch {
        recorded: i64,
        recomputed: i64,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub findings: Vec<Finding>,
}

impl VerifyReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Recomputes the chain's Chern data, replays every certificate and
/// recomputes the threshold and the `h⁰` bound. Mismatches are reported,
/// never raised.
pub fn verify_plan(plan: &ConstructionPlan) -> VerifyReport {
    let mut findings = Vec::new();
    let (ctx, norm) = match normalize(&plan.request) {
        Ok(x) => x,
        Err(err) => {
            findings.push(Finding::InvalidRequest {
                message: err.to_string(),
            });
            return VerifyReport { findings };
        }
    };
    let s = &ctx.surface;
    if norm != plan.normalization {
        findings.push(Finding::NormalizationMismatch);
    }

    let expected = ChernData::new(ctx.rank, DivisorClass::new(ctx.s, ctx.t), ctx.c2);
    let found = chern_of(s, &plan.chain);
    if found != expected {
        findings.push(Finding::ChernMismatch { expected, found });
    }
    let reported = match norm {
        Some(n) => twist(s, found, -n.twist),
        None => found,
    };
    let mut compare = |field: &str, recorded: i64, recomputed: i64| {
        if recorded != recomputed {
            findings.push(Finding::ComputedMismatch {
                field: field.to_string(),
                recorded,
                recomputed,
            });
        }
    };
    compare("c1.a", plan.computed.c1.a, reported.c1.a);
    compare("c1.b", plan.computed.c1.b, reported.c1.b);
    compare("c2", plan.computed.c2, reported.c2);
    if let Some(last) = plan.computed.stages.last() {
        compare("stages.last.c2", last.value.c2, found.c2);
    }

    for item in &plan.checklist {
        match item.recheck(s) {
            Err(reason) => findings.push(Finding::ReplayFailure {
                item: item.id.clone(),
                reason,
            }),
            Ok(status) if status != item.status => findings.push(Finding::StatusMismatch {
                item: item.id.clone(),
                recorded: item.status,
                recomputed: status,
            }),
            Ok(_) => {}
        }
        if item.status == ItemStatus::Failed {
            findings.push(Finding::FailedItem {
                item: item.id.clone(),
            });
        }
    }

    let shift = norm.map_or(0, |n| n.c2 - plan.request.c2);
    match c2_threshold(s, plan.theorem, ctx.rank, ctx.s, ctx.t) {
        Ok((thr, strict)) => {
            if thr - shift != plan.c2_threshold || strict != plan.threshold_strict {
                findings.push(Finding::ThresholdMismatch {
                    recorded: plan.c2_threshold,
                    recomputed: thr - shift,
                });
            }
        }
        Err(err) => findings.push(Finding::InvalidRequest {
            message: err.to_string(),
        }),
    }

    let h0 = plan.parameters.b.map_or(1, |b| b + 1 - ctx.g());
    if h0 != plan.h0_lower {
        findings.push(Finding::H0Mismatch {
            recorded: plan.h0_lower,
            recomputed: h0,
        });
    }
    VerifyReport { findings }
}
