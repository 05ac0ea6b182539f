//! Hypothesis checklists and the reusable vanishing templates behind them.

use serde::{Deserialize, Serialize};

use crate::engine::{
    cayley_bacharach, ext1_certificate, extension_step, h0_verdict, h2_verdict, replay, BaseFlags,
    Certificate, Verdict,
};
use crate::error::Error;
use crate::lattice::{DivisorClass, SurfaceParams};
use crate::sheaf::SheafExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemStatus {
    Certified,
    PaperAsserted,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Eq,
    Gt,
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    Certificate {
        expect: Verdict,
        certificate: Certificate,
    },
    Arithmetic {
        lhs: i64,
        relation: Relation,
        rhs: i64,
    },
    Asserted {
        note: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistItem {
    pub id: String,
    pub hypothesis: String,
    pub status: ItemStatus,
    pub evidence: Evidence,
}

impl ChecklistItem {
    /// Re-derives the status from the evidence, replaying certificates.
    pub fn recheck(&self, s: &SurfaceParams) -> Result<ItemStatus, String> {
        match &self.evidence {
            Evidence::Certificate {
                expect,
                certificate,
            } => {
                replay(s, certificate)?;
                Ok(if certificate.verdict == *expect {
                    ItemStatus::Certified
                } else {
                    ItemStatus::Failed
                })
            }
            Evidence::Arithmetic { lhs, relation, rhs } => Ok(if relation.holds(*lhs, *rhs) {
                ItemStatus::Certified
            } else {
                ItemStatus::Failed
            }),
            Evidence::Asserted { .. } => Ok(ItemStatus::PaperAsserted),
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct Checklist {
    pub items: Vec<ChecklistItem>,
}

impl Checklist {
    pub fn cert(
        &mut self,
        id: impl Into<String>,
        hypothesis: impl Into<String>,
        expect: Verdict,
        certificate: Certificate,
    ) -> bool {
        let ok = certificate.verdict == expect;
        self.items.push(ChecklistItem {
            id: id.into(),
            hypothesis: hypothesis.into(),
            status: if ok {
                ItemStatus::Certified
            } else {
                ItemStatus::Failed
            },
            evidence: Evidence::Certificate {
                expect,
                certificate,
            },
        });
        ok
    }

    pub fn zero(
        &mut self,
        id: impl Into<String>,
        hypothesis: impl Into<String>,
        c: Certificate,
    ) -> bool {
        self.cert(id, hypothesis, Verdict::Zero, c)
    }

    pub fn arith(
        &mut self,
        id: impl Into<String>,
        hypothesis: impl Into<String>,
        lhs: i64,
        relation: Relation,
        rhs: i64,
    ) -> bool {
        let ok = relation.holds(lhs, rhs);
        self.items.push(ChecklistItem {
            id: id.into(),
            hypothesis: hypothesis.into(),
            status: if ok {
                ItemStatus::Certified
            } else {
                ItemStatus::Failed
            },
            evidence: Evidence::Arithmetic { lhs, relation, rhs },
        });
        ok
    }

    pub fn asserted(&mut self, id: impl Into<String>, hypothesis: impl Into<String>, note: String) {
        self.items.push(ChecklistItem {
            id: id.into(),
            hypothesis: hypothesis.into(),
            status: ItemStatus::PaperAsserted,
            evidence: Evidence::Asserted { note },
        });
    }
}

/// `E = [O(B) | I_Z(A)]` is simple (and optionally prioritary): the extension
/// class exists, `E` is locally free, and the Hom/Ext² groups in the
/// standard long exact sequences vanish.
pub(crate) fn rank_two_template(
    list: &mut Checklist,
    s: &SurfaceParams,
    name: &str,
    sub: DivisorClass,
    quot: &SheafExpr,
    prioritary: bool,
) -> Result<BaseFlags, Error> {
    let k = s.canonical();
    let f = DivisorClass::FIBER;
    let a = quot.rank_one_divisor().ok_or(Error::UnsupportedRank {
        rank: quot.rank(),
        limit: 1,
    })?;
    let o_sub = SheafExpr::line(sub);

    let mut simple = list.cert(
        format!("{name}.ext1"),
        format!("ext1({quot}, O{sub}) > 0"),
        Verdict::NonZero,
        ext1_certificate(s, quot, &o_sub)?,
    );
    if quot.length() > 0 {
        let (_, cb) = cayley_bacharach(s, a - sub + k, quot.length(), generic(quot));
        simple &= list.zero(
            format!("{name}.cayley-bacharach"),
            format!("(O{}, Z) has the Cayley-Bacharach property", a - sub + k),
            cb,
        );
    }
    simple &= list.zero(
        format!("{name}.simple.sub"),
        format!("h0 {quot} ⊗ O{} = 0", -sub),
        h0_verdict(s, quot, -sub),
    );
    simple &= list.zero(
        format!("{name}.simple.quot"),
        format!("h2 {quot} ⊗ O{} = 0", k - sub),
        h2_verdict(s, quot, k - sub),
    );
    let mut prior = false;
    if prioritary {
        prior = simple;
        prior &= list.zero(
            format!("{name}.prioritary.sub"),
            "h2 O(-f) = 0",
            h2_verdict(s, &o_sub, -sub - f),
        );
        prior &= list.zero(
            format!("{name}.prioritary.quot"),
            format!("h2 {quot} ⊗ O{} = 0", -sub - f),
            h2_verdict(s, quot, -sub - f),
        );
        prior &= list.zero(
            format!("{name}.prioritary.ext2"),
            format!("h0 {quot} ⊗ O{} = 0", k - sub + f),
            h0_verdict(s, quot, k - sub + f),
        );
    }
    Ok(BaseFlags {
        simple,
        prioritary: prior,
    })
}

fn generic(e: &SheafExpr) -> bool {
    matches!(e, SheafExpr::IdealSheaf { generic: true, .. })
}

/// Records the five checks of one recursive extension step by `O(L)`.
pub(crate) fn step_items(
    list: &mut Checklist,
    s: &SurfaceParams,
    name: &str,
    base: &SheafExpr,
    flags: BaseFlags,
    l: DivisorClass,
) -> Result<BaseFlags, Error> {
    let step = extension_step(s, base, flags, l)?;
    for (check, cert) in step.certificates {
        list.cert(
            format!("{name}.{}", step_id(check)),
            format!("{} with L = {l}", check.describe()),
            check.expected(),
            cert,
        );
    }
    Ok(BaseFlags {
        simple: step.nontrivial_ok && step.simple,
        prioritary: step.nontrivial_ok && step.prioritary,
    })
}

fn step_id(check: crate::engine::StepCheck) -> &'static str {
    use crate::engine::StepCheck::*;
    match check {
        Nontrivial => "nontrivial",
        SimpleH0 => "simple-h0",
        SimpleH2 => "simple-h2",
        PrioritaryH0 => "prioritary-h0",
        PrioritaryH2 => "prioritary-h2",
    }
}
