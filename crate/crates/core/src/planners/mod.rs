//! One planner per construction theorem. A planner derives the integer
//! parameters, builds the extension chain, certifies every hypothesis through
//! the vanishing engine and checks that the chain has exactly the requested
//! Chern data.

mod checklist;
mod rank3;
mod rank4;
mod rank_r;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chern::{twist, ChernData};
use crate::error::Error;
use crate::lattice::{make_surface, DivisorClass, SurfaceParams};
use crate::sheaf::{chern_of, SheafExpr};

pub use checklist::{ChecklistItem, Evidence, ItemStatus, Relation};
pub use rank_r::{rank_r_family, RankRFamily};
pub use verify::{verify_plan, Finding, VerifyReport};

use checklist::Checklist;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanRequest {
    pub g: i64,
    pub e: i64,
    pub rank: i64,
    pub s: i64,
    pub t: i64,
    pub c2: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<TheoremTag>,
}

impl PlanRequest {
    pub fn new(g: i64, e: i64, rank: i64, s: i64, t: i64, c2: i64) -> Self {
        PlanRequest {
            g,
            e,
            rank,
            s,
            t,
            c2,
            theorem: None,
        }
    }

    pub fn with_theorem(mut self, theorem: TheoremTag) -> Self {
        self.theorem = Some(theorem);
        self
    }

    pub fn c1(&self) -> DivisorClass {
        DivisorClass::new(self.s, self.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremTag {
    /// rank 3, `c₁ = 2C₀ + tf`
    Rank3TwoSection,
    /// rank 3, `c₁ = C₀ + df`
    Rank3OneSection,
    /// rank 3, `c₁ = df`
    Rank3Fiber,
    /// rank 4, `c₁ = f`, `ē ≥ 0`
    Rank4Fiber,
    /// rank 4, `c₁ = f`, `ē < 0`
    Rank4FiberNegative,
    /// rank 4, `c₁ = C₀ + mf`, `m ∈ {0, 1}`
    Rank4Section,
    /// rank `r ≥ 4`, `ē > 0`
    RankRPositive,
    /// rank `r ≥ 4`, `ē = 0`
    RankRZero,
    /// rank `r ≥ 4`, `ē = −1`
    RankRMinusOne,
    /// rank `r ≥ 4`, `ē < −1`
    RankRNegative,
}

impl TheoremTag {
    pub const ALL: [TheoremTag; 10] = [
        TheoremTag::Rank3TwoSection,
        TheoremTag::Rank3OneSection,
        TheoremTag::Rank3Fiber,
        TheoremTag::Rank4Fiber,
        TheoremTag::Rank4FiberNegative,
        TheoremTag::Rank4Section,
        TheoremTag::RankRPositive,
        TheoremTag::RankRZero,
        TheoremTag::RankRMinusOne,
        TheoremTag::RankRNegative,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::Rank3TwoSection => "rank3-two-section",
            TheoremTag::Rank3OneSection => "rank3-one-section",
            TheoremTag::Rank3Fiber => "rank3-fiber",
            TheoremTag::Rank4Fiber => "rank4-fiber",
            TheoremTag::Rank4FiberNegative => "rank4-fiber-negative",
            TheoremTag::Rank4Section => "rank4-section",
            TheoremTag::RankRPositive => "rank-r-positive",
            TheoremTag::RankRZero => "rank-r-zero",
            TheoremTag::RankRMinusOne => "rank-r-minus-one",
            TheoremTag::RankRNegative => "rank-r-negative",
        }
    }

    fn family(self) -> Family {
        match self {
            TheoremTag::Rank3TwoSection | TheoremTag::Rank3OneSection | TheoremTag::Rank3Fiber => {
                Family::Rank3
            }
            TheoremTag::Rank4Fiber | TheoremTag::Rank4FiberNegative | TheoremTag::Rank4Section => {
                Family::Rank4
            }
            _ => Family::RankR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Rank3,
    Rank4,
    RankR,
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TheoremTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = TheoremTag::ALL.iter().map(|t| t.as_str()).collect();
                format!(
                    "unknown theorem tag `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

pub(crate) fn named<T>(name: impl Into<String>, value: T) -> Named<T> {
    Named {
        name: name.into(),
        value,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub divisors: Vec<Named<DivisorClass>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lengths: Vec<Named<i64>>,
    /// The divisor `D` of the recursive extensions, where there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist_divisor: Option<DivisorClass>,
}

impl Parameters {
    pub fn divisor(&self, name: &str) -> Option<DivisorClass> {
        self.divisors
            .iter()
            .find(|d| d.name == name)
            .map(|d| d.value)
    }

    pub fn length(&self, name: &str) -> Option<i64> {
        self.lengths
            .iter()
            .find(|d| d.name == name)
            .map(|d| d.value)
    }
}

/// Values computed from the chain. `c1`, `c2` are those of the requested
/// bundle; `stages` and `chi` refer to the normalized chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Computed {
    pub c1: DivisorClass,
    pub c2: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<Named<ChernData>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chi: Vec<Named<i64>>,
}

/// The requested bundle is `E`; the chain builds `E ⊗ O(twist)`, whose first
/// Chern class is in the normalized range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub twist: DivisorClass,
    pub c1: DivisorClass,
    pub c2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flag {
    pub code: String,
    pub message: String,
}

pub(crate) fn flag(code: &str, message: String) -> Flag {
    Flag {
        code: code.to_string(),
        message,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub theorem: TheoremTag,
    pub request: PlanRequest,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
    pub parameters: Parameters,
    pub chain: SheafExpr,
    pub checklist: Vec<ChecklistItem>,
    pub computed: Computed,
    /// Guaranteed `h⁰` of the normalized bundle.
    pub h0_lower: i64,
    /// The bound as displayed in the theorem statement.
    pub theorem_h0_bound: i64,
    pub c2_threshold: i64,
    /// Whether `c₂` must strictly exceed the threshold.
    pub threshold_strict: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<Flag>,
}

impl ConstructionPlan {
    pub fn surface(&self) -> Result<SurfaceParams, Error> {
        make_surface(self.request.g, self.request.e)
    }

    pub fn item(&self, id: &str) -> Option<&ChecklistItem> {
        self.checklist.iter().find(|i| i.id == id)
    }

    pub fn has_flag(&self, code: &str) -> bool {
        self.flags.iter().any(|f| f.code == code)
    }

    pub fn paper_asserted(&self) -> impl Iterator<Item = &ChecklistItem> {
        self.checklist
            .iter()
            .filter(|i| i.status == ItemStatus::PaperAsserted)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("invalid surface: g = {g}, e = {e}")]
    InvalidSurface { g: i64, e: i64 },
    #[error("input out of range: {0}")]
    InputOutOfRange(String),
    #[error("c2 = {c2} is below the threshold: need c2 {} {threshold}", if *.strict { ">" } else { ">=" })]
    C2BelowThreshold {
        c2: i64,
        threshold: i64,
        strict: bool,
    },
    #[error("parameter {name} = {numerator}/{denominator} is not an integer")]
    NonIntegralParameter {
        name: String,
        numerator: i64,
        denominator: i64,
    },
    #[error("checklist item `{item}` failed")]
    ChecklistFailed {
        item: String,
        plan: Box<ConstructionPlan>,
    },
    #[error("divisor family sums to {found}, expected {expected}")]
    DivisorSumMismatch {
        expected: DivisorClass,
        found: DivisorClass,
    },
    #[error("chain has Chern data {found}, expected {expected}")]
    ChernMismatch {
        expected: ChernData,
        found: ChernData,
    },
    #[error("no planner for rank {0}")]
    UnsupportedRank(i64),
    #[error(transparent)]
    Calculus(#[from] Error),
}

impl PlanError {
    /// Sound rejections (a hypothesis could not be certified) as opposed to
    /// requests outside every theorem.
    pub fn is_checklist_failure(&self) -> bool {
        matches!(self, PlanError::ChecklistFailed { .. })
    }
}

/// The normalized problem handed to a case planner.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ctx {
    pub surface: SurfaceParams,
    pub rank: i64,
    pub s: i64,
    pub t: i64,
    pub c2: i64,
}

impl Ctx {
    pub fn g(&self) -> i64 {
        self.surface.genus()
    }

    pub fn e(&self) -> i64 {
        self.surface.e()
    }

    pub fn ebar(&self) -> i64 {
        self.surface.ebar()
    }

    pub fn check_threshold(&self, threshold: i64, strict: bool) -> Result<(), PlanError> {
        let ok = if strict {
            self.c2 > threshold
        } else {
            self.c2 >= threshold
        };
        if ok {
            Ok(())
        } else {
            Err(PlanError::C2BelowThreshold {
                c2: self.c2,
                threshold,
                strict,
            })
        }
    }
}

/// What a case planner hands back before the common exactness checks.
pub(crate) struct Draft {
    pub theorem: TheoremTag,
    pub parameters: Parameters,
    pub chain: SheafExpr,
    pub checklist: Checklist,
    pub stages: Vec<Named<ChernData>>,
    pub chi: Vec<Named<i64>>,
    pub h0_lower: i64,
    pub theorem_h0_bound: i64,
    pub c2_threshold: i64,
    pub threshold_strict: bool,
    pub flags: Vec<Flag>,
}

pub(crate) fn exact_div(name: &str, numerator: i64, denominator: i64) -> Result<i64, PlanError> {
    if numerator.rem_euclid(denominator) == 0 {
        Ok(numerator.div_euclid(denominator))
    } else {
        Err(PlanError::NonIntegralParameter {
            name: name.to_string(),
            numerator,
            denominator,
        })
    }
}

fn normalize(req: &PlanRequest) -> Result<(Ctx, Option<Normalization>), PlanError> {
    let surface =
        make_surface(req.g, req.e).map_err(|_| PlanError::InvalidSurface { g: req.g, e: req.e })?;
    if req.rank < 3 {
        return Err(PlanError::UnsupportedRank(req.rank));
    }
    let k = req.s.div_euclid(req.rank);
    let original = ChernData::new(req.rank, req.c1(), req.c2);
    let (ctx, norm) = if k == 0 {
        (original, None)
    } else {
        let tw = DivisorClass::new(-k, 0);
        let n = twist(&surface, original, tw);
        (
            n,
            Some(Normalization {
                twist: tw,
                c1: n.c1,
                c2: n.c2,
            }),
        )
    };
    Ok((
        Ctx {
            surface,
            rank: req.rank,
            s: ctx.c1.a,
            t: ctx.c1.b,
            c2: ctx.c2,
        },
        norm,
    ))
}

fn finish(
    ctx: &Ctx,
    req: &PlanRequest,
    normalization: Option<Normalization>,
    draft: Draft,
) -> Result<ConstructionPlan, PlanError> {
    let s = &ctx.surface;
    let expected = ChernData::new(ctx.rank, DivisorClass::new(ctx.s, ctx.t), ctx.c2);
    let found = chern_of(s, &draft.chain);
    if found != expected {
        return Err(PlanError::ChernMismatch { expected, found });
    }
    let reported = match normalization {
        Some(n) => twist(s, found, -n.twist),
        None => found,
    };
    let shift = normalization.map_or(0, |n| n.c2 - req.c2);
    let mut flags = draft.flags;
    if let Some(n) = normalization {
        flags.push(flag(
            "normalized",
            format!(
                "planned E ⊗ O{} with c1 = {}, c2 = {}; h0_lower refers to this twist{}",
                n.twist,
                n.c1,
                n.c2,
                if n.twist.a < 0 {
                    " and also bounds h0 E, since O(-twist) is effective"
                } else {
                    ""
                }
            ),
        ));
    }
    let plan = ConstructionPlan {
        theorem: draft.theorem,
        request: req.clone(),
        normalization,
        parameters: draft.parameters,
        chain: draft.chain,
        checklist: draft.checklist.items,
        computed: Computed {
            c1: reported.c1,
            c2: reported.c2,
            stages: draft.stages,
            chi: draft.chi,
        },
        h0_lower: draft.h0_lower,
        theorem_h0_bound: draft.theorem_h0_bound,
        c2_threshold: draft.c2_threshold - shift,
        threshold_strict: draft.threshold_strict,
        flags,
    };
    if let Some(failed) = plan
        .checklist
        .iter()
        .find(|i| i.status == ItemStatus::Failed)
    {
        return Err(PlanError::ChecklistFailed {
            item: failed.id.clone(),
            plan: Box::new(plan),
        });
    }
    Ok(plan)
}

fn run_case(req: &PlanRequest, tag: TheoremTag) -> Result<ConstructionPlan, PlanError> {
    let (ctx, norm) = normalize(req)?;
    let shift = norm.map_or(0, |n| n.c2 - req.c2);
    let draft = match tag.family() {
        Family::Rank3 => rank3::plan(&ctx, tag),
        Family::Rank4 => rank4::plan(&ctx, tag),
        Family::RankR => rank_r::plan(&ctx, tag),
    }
    .map_err(|err| match err {
        PlanError::C2BelowThreshold {
            threshold, strict, ..
        } => PlanError::C2BelowThreshold {
            c2: req.c2,
            threshold: threshold - shift,
            strict,
        },
        other => other,
    })?;
    finish(&ctx, req, norm, draft)
}

/// Theorem cases that apply to a request, most specific first.
pub fn candidates(req: &PlanRequest) -> Result<Vec<TheoremTag>, PlanError> {
    let (ctx, _) = normalize(req)?;
    let mut out = Vec::new();
    match ctx.rank {
        3 => out.push(rank3::case_for(&ctx)),
        4 => {
            if let Some(tag) = rank4::case_for(&ctx) {
                out.push(tag);
            }
            out.push(rank_r::case_for(&ctx));
        }
        _ => out.push(rank_r::case_for(&ctx)),
    }
    Ok(out)
}

pub fn plan_rank3(req: &PlanRequest) -> Result<ConstructionPlan, PlanError> {
    let (ctx, _) = normalize(req)?;
    if ctx.rank != 3 {
        return Err(PlanError::InputOutOfRange(format!(
            "rank-3 planner called with rank {}",
            ctx.rank
        )));
    }
    run_case(req, req.theorem.unwrap_or_else(|| rank3::case_for(&ctx)))
}

pub fn plan_rank4(req: &PlanRequest) -> Result<ConstructionPlan, PlanError> {
    let (ctx, _) = normalize(req)?;
    if ctx.rank != 4 {
        return Err(PlanError::InputOutOfRange(format!(
            "rank-4 planner called with rank {}",
            ctx.rank
        )));
    }
    let tag = match req.theorem {
        Some(tag) => tag,
        None => rank4::case_for(&ctx).ok_or_else(|| {
            PlanError::InputOutOfRange(format!(
                "rank 4 needs c1 = f or c1 = C0 + mf with m in {{0,1}}, got ({},{})",
                ctx.s, ctx.t
            ))
        })?,
    };
    run_case(req, tag)
}

pub fn plan_rank_r(req: &PlanRequest) -> Result<ConstructionPlan, PlanError> {
    let (ctx, _) = normalize(req)?;
    run_case(req, req.theorem.unwrap_or_else(|| rank_r::case_for(&ctx)))
}

/// Plans a request with the most specific applicable theorem. When a
/// rank-4 specific construction cannot certify its checklist, the rank-r
/// construction is tried next and the fallback is flagged on the plan.
pub fn plan(req: &PlanRequest) -> Result<ConstructionPlan, PlanError> {
    if let Some(tag) = req.theorem {
        return run_case(req, tag);
    }
    let cases = candidates(req)?;
    let first = run_case(req, cases[0]);
    match first {
        Err(ref err @ PlanError::ChecklistFailed { ref item, .. }) if cases.len() > 1 => {
            match run_case(req, cases[1]) {
                Ok(mut p) => {
                    p.flags.push(flag(
                        "fallback",
                        format!("{} failed at `{item}`; planned with {}", cases[0], cases[1]),
                    ));
                    Ok(p)
                }
                Err(_) => Err(err.clone()),
            }
        }
        other => other,
    }
}

/// The smallest admissible `c₂` of a case with normalized `c₁ = sC₀ + tf`,
/// and whether `c₂` must exceed it strictly.
pub fn c2_threshold(
    surface: &SurfaceParams,
    theorem: TheoremTag,
    rank: i64,
    s: i64,
    t: i64,
) -> Result<(i64, bool), PlanError> {
    let ctx = Ctx {
        surface: *surface,
        rank,
        s,
        t,
        c2: 0,
    };
    match theorem.family() {
        Family::Rank3 => rank3::threshold(&ctx, theorem),
        Family::Rank4 => rank4::threshold(&ctx, theorem),
        Family::RankR => rank_r::threshold(&ctx, theorem),
    }
}

pub(crate) fn stage(name: &str, s: &SurfaceParams, e: &SheafExpr) -> Named<ChernData> {
    named(name, chern_of(s, e))
}
