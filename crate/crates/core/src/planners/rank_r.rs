//! Rank `r ≥ 4`: one extension `0 → O(bf) → E → ⊕ I_{Z_i}(D_i) → 0`.

use serde::{Deserialize, Serialize};

use crate::chern::{euler_char, line_bundle};
use crate::engine::{cayley_bacharach, ext1_certificate, ext1_lower, h0_verdict, Verdict};
use crate::lattice::{DivisorClass, SurfaceParams};
use crate::sheaf::SheafExpr;

use super::checklist::{Checklist, Relation};
use super::{flag, named, stage, Ctx, Draft, Parameters, PlanError, TheoremTag};

/// The `c₂`-independent part of a rank-`r` construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRFamily {
    pub theorem: TheoremTag,
    pub b: i64,
    /// `D₁, …, D_{r−1}`.
    pub divisors: Vec<DivisorClass>,
    /// `|Z₁|, …, |Z_{r−2}|`; `|Z_{r−1}|` absorbs `c₂`.
    pub fixed_lengths: Vec<i64>,
    /// `Σ_{i<j} D_i·D_j + bf·ΣD_i`.
    pub pairwise: i64,
    /// `χO(bf − D_{r−1})`.
    pub last_chi: i64,
    /// `f(b)`; `c₂` must exceed it.
    pub threshold: i64,
    /// The last divisor as displayed, when it differs from `c₁ − bf − ΣD_i`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub displayed_last: Option<DivisorClass>,
}

impl RankRFamily {
    pub fn last_length(&self, c2: i64) -> i64 {
        c2 - self.fixed_lengths.iter().sum::<i64>() - self.pairwise
    }

    /// `bf + ΣD_i`, which must equal `c₁`.
    pub fn c1(&self) -> DivisorClass {
        DivisorClass::fiber(self.b) + self.divisors.iter().copied().sum()
    }

    pub fn lengths(&self, c2: i64) -> Vec<i64> {
        let mut out = self.fixed_lengths.clone();
        out.push(self.last_length(c2));
        out
    }
}

pub(crate) fn case_for(ctx: &Ctx) -> TheoremTag {
    match ctx.ebar() {
        x if x > 0 => TheoremTag::RankRPositive,
        0 => TheoremTag::RankRZero,
        -1 => TheoremTag::RankRMinusOne,
        _ => TheoremTag::RankRNegative,
    }
}

/// `((r−1)(r−2) + 2) / 2`, the multiple of `ē` in `b` when `ē < −1`.
fn negative_factor(r: i64) -> i64 {
    ((r - 1) * (r - 2) + 2) / 2
}

fn min_t(tag: TheoremTag, g: i64, r: i64, ebar: i64) -> i64 {
    match tag {
        TheoremTag::RankRPositive => (2 - r).max(2 * g - r),
        TheoremTag::RankRZero => (3 - r).max(2 * g - r + 1),
        TheoremTag::RankRMinusOne => (6 - r).max(2 * g + 4 - r),
        _ => (2 * g - 2).max(0) + negative_factor(r) * ebar + 1,
    }
}

/// Divisors, fixed lengths and `f(b)` of the construction for normalized
/// `c₁ = sC₀ + tf`.
pub fn rank_r_family(
    surface: &SurfaceParams,
    rank: i64,
    s: i64,
    t: i64,
) -> Result<RankRFamily, PlanError> {
    let ctx = Ctx {
        surface: *surface,
        rank,
        s,
        t,
        c2: 0,
    };
    family(&ctx, case_for(&ctx))
}

fn family(ctx: &Ctx, tag: TheoremTag) -> Result<RankRFamily, PlanError> {
    let bad = |msg: String| Err(PlanError::InputOutOfRange(msg));
    let (sx, g, r, s, t, ebar) = (&ctx.surface, ctx.g(), ctx.rank, ctx.s, ctx.t, ctx.ebar());
    if r < 4 {
        return bad(format!("{tag} needs rank >= 4, got {r}"));
    }
    if !(0..r).contains(&s) {
        return bad(format!("{tag} needs 0 <= s <= r-1, got s = {s}"));
    }
    let expected = case_for(ctx);
    if tag.family() != super::Family::RankR {
        return bad(format!("{tag} is not a rank-r case"));
    }
    if tag != expected {
        return bad(format!(
            "{tag} does not apply to ebar = {ebar}; use {expected}"
        ));
    }
    let lo = min_t(tag, g, r, ebar);
    if t < lo {
        return bad(format!(
            "{tag} needs t >= {lo} for g = {g}, r = {r}, got t = {t}"
        ));
    }

    let big_s: i64 = (2..r).sum();
    let c1 = DivisorClass::new(s, t);
    let (b, first, middle): (i64, DivisorClass, Box<dyn Fn(i64) -> DivisorClass>) = match tag {
        TheoremTag::RankRPositive => (
            r - 2 + t,
            DivisorClass::new(-big_s, r - 1 + t),
            Box::new(move |i| DivisorClass::new(i, r - i)),
        ),
        TheoremTag::RankRZero => (
            r - 3 + t,
            DivisorClass::new(-big_s, r - 1 + t),
            Box::new(move |i| DivisorClass::new(i, r - i)),
        ),
        TheoremTag::RankRMinusOne => (
            r - 6 + t,
            DivisorClass::new(-big_s, r - 3 + t),
            Box::new(move |i| DivisorClass::new(i, r - 3 * i)),
        ),
        _ => (
            t - 1 - negative_factor(r) * ebar,
            DivisorClass::new(1, ebar),
            Box::new(move |i| DivisorClass::new(i, i * ebar)),
        ),
    };
    let bf = DivisorClass::fiber(b);
    let mut divisors = vec![first];
    divisors.extend((2..=r - 2).map(middle));
    let head: DivisorClass = divisors.iter().copied().sum();
    let (last, displayed_last) = match tag {
        TheoremTag::RankRPositive | TheoremTag::RankRZero => {
            (DivisorClass::new(r - 1 + s, -(b + big_s)), None)
        }
        TheoremTag::RankRMinusOne => {
            let shown = DivisorClass::new(r - 1 + s, -(b + (2..r).map(|j| r - 3 * j).sum::<i64>()));
            let last = c1 - bf - head;
            (last, (shown != last).then_some(shown))
        }
        _ => (c1 - bf - head, None),
    };
    divisors.push(last);
    let found = bf + head + last;
    if found != c1 {
        return Err(PlanError::DivisorSumMismatch {
            expected: c1,
            found,
        });
    }

    let chi_of = |d: DivisorClass| euler_char(sx, line_bundle(bf - d));
    let mut fixed_lengths = vec![1];
    for i in 2..=r - 2 {
        let d = divisors[(i - 1) as usize];
        let chi = chi_of(d)?;
        let len = match tag {
            TheoremTag::RankRPositive => [0, chi, (i + 1) * (r - i - b + 1)].into_iter().max(),
            TheoremTag::RankRZero => [0, chi, (i + 1) * (r - i - b + 1), (i - 1) * (r - i - b + 2)]
                .into_iter()
                .max(),
            TheoremTag::RankRMinusOne => [
                0,
                chi,
                (i + 1) * (r - 3 * i - b + 1),
                (i - 1) * (r - 3 * i - b + 3),
            ]
            .into_iter()
            .max(),
            _ => Some(0),
        };
        fixed_lengths.push(len.unwrap_or(0) + 1);
    }
    let mut pairwise = 0;
    for (i, di) in divisors.iter().enumerate() {
        pairwise += sx.intersect(bf, *di);
        for dj in &divisors[i + 1..] {
            pairwise += sx.intersect(*di, *dj);
        }
    }
    let last_chi = chi_of(last)?;
    let threshold = fixed_lengths.iter().sum::<i64>() + pairwise + last_chi.max(0);
    Ok(RankRFamily {
        theorem: tag,
        b,
        divisors,
        fixed_lengths,
        pairwise,
        last_chi,
        threshold,
        displayed_last,
    })
}

pub(crate) fn threshold(ctx: &Ctx, tag: TheoremTag) -> Result<(i64, bool), PlanError> {
    Ok((family(ctx, tag)?.threshold, true))
}

pub(crate) fn plan(ctx: &Ctx, tag: TheoremTag) -> Result<Draft, PlanError> {
    let fam = family(ctx, tag)?;
    ctx.check_threshold(fam.threshold, true)?;
    let sx = &ctx.surface;
    let (g, r) = (ctx.g(), ctx.rank);
    let k = sx.canonical();
    let f = DivisorClass::FIBER;
    let b = fam.b;
    let bf = DivisorClass::fiber(b);
    let lengths = fam.lengths(ctx.c2);
    let sub = SheafExpr::line(bf);
    let pieces = fam
        .divisors
        .iter()
        .zip(&lengths)
        .enumerate()
        .map(|(i, (d, n))| SheafExpr::labelled_ideal(*d, *n, true, Some(i as u32 + 1)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut list = Checklist::default();
    let c1 = fam.c1();
    list.arith(
        "c1.section",
        "bf + sum D_i has C0-coefficient s",
        c1.a,
        Relation::Eq,
        ctx.s,
    );
    list.arith(
        "c1.fiber",
        "bf + sum D_i has f-coefficient t",
        c1.b,
        Relation::Eq,
        ctx.t,
    );
    list.arith(
        "b.range",
        "b >= max(0, 2g-2)",
        b,
        Relation::Ge,
        (2 * g - 2).max(0),
    );
    let last_len = *lengths.last().unwrap_or(&0);
    list.arith(
        "last-length",
        "|Z_{r-1}| > max(0, chi O(bf - D_{r-1}))",
        last_len,
        Relation::Gt,
        fam.last_chi.max(0),
    );
    let zero = DivisorClass::ZERO;
    let line = SheafExpr::line;
    let n = fam.divisors.len();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let diff = fam.divisors[i] - fam.divisors[j];
            let (a, c) = (i + 1, j + 1);
            list.zero(
                format!("i.{a}-{c}"),
                format!("D_{a} - D_{c} = {diff} is not effective"),
                h0_verdict(sx, &line(diff), zero),
            );
            list.zero(
                format!("iii.{a}-{c}"),
                format!("D_{a} - D_{c} + K + f = {} is not effective", diff + k + f),
                h0_verdict(sx, &line(diff + k + f), zero),
            );
        }
    }
    let mut ext1_bounds = Vec::new();
    for (idx, (d, piece)) in fam.divisors.iter().zip(&pieces).enumerate() {
        let i = idx + 1;
        let d = *d;
        list.zero(
            format!("ii.{i}"),
            format!("bf - D_{i} = {} is not effective", bf - d),
            h0_verdict(sx, &line(bf - d), zero),
        );
        list.zero(
            format!("iv.{i}"),
            format!("bf - D_{i} + K + f = {} is not effective", bf - d + k + f),
            h0_verdict(sx, &line(bf - d + k + f), zero),
        );
        list.zero(
            format!("v.{i}"),
            format!("h0 I_Z{i}(D_{i} - bf) = 0"),
            h0_verdict(sx, piece, -bf),
        );
        list.zero(
            format!("vi.{i}"),
            format!("h0 I_Z{i}(K + f + D_{i} - bf) = 0"),
            h0_verdict(sx, piece, k + f - bf),
        );
        let (_, cb) = cayley_bacharach(sx, d - bf + k, piece.length(), true);
        list.zero(
            format!("cayley-bacharach.{i}"),
            format!("(O{}, Z_{i}) has the Cayley-Bacharach property", d - bf + k),
            cb,
        );
        list.cert(
            format!("ext1.{i}"),
            format!("ext1(I_Z{i}(D_{i}), O(bf)) > 0"),
            Verdict::NonZero,
            ext1_certificate(sx, piece, &sub)?,
        );
        ext1_bounds.push(named(
            format!("ext1 lower {i}"),
            ext1_lower(sx, piece, &sub)?,
        ));
    }

    let quot = SheafExpr::direct_sum(pieces)
        .ok_or_else(|| PlanError::InputOutOfRange(format!("rank {r} leaves no quotient pieces")))?;
    let chain = SheafExpr::extension(sub, quot, true);
    let mut flags = Vec::new();
    if let Some(shown) = fam.displayed_last {
        let sum = DivisorClass::fiber(b) + fam.divisors[..n - 1].iter().copied().sum() + shown;
        flags.push(flag(
            "displayed-divisor-sum-mismatch",
            format!(
                "the displayed D_{} = {shown} gives bf + sum D_i = {sum}, not c1 = ({},{}); \
                 used D_{} = c1 - bf - sum D_i = {}",
                n,
                ctx.s,
                ctx.t,
                n,
                fam.divisors[n - 1]
            ),
        ));
    }
    let mut chi = ext1_bounds;
    chi.push(named("O(bf - D_last)", fam.last_chi));
    Ok(Draft {
        theorem: tag,
        parameters: Parameters {
            b: Some(b),
            l: None,
            divisors: fam
                .divisors
                .iter()
                .enumerate()
                .map(|(i, d)| named(format!("D{}", i + 1), *d))
                .collect(),
            lengths: lengths
                .iter()
                .enumerate()
                .map(|(i, n)| named(format!("Z{}", i + 1), *n))
                .collect(),
            twist_divisor: None,
        },
        stages: vec![stage("E", sx, &chain)],
        chain,
        checklist: list,
        chi,
        h0_lower: b + 1 - g,
        theorem_h0_bound: b + 1 - g,
        c2_threshold: fam.threshold,
        threshold_strict: true,
        flags,
    })
}
