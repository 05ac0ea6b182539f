//! Rank four: `c₁ = f` and `c₁ = C₀ + mf`, `m ∈ {0, 1}`, by two recursive
//! extensions `0 → E₂ → E₃ → O(D) → 0`, `0 → E₃ → E₄ → O(−D) → 0`.

use crate::chern::{euler_char, twist};
use crate::engine::{h0_verdict, h2_verdict};
use crate::lattice::DivisorClass;
use crate::sheaf::{chern_of, SheafExpr};

use super::checklist::{rank_two_template, step_items, Checklist, Relation};
use super::{exact_div, named, stage, Ctx, Draft, Parameters, PlanError, TheoremTag};

pub(crate) fn case_for(ctx: &Ctx) -> Option<TheoremTag> {
    match (ctx.s, ctx.t) {
        (0, 1) if ctx.ebar() >= 0 => Some(TheoremTag::Rank4Fiber),
        (0, 1) => Some(TheoremTag::Rank4FiberNegative),
        (1, 0) | (1, 1) => Some(TheoremTag::Rank4Section),
        _ => None,
    }
}

fn check_input(ctx: &Ctx, tag: TheoremTag) -> Result<(), PlanError> {
    let bad = |msg: String| Err(PlanError::InputOutOfRange(msg));
    if ctx.rank != 4 {
        return bad(format!("{tag} needs rank 4, got {}", ctx.rank));
    }
    let c1 = (ctx.s, ctx.t);
    match tag {
        TheoremTag::Rank4Fiber | TheoremTag::Rank4FiberNegative => {
            if c1 != (0, 1) {
                return bad(format!("{tag} needs c1 = f, got ({},{})", ctx.s, ctx.t));
            }
            let positive = tag == TheoremTag::Rank4Fiber;
            if positive != (ctx.ebar() >= 0) {
                return bad(format!(
                    "{tag} needs ebar {} 0, got ebar = {}",
                    if positive { ">=" } else { "<" },
                    ctx.ebar()
                ));
            }
            Ok(())
        }
        TheoremTag::Rank4Section if ctx.s == 1 && (0..=1).contains(&ctx.t) => Ok(()),
        TheoremTag::Rank4Section => bad(format!(
            "{tag} needs c1 = C0 + mf with m in {{0,1}}, got ({},{})",
            ctx.s, ctx.t
        )),
        other => bad(format!("{other} is not a rank-4 case")),
    }
}

fn section_b_min(ctx: &Ctx) -> i64 {
    let (g, m, ebar) = (ctx.g(), ctx.t, ctx.ebar());
    1 + [0, 2 * g - 2, (m - ebar).div_euclid(2)]
        .into_iter()
        .max()
        .unwrap_or(0)
}

pub(crate) fn threshold(ctx: &Ctx, tag: TheoremTag) -> Result<(i64, bool), PlanError> {
    check_input(ctx, tag)?;
    let (g, e) = (ctx.g(), ctx.e());
    Ok(match tag {
        // |Z| ≥ 2 = h⁰O(−D + f) makes E₂(−D) sectionless.
        TheoremTag::Rank4Fiber => (4 + e, false),
        TheoremTag::Rank4FiberNegative => (4 * g - e, false),
        _ => (3 * section_b_min(ctx) + 5 + e, false),
    })
}

pub(crate) fn plan(ctx: &Ctx, tag: TheoremTag) -> Result<Draft, PlanError> {
    let (thr, strict) = threshold(ctx, tag)?;
    ctx.check_threshold(thr, strict)?;
    let (g, e, ebar) = (ctx.g(), ctx.e(), ctx.ebar());
    let mut list = Checklist::default();
    let (sub, a, z, d, b, l) = match tag {
        TheoremTag::Rank4Fiber => (
            DivisorClass::ZERO,
            DivisorClass::FIBER,
            ctx.c2 - 2 - e,
            DivisorClass::new(1, -1),
            None,
            None,
        ),
        TheoremTag::Rank4FiberNegative => (
            DivisorClass::ZERO,
            DivisorClass::FIBER,
            ctx.c2 + e - 4 * g + 2,
            DivisorClass::new(1, ebar - 1),
            None,
            None,
        ),
        _ => {
            let m = ctx.t;
            let x = ctx.c2 - 2 - e;
            let l = x.rem_euclid(3) + 3;
            let b = exact_div("b", x - l, 3)?;
            list.arith("b.positive", "b > 0", b, Relation::Gt, 0);
            list.arith("b.curve", "b > 2g-2", b, Relation::Gt, 2 * g - 2);
            (
                DivisorClass::fiber(b),
                DivisorClass::new(1, m - b),
                l,
                DivisorClass::new(1, -b - 1),
                Some(b),
                Some(l),
            )
        }
    };
    let s = &ctx.surface;
    let k = s.canonical();
    let f = DivisorClass::FIBER;
    let quot = SheafExpr::ideal(a, z, true)?;
    let e2 = SheafExpr::extension(SheafExpr::line(sub), quot.clone(), true);
    let e3 = SheafExpr::extension(e2.clone(), SheafExpr::line(d), true);
    let e4 = SheafExpr::extension(e3.clone(), SheafExpr::line(-d), true);

    let flags = rank_two_template(&mut list, s, "E2", sub, &quot, true)?;
    list.zero("E2.h0-D", "h0 E2(D) = 0", h0_verdict(s, &e2, d));
    list.zero(
        "E2.h0-K+f+D",
        "h0 E2(K+f+D) = 0",
        h0_verdict(s, &e2, k + f + d),
    );
    list.zero("E2.h2-K+D", "h2 E2(K+D) = 0", h2_verdict(s, &e2, k + d));
    list.zero("E2.h2-f+D", "h2 E2(-f+D) = 0", h2_verdict(s, &e2, -f + d));
    let line = |x: DivisorClass| SheafExpr::line(x);
    list.zero(
        "D.non-effective",
        format!("h0 O{d} = 0"),
        h0_verdict(s, &line(d), DivisorClass::ZERO),
    );
    list.zero(
        "-D.non-effective",
        format!("h0 O{} = 0", -d),
        h0_verdict(s, &line(-d), DivisorClass::ZERO),
    );
    list.zero(
        "K+f+2D.non-effective",
        format!("h0 O{} = 0", k + f + 2 * d),
        h0_verdict(s, &line(k + f + 2 * d), DivisorClass::ZERO),
    );
    list.zero(
        "K+f-2D.non-effective",
        format!("h0 O{} = 0", k + f - 2 * d),
        h0_verdict(s, &line(k + f - 2 * d), DivisorClass::ZERO),
    );
    let flags = step_items(&mut list, s, "E3", &e2, flags, d)?;
    step_items(&mut list, s, "E4", &e3, flags, -d)?;

    let chi_e2 = euler_char(s, twist(s, chern_of(s, &e2), -d))?;
    let chi_e3 = euler_char(s, twist(s, chern_of(s, &e3), d))?;
    let h0_lower = b.map_or(1, |b| b + 1 - g);
    let divisors = vec![named("E2.sub", sub), named("E2.quot", a), named("D", d)];
    Ok(Draft {
        theorem: tag,
        parameters: Parameters {
            b,
            l,
            divisors,
            lengths: vec![named("Z", z)],
            twist_divisor: Some(d),
        },
        stages: vec![
            stage("E2", s, &e2),
            stage("E3", s, &e3),
            stage("E4", s, &e4),
        ],
        chain: e4,
        checklist: list,
        chi: vec![named("E2(-D)", chi_e2), named("E3(D)", chi_e3)],
        h0_lower,
        theorem_h0_bound: h0_lower,
        c2_threshold: thr,
        threshold_strict: false,
        flags: Vec::new(),
    })
}
