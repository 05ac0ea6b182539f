//! Rank three: `c₁ = 2C₀ + tf`, `C₀ + df` and `df`.

use crate::chern::{euler_char, twist};
use crate::engine::{ext1_lower, h0_verdict, h2_verdict};
use crate::lattice::DivisorClass;
use crate::sheaf::{chern_of, SheafExpr};

use super::checklist::{rank_two_template, step_items, Checklist, Relation};
use super::{exact_div, flag, named, stage, Ctx, Draft, Parameters, PlanError, TheoremTag};

pub(crate) fn case_for(ctx: &Ctx) -> TheoremTag {
    match ctx.s {
        2 => TheoremTag::Rank3TwoSection,
        1 => TheoremTag::Rank3OneSection,
        _ => TheoremTag::Rank3Fiber,
    }
}

fn check_input(ctx: &Ctx, tag: TheoremTag) -> Result<(), PlanError> {
    let bad = |msg: String| Err(PlanError::InputOutOfRange(msg));
    if ctx.rank != 3 {
        return bad(format!("{tag} needs rank 3, got {}", ctx.rank));
    }
    match tag {
        TheoremTag::Rank3TwoSection => {
            let bound = (-2).min(1 - 2 * ctx.g());
            if ctx.s != 2 {
                bad(format!("{tag} needs c1 = 2C0 + tf, got s = {}", ctx.s))
            } else if ctx.t > bound {
                bad(format!(
                    "{tag} needs t <= min(-2, 1-2g) = {bound}, got t = {}",
                    ctx.t
                ))
            } else {
                Ok(())
            }
        }
        TheoremTag::Rank3OneSection | TheoremTag::Rank3Fiber => {
            let want = if tag == TheoremTag::Rank3OneSection {
                1
            } else {
                0
            };
            if ctx.s != want {
                bad(format!("{tag} needs s = {want}, got s = {}", ctx.s))
            } else if ctx.t < 0 {
                bad(format!("{tag} needs d >= 0, got d = {}", ctx.t))
            } else {
                Ok(())
            }
        }
        other => bad(format!("{other} is not a rank-3 case")),
    }
}

/// Smallest `b` with `b > max{0, 2g−2, (d−1)/3, (d+2g−2−e)/3}`.
fn b_min(ctx: &Ctx) -> i64 {
    let (g, e, d) = (ctx.g(), ctx.e(), ctx.t);
    1 + [
        0,
        2 * g - 2,
        (d - 1).div_euclid(3),
        (d + 2 * g - 2 - e).div_euclid(3),
    ]
    .into_iter()
    .max()
    .unwrap_or(0)
}

pub(crate) fn threshold(ctx: &Ctx, tag: TheoremTag) -> Result<(i64, bool), PlanError> {
    check_input(ctx, tag)?;
    let (g, e, d) = (ctx.g(), ctx.e(), ctx.t);
    Ok(match tag {
        // |Z| = c₂ + e + 1 must beat the section bound 2 of O_C(1) and make
        // χE₂(−D) = 2 − g − |Z| negative.
        TheoremTag::Rank3TwoSection => ((2i64).max(3 - g) - e - 1, false),
        TheoremTag::Rank3OneSection => (5 * b_min(ctx) + 2 * e + 3 - d, false),
        _ => (3 * b_min(ctx) + 3 + e - d, false),
    })
}

pub(crate) fn plan(ctx: &Ctx, tag: TheoremTag) -> Result<Draft, PlanError> {
    let (thr, strict) = threshold(ctx, tag)?;
    ctx.check_threshold(thr, strict)?;
    match tag {
        TheoremTag::Rank3TwoSection => two_section(ctx, thr),
        _ => lemma_chain(ctx, tag, thr),
    }
}

fn two_section(ctx: &Ctx, thr: i64) -> Result<Draft, PlanError> {
    let s = &ctx.surface;
    let (g, e, t) = (ctx.g(), ctx.e(), ctx.t);
    let b = -t - 1;
    let z = ctx.c2 + e + 1;
    let d = DivisorClass::new(1, t);
    let sub = DivisorClass::fiber(b);
    let quot = SheafExpr::ideal(DivisorClass::new(1, -b), z, true)?;
    let e2 = SheafExpr::extension(SheafExpr::line(sub), quot.clone(), true);
    let e3 = SheafExpr::extension(e2.clone(), SheafExpr::line(d), true);

    let mut list = Checklist::default();
    list.arith("b-positive", "b = -t-1 >= 1", b, Relation::Ge, 1);
    let flags = rank_two_template(&mut list, s, "E2", sub, &quot, true)?;
    step_items(&mut list, s, "E3", &e2, flags, d)?;

    let chi_e2 = euler_char(s, twist(s, chern_of(s, &e2), -d))?;
    Ok(Draft {
        theorem: TheoremTag::Rank3TwoSection,
        parameters: Parameters {
            b: Some(b),
            l: None,
            divisors: vec![named("D", d)],
            lengths: vec![named("Z", z)],
            twist_divisor: Some(d),
        },
        stages: vec![stage("E2", s, &e2), stage("E3", s, &e3)],
        chain: e3,
        checklist: list,
        chi: vec![named("E2(-D)", chi_e2)],
        h0_lower: b + 1 - g,
        theorem_h0_bound: -t - g,
        c2_threshold: thr,
        threshold_strict: false,
        flags: Vec::new(),
    })
}

/// `c₁ = C₀ + df` (m = 1) and `c₁ = df` (m = 0):
/// `E₂ = [O(−C₀+(b+1)f) | I_Z((m+1)C₀+(d−2b−1)f)]`, `E₃ = [O(bf) | E₂]`.
fn lemma_chain(ctx: &Ctx, tag: TheoremTag, thr: i64) -> Result<Draft, PlanError> {
    let s = &ctx.surface;
    let (g, e, d, m) = (ctx.g(), ctx.e(), ctx.t, ctx.s);
    let k = s.canonical();
    let (l, b) = if m == 1 {
        let x = ctx.c2 - 2 * e - 3 + d;
        let l = x.rem_euclid(5);
        (l, exact_div("b", x - l, 5)?)
    } else {
        let x = ctx.c2 + d - 2 - e;
        let l = (x - 1).rem_euclid(3) + 1;
        (l, exact_div("b", x - l, 3)?)
    };
    let sub = DivisorClass::new(-1, b + 1);
    let a = DivisorClass::new(m + 1, d - 2 * b - 1);
    let bf = DivisorClass::fiber(b);
    let quot = SheafExpr::ideal(a, l, false)?;
    let e2 = SheafExpr::extension(SheafExpr::line(sub), quot.clone(), true);
    let e3 = SheafExpr::extension(SheafExpr::line(bf), e2.clone(), true);

    let mut list = Checklist::default();
    list.arith("b.positive", "b > 0", b, Relation::Gt, 0);
    list.arith("b.curve", "b > 2g-2", b, Relation::Gt, 2 * g - 2);
    list.arith("b.sections", "3b > d-1", 3 * b, Relation::Gt, d - 1);
    list.arith(
        "b.canonical",
        "3b > d+2g-2-e",
        3 * b,
        Relation::Gt,
        d + 2 * g - 2 - e,
    );
    rank_two_template(&mut list, s, "E2", sub, &quot, false)?;
    let c0 = DivisorClass::SECTION;
    let f = DivisorClass::FIBER;
    list.zero("E2.b", "h2 E2(K-bf) = 0", h2_verdict(s, &e2, k - bf));
    list.zero(
        "E2.c",
        "h0 E2(K-(b-1)f) = 0",
        h0_verdict(s, &e2, k - bf + f),
    );
    list.zero(
        "E2.d",
        "h0 E2(K+C0-bf) = 0",
        h0_verdict(s, &e2, k + c0 - bf),
    );
    list.zero("E2.e", "h0 E2(-bf) = 0", h0_verdict(s, &e2, -bf));

    // ext¹(E₂, O(bf)) ≥ −χE₂(K − bf) = −χE₂*(bf)
    let chi_dual = euler_char(s, twist(s, chern_of(s, &e2), k - bf))?;
    let mut flags = Vec::new();
    let mut note = format!(
        "computed chi E2(K-bf) = chi E2*(bf) = {chi_dual}, giving ext1(E2, O(bf)) >= {}",
        (-chi_dual).max(0)
    );
    if m == 1 {
        let displayed = l + 2 * e - d + 3 * b + 3;
        note.push_str(&format!(
            "; the construction displays chi E2*(bf) = {displayed} and concludes positivity"
        ));
        flags.push(flag(
            "extension-positivity-sign",
            format!(
                "ext1(E2, O(bf)) > 0 is taken as asserted: displayed chi = {displayed} would \
                 give a non-positive bound, computed chi = {chi_dual} gives {}",
                (-chi_dual).max(0)
            ),
        ));
    }
    list.asserted("E3.ext1", "ext1(E2, O(bf)) > 0", note);

    list.zero(
        "E3.prioritary.sub",
        "h0 E3(K-(b-1)f) = 0",
        h0_verdict(s, &e3, k - bf + f),
    );
    list.zero(
        "E3.prioritary.quot-sub",
        "h0 E3(K+C0-bf) = 0",
        h0_verdict(s, &e3, k + c0 - bf),
    );
    list.zero(
        "E3.prioritary.quot-ideal-fiber",
        format!("h2 {quot} ⊗ O{} = 0", -f - bf),
        h2_verdict(s, &quot, -f - bf),
    );
    list.zero(
        "E3.prioritary.quot-ideal-section",
        format!("h2 {quot} ⊗ O{} = 0", -f - sub),
        h2_verdict(s, &quot, -f - sub),
    );

    let h0_lower = b + 1 - g;
    let theorem_h0_bound = if m == 1 {
        exact_div("k", ctx.c2 - 2 * e - 3 + d - l, 5)? + 1 - g
    } else {
        exact_div("k", ctx.c2 + d + 1 - 3 * g - e - l, 3)? + 1 - g
    };
    if theorem_h0_bound != h0_lower {
        list.asserted(
            "h0.stated-bound",
            format!("h0 E >= {theorem_h0_bound}"),
            format!("the chain certifies only h0 >= b+1-g = {h0_lower}"),
        );
        flags.push(flag(
            "theorem-h0-bound",
            format!(
                "the chain certifies h0 >= b+1-g = {h0_lower}; the theorem states {theorem_h0_bound}"
            ),
        ));
    }
    let ext1 = ext1_lower(s, &quot, &SheafExpr::line(sub))?;
    Ok(Draft {
        theorem: tag,
        parameters: Parameters {
            b: Some(b),
            l: Some(l),
            divisors: vec![named("E2.sub", sub), named("E2.quot", a)],
            lengths: vec![named("Z", l)],
            twist_divisor: None,
        },
        stages: vec![stage("E2", s, &e2), stage("E3", s, &e3)],
        chain: e3,
        checklist: list,
        chi: vec![named("ext1 E2 lower", ext1), named("E2(K-bf)", chi_dual)],
        h0_lower,
        theorem_h0_bound,
        c2_threshold: thr,
        threshold_strict: false,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{plan_rank3, ItemStatus, PlanRequest};
    use super::*;

    #[test]
    fn two_section_example() {
        let p = plan_rank3(&PlanRequest::new(0, 0, 3, 2, -2, 100)).unwrap();
        assert_eq!(p.parameters.b, Some(1));
        assert_eq!(p.parameters.length("Z"), Some(101));
        assert_eq!(p.h0_lower, 2);
        assert_eq!(p.computed.c2, 100);
        assert_eq!(p.computed.stages[1].value.c2, 100);
    }

    #[test]
    fn one_section_example() {
        let p = plan_rank3(&PlanRequest::new(0, 0, 3, 1, 0, 103)).unwrap();
        assert_eq!((p.parameters.b, p.parameters.l), (Some(20), Some(0)));
        assert_eq!(p.computed.stages[0].value.c2, 83);
        assert_eq!(p.computed.c1, DivisorClass::new(1, 0));
        assert_eq!(p.h0_lower, 21);
        assert!(p.has_flag("extension-positivity-sign"));
        assert_eq!(p.item("E3.ext1").unwrap().status, ItemStatus::PaperAsserted);
    }

    #[test]
    fn fiber_example() {
        let p = plan_rank3(&PlanRequest::new(0, 0, 3, 0, 0, 10)).unwrap();
        assert_eq!((p.parameters.b, p.parameters.l), (Some(2), Some(2)));
        assert_eq!(p.h0_lower, 3);
        assert_eq!(p.theorem_h0_bound, 4);
        assert!(p.has_flag("theorem-h0-bound"));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            plan_rank3(&PlanRequest::new(0, 0, 3, 2, -1, 100)),
            Err(PlanError::InputOutOfRange(_))
        ));
        assert!(matches!(
            plan_rank3(&PlanRequest::new(0, 0, 3, 1, -1, 100)),
            Err(PlanError::InputOutOfRange(_))
        ));
    }

    #[test]
    fn thresholds_are_sharp() {
        for g in 0..3 {
            for e in 0..3 {
                for (sc, t) in [(2, -2 - 2 * g), (2, -5 - g), (1, 0), (1, 4), (0, 0), (0, 5)] {
                    let req = PlanRequest::new(g, e, 3, sc, t, 0);
                    let (ctx, _) = super::super::normalize(&req).unwrap();
                    let tag = case_for(&ctx);
                    let (thr, _) = threshold(&ctx, tag).unwrap();
                    for c2 in thr..thr + 12 {
                        let p = plan_rank3(&PlanRequest { c2, ..req.clone() });
                        assert!(p.is_ok(), "g={g} e={e} s={sc} t={t} c2={c2}: {p:?}");
                    }
                    assert!(matches!(
                        plan_rank3(&PlanRequest { c2: thr - 1, ..req }),
                        Err(PlanError::C2BelowThreshold { .. })
                    ));
                }
            }
        }
    }
}
