//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use prior_forge::engine::{h0_verdict, h1_positive, h2_verdict, replay, TraceStep, Verdict};
use prior_forge::oracle::{flatten, whitney_c2};
use prior_forge::planners::{rank_r_family, ItemStatus, PlanError};
use prior_forge::{
    c2_threshold, chern_of, effectivity, euler_char, line_bundle, make_surface, plan, plan_rank_r,
    verify_plan, ConstructionPlan, DivisorClass, Effectivity, PlanRequest, TheoremTag,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn accept(req: &PlanRequest) -> Result<ConstructionPlan, String> {
    plan(req).map_err(|e| format!("{req:?}: {e}"))
}

fn stage_c2(p: &ConstructionPlan, name: &str) -> Result<i64, String> {
    p.computed
        .stages
        .iter()
        .find(|s| s.name == name)
        .map(|s| s.value.c2)
        .ok_or_else(|| format!("no stage {name}"))
}

fn chi(p: &ConstructionPlan, name: &str) -> Result<i64, String> {
    p.computed
        .chi
        .iter()
        .find(|s| s.name == name)
        .map(|s| s.value)
        .ok_or_else(|| format!("no chi {name}"))
}

fn lattice_constants() -> Outcome {
    let (c0, f) = (DivisorClass::SECTION, DivisorClass::FIBER);
    let mut n = 0;
    for g in 0..=5 {
        for e in 0..=5 {
            let s = make_surface(g, e).map_err(|x| x.to_string())?;
            ensure!(s.intersect(c0, c0) == -e, "C0^2 at g={g} e={e}");
            ensure!(
                s.intersect(c0, f) == 1 && s.intersect(f, c0) == 1,
                "C0.f at e={e}"
            );
            ensure!(s.intersect(f, f) == 0, "f^2 at e={e}");
            ensure!(
                s.canonical() == DivisorClass::new(-2, -(e - 2 * g + 2)),
                "K at g={g} e={e}: {}",
                s.canonical()
            );
            n += 1;
        }
    }
    Ok(format!("{n} surfaces"))
}

fn rr_closed_forms() -> Outcome {
    let mut n = 0;
    for g in 0..=3 {
        for e in 0..=3 {
            let s = make_surface(g, e).map_err(|x| x.to_string())?;
            let chi_line = |d: DivisorClass| euler_char(&s, line_bundle(d)).unwrap();
            for b in -3..=6 {
                for m in 0..=1 {
                    let v = chi_line(DivisorClass::new(-1, -(m - 2 * b)));
                    ensure!(
                        v == 0,
                        "chi O(-C0-(m-2b)f) = {v} at g={g} e={e} m={m} b={b}"
                    );
                    n += 1;
                }
                for d in -3..=6 {
                    let v = chi_line(DivisorClass::new(-3, -(d - 3 * b - 2)));
                    let want = -6 + 2 * g - 3 * e + 2 * d - 6 * b;
                    ensure!(v == want, "g={g} e={e} d={d} b={b}: {v} != {want}");
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} points, 0 mismatches"))
}

/// Rank 3, `c1 = 2C0 + tf`.
fn grid3() -> Vec<PlanRequest> {
    let mut v = Vec::new();
    for g in 0..=2 {
        for e in 0..=2 {
            for t in -5..=(-2i64).min(1 - 2 * g) {
                for c2 in 50..=60 {
                    v.push(PlanRequest::new(g, e, 3, 2, t, c2));
                }
            }
        }
    }
    v
}

fn two_section_chain() -> Outcome {
    let grid = grid3();
    for req in &grid {
        let p = accept(req)?;
        let (g, e, t, c2) = (req.g, req.e, req.t, req.c2);
        let z = p.parameters.length("Z").unwrap_or(-1);
        ensure!(
            p.parameters.b == Some(-t - 1),
            "{req:?}: b = {:?}",
            p.parameters.b
        );
        ensure!(z == c2 + e + 1, "{req:?}: |Z| = {z}");
        ensure!(chi(&p, "E2(-D)")? == 2 - g - z, "{req:?}: chi E2(-D)");
        ensure!(
            stage_c2(&p, "E3")? == z - 1 - e && z - 1 - e == c2,
            "{req:?}: c2(E3)"
        );
        ensure!(p.h0_lower == -t - g, "{req:?}: h0_lower {}", p.h0_lower);
    }
    Ok(format!("{} plans", grid.len()))
}

/// Rank 3, `c1 = C0 + df`.
fn grid4() -> Vec<PlanRequest> {
    let mut v = Vec::new();
    for g in 0..=2 {
        for e in 0..=2 {
            for d in 0..=5 {
                for c2 in 50..=60 {
                    v.push(PlanRequest::new(g, e, 3, 1, d, c2));
                }
            }
        }
    }
    v
}

fn one_section_chain() -> Outcome {
    let grid = grid4();
    for req in &grid {
        let p = accept(req)?;
        let (g, e, d) = (req.g, req.e, req.t);
        let (b, l) = (p.parameters.b.unwrap(), p.parameters.l.unwrap());
        let bound = l + 6 - 2 * g + 3 * e - 2 * d + 6 * b;
        ensure!(bound > 0, "{req:?}: bound {bound}");
        ensure!(chi(&p, "ext1 E2 lower")? == bound, "{req:?}: ext1 lower");
        ensure!(
            stage_c2(&p, "E2")? == l + 2 * e + 4 * b + 3 - d,
            "{req:?}: c2(E2)"
        );
        ensure!(stage_c2(&p, "E3")? == req.c2, "{req:?}: c2(E3)");
    }
    let p = accept(&PlanRequest::new(0, 0, 3, 1, 0, 103))?;
    let b = p.parameters.b.unwrap();
    ensure!(
        (stage_c2(&p, "E2")?, b) == (83, 20),
        "worked instance: b = {b}"
    );
    ensure!(stage_c2(&p, "E3")? == 83 + 20, "worked instance: c2(E3)");
    Ok(format!(
        "{} plans and the worked instance 83+20",
        grid.len()
    ))
}

/// Rank 4, `c1 = f` with `ebar >= 0`.
fn grid5() -> Vec<PlanRequest> {
    let mut v = Vec::new();
    for g in 0..=3 {
        for e in 0..=4 {
            if e - 2 * g + 2 >= 0 {
                for c2 in 50..=60 {
                    v.push(PlanRequest::new(g, e, 4, 0, 1, c2));
                }
            }
        }
    }
    v
}

fn rank4_chains() -> Outcome {
    let grid = grid5();
    for req in &grid {
        let p = accept(req)?;
        let z = p.parameters.length("Z").unwrap();
        ensure!(
            p.theorem == TheoremTag::Rank4Fiber,
            "{req:?}: {}",
            p.theorem
        );
        ensure!(stage_c2(&p, "E4")? == z + req.e + 2, "{req:?}: c2(E4)");
        ensure!(z + req.e + 2 == req.c2, "{req:?}: |Z| = {z}");
    }
    let p = accept(&PlanRequest::new(0, 0, 4, 1, 0, 20))?;
    let c2s: Vec<i64> = p.computed.stages.iter().map(|s| s.value.c2).collect();
    ensure!(c2s == [8, 2, 20], "worked instance stages {c2s:?}");
    ensure!(p.h0_lower == 6, "worked instance h0_lower {}", p.h0_lower);
    Ok(format!(
        "{} plans and the worked instance 8, 2, 20",
        grid.len()
    ))
}

fn rank_r_positive() -> Outcome {
    let mut n = 0;
    for g in 0..=2 {
        for e in 0..=5 {
            let s = make_surface(g, e).map_err(|x| x.to_string())?;
            if s.ebar() <= 0 {
                continue;
            }
            for r in 4..=12 {
                for sc in 0..r {
                    for t in (2 - r).max(2 * g - r)..=5 {
                        let fam = rank_r_family(&s, r, sc, t).map_err(|x| x.to_string())?;
                        let total = DivisorClass::fiber(fam.b) + fam.divisors.iter().copied().sum();
                        ensure!(
                            total == DivisorClass::new(sc, t),
                            "g={g} e={e} r={r} s={sc} t={t}"
                        );
                        n += 1;
                    }
                }
            }
        }
    }
    let s = make_surface(0, 1).unwrap();
    let fam = rank_r_family(&s, 4, 0, 0).map_err(|x| x.to_string())?;
    ensure!(fam.threshold == 56, "f(b) = {}", fam.threshold);
    ensure!(
        fam.fixed_lengths.get(1) == Some(&4),
        "|Z2| = {:?}",
        fam.fixed_lengths
    );
    ensure!(fam.pairwise == 51, "pairwise sum {}", fam.pairwise);
    for c2 in [57, 100, 300] {
        ensure!(fam.last_length(c2) == c2 - 56, "|Z3| at c2={c2}");
    }
    let p = accept(&PlanRequest::new(0, 1, 4, 0, 0, 100))?;
    ensure!(p.parameters.length("Z3") == Some(44), "plan |Z3|");
    Ok(format!("{n} families telescope; f(b) = 56, pairwise 51"))
}

fn rank_r_negative() -> Outcome {
    let s = make_surface(2, 0).unwrap();
    let fam = rank_r_family(&s, 4, 1, 0).map_err(|x| x.to_string())?;
    let (t, g, ebar) = (0, 2, s.ebar());
    ensure!(fam.b == 7, "b = {}", fam.b);
    for c2 in [fam.threshold + 1, 40, 100] {
        ensure!(fam.last_length(c2) == c2 - 10, "|Z3| at c2={c2}");
    }
    ensure!(
        t - g - 4 * ebar == 6 && fam.b + 1 - g == 6,
        "h0 expressions"
    );
    let req = PlanRequest::new(2, 0, 4, 1, 0, 40).with_theorem(TheoremTag::RankRNegative);
    let p = match plan_rank_r(&req) {
        Ok(p) => p,
        Err(PlanError::ChecklistFailed { plan, .. }) => *plan,
        Err(e) => return Err(e.to_string()),
    };
    ensure!(p.h0_lower == 6, "plan h0_lower {}", p.h0_lower);
    ensure!(p.parameters.length("Z3") == Some(30), "plan |Z3|");
    let mut n = 0;
    for g in 0..=4 {
        for e in 0..=4 {
            let s = make_surface(g, e).unwrap();
            if s.ebar() >= -1 {
                continue;
            }
            for sc in 0..4 {
                for t in 0..=8 {
                    let Ok(fam) = rank_r_family(&s, 4, sc, t) else {
                        continue;
                    };
                    ensure!(
                        fam.b + 1 - g == t - g - 4 * s.ebar(),
                        "g={g} e={e} s={sc} t={t}"
                    );
                    n += 1;
                }
            }
        }
    }
    ensure!(n > 0, "empty grid");
    Ok(format!("b = 7, |Z3| = c2-10, h0 = 6; {n} families agree"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..1000 {
        let s = common::surface(&mut rng);
        let rank = rng.gen_range(1..=10);
        let t = common::tree(&mut rng, rank);
        let (w, c) = (whitney_c2(&s, &flatten(&t)), chern_of(&s, &t).c2);
        ensure!(w == c, "tree {i}: whitney {w} fold {c}");
    }
    Ok("1000 trees, 0 mismatches".into())
}

fn engine_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut replayed = 0;
    for _ in 0..1500 {
        let s = common::surface(&mut rng);
        let rank = rng.gen_range(1..=5);
        let t = common::tree(&mut rng, rank);
        let d = common::divisor(&mut rng, 6);
        let h1 = h1_positive(&s, &t, d).map_err(|e| e.to_string())?;
        for c in [h0_verdict(&s, &t, d), h2_verdict(&s, &t, d), h1] {
            replay(&s, &c)?;
            replayed += 1;
            let justified = c.verdict != Verdict::NonZero
                || c.trace.iter().any(|st| match st {
                    TraceStep::V6 {
                        chi, correction, ..
                    } => correction - chi > 0,
                    TraceStep::V1 { effectivity, .. } => *effectivity == Effectivity::Effective,
                    _ => false,
                });
            ensure!(justified, "unjustified NonZero: {}", c.to_text());
            for st in &c.trace {
                if let TraceStep::V1 {
                    divisor,
                    effectivity: eff,
                } = *st
                {
                    ensure!(effectivity(&s, divisor).verdict == eff, "V1 step {divisor}");
                }
            }
        }
    }
    let mut planted = 0;
    for _ in 0..300 {
        let s = common::surface(&mut rng);
        let tw = common::divisor(&mut rng, 3);
        let rank = rng.gen_range(1..=8);
        let mut zero_leaf = |r: &mut ChaCha8Rng| loop {
            let l = common::leaf(r);
            if h0_verdict(&s, &l, tw).verdict == Verdict::Zero {
                return l;
            }
        };
        let t = common::tree_with(&mut rng, rank, &mut zero_leaf);
        let c = h0_verdict(&s, &t, tw);
        ensure!(
            c.verdict == Verdict::Zero,
            "sandwich lost a zero: {}",
            c.to_text()
        );
        replay(&s, &c)?;
        planted += 1;
    }
    Ok(format!(
        "{replayed} certificates replayed, {planted} planted trees"
    ))
}

fn flagged_discrepancies() -> Outcome {
    let p = accept(&PlanRequest::new(0, 0, 3, 0, 0, 10))?;
    ensure!(p.has_flag("theorem-h0-bound"), "h0 bound flag missing");
    let item = p
        .item("h0.stated-bound")
        .ok_or("stated-bound item missing")?;
    ensure!(
        item.status == ItemStatus::PaperAsserted,
        "stated-bound status"
    );
    let p = accept(&PlanRequest::new(0, 0, 3, 1, 0, 103))?;
    ensure!(p.has_flag("extension-positivity-sign"), "sign flag missing");
    let item = p.item("E3.ext1").ok_or("ext1 item missing")?;
    ensure!(item.status == ItemStatus::PaperAsserted, "ext1 status");
    let req = PlanRequest::new(2, 1, 5, 0, 5, 400);
    let p = match plan(&req) {
        Ok(p) => p,
        Err(PlanError::ChecklistFailed { plan, .. }) => *plan,
        Err(e) => return Err(e.to_string()),
    };
    ensure!(p.theorem == TheoremTag::RankRMinusOne, "{}", p.theorem);
    ensure!(
        p.has_flag("displayed-divisor-sum-mismatch"),
        "divisor-sum flag missing"
    );
    Ok("three discrepancies surface".into())
}

fn cli(args: &[String]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_prior-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn plan_args(r: &PlanRequest) -> Vec<String> {
    let mut v: Vec<String> = [
        "plan",
        "--genus",
        &r.g.to_string(),
        "--e",
        &r.e.to_string(),
        "--rank",
        &r.rank.to_string(),
        "--c1",
        &format!("{},{}", r.s, r.t),
        "--c2",
        &r.c2.to_string(),
    ]
    .map(String::from)
    .to_vec();
    if let Some(t) = r.theorem {
        v.extend(["--theorem".to_string(), t.as_str().to_string()]);
    }
    v
}

fn cli_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut grid: Vec<PlanRequest> = grid3().into_iter().step_by(3).collect();
    grid.extend(grid4().into_iter().step_by(5));
    grid.extend(grid5().into_iter().step_by(2));
    grid.push(PlanRequest::new(0, 0, 3, 1, 0, 103));
    grid.push(PlanRequest::new(0, 0, 4, 1, 0, 20));
    grid.push(PlanRequest::new(0, 1, 4, 0, 0, 100));
    for r in 4..=6 {
        grid.push(PlanRequest::new(0, 2, r, 1, 1, 2000));
    }
    let mut n = 0;
    for req in &grid {
        if plan(req).is_err() {
            continue;
        }
        let file = dir.path().join(format!("plan{n}.json"));
        let mut args = plan_args(req);
        args.extend(["--out".to_string(), file.display().to_string()]);
        let out = cli(&args);
        ensure!(
            out.status.code() == Some(0),
            "plan {req:?}: {:?}",
            out.status
        );
        let out = cli(&["check".to_string(), file.display().to_string()]);
        ensure!(
            out.status.code() == Some(0),
            "check {req:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let doc = std::fs::read_to_string(&file).map_err(|e| e.to_string())?;
        let p: serde_json::Value = serde_json::from_str(&doc).map_err(|e| e.to_string())?;
        let embedded: ConstructionPlan =
            serde_json::from_value(p["plan"].clone()).map_err(|e| e.to_string())?;
        ensure!(
            verify_plan(&embedded).is_clean(),
            "{req:?}: parsed plan does not verify"
        );
        n += 1;
    }
    ensure!(n >= 100, "only {n} accepted points");
    let below = [
        PlanRequest::new(0, 1, 4, 0, 0, 40),
        PlanRequest::new(2, 0, 4, 1, 0, 30).with_theorem(TheoremTag::RankRNegative),
        PlanRequest::new(1, 2, 3, 1, 2, 5),
        PlanRequest::new(0, 3, 4, 0, 1, 6),
    ];
    for req in &below {
        let s = make_surface(req.g, req.e).unwrap();
        let tag = match req.theorem {
            Some(t) => t,
            None => prior_forge::planners::candidates(req).map_err(|e| e.to_string())?[0],
        };
        let (thr, _) = c2_threshold(&s, tag, req.rank, req.s, req.t).map_err(|e| e.to_string())?;
        let out = cli(&plan_args(req));
        let err = String::from_utf8_lossy(&out.stderr);
        ensure!(
            out.status.code() == Some(2),
            "{req:?}: exit {:?}",
            out.status
        );
        ensure!(
            err.contains("below the threshold") && err.trim_end().ends_with(&format!(" {thr}")),
            "{req:?}: {err}"
        );
    }
    Ok(format!(
        "{n} plans checked, {} rejections echo the threshold",
        below.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("lattice constants", lattice_constants),
        ("Riemann-Roch closed forms", rr_closed_forms),
        ("rank 3, c1 = 2C0 + tf chain", two_section_chain),
        ("rank 3, c1 = C0 + df chain", one_section_chain),
        ("rank 4 chains", rank4_chains),
        (
            "rank r, ebar > 0 telescoping and worked instance",
            rank_r_positive,
        ),
        ("rank r, ebar < -1 worked instance", rank_r_negative),
        (
            "Whitney expansion equals recursive fold",
            oracle_equivalence,
        ),
        ("engine soundness", engine_soundness),
        ("flagged discrepancies surface", flagged_discrepancies),
        ("CLI plan/check round trip", cli_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
