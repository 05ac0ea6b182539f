//! Grid sweeps. Points are planned in parallel; rows keep grid order.

use std::io::Write;

use prior_forge::{plan, PlanError, PlanRequest};
use rayon::prelude::*;

use crate::args::{Format, SweepArgs};
use crate::document::{RowStatus, SweepReport, SweepRow};
use crate::{to_json, EXIT_INPUT, EXIT_OK};

/// Caps sweep parallelism when set to a positive integer.
pub const THREADS_VAR: &str = "PRIOR_FORGE_THREADS";

/// Grid points in lexicographic order of `(g, e, rank, s, t, c2)`.
pub fn grid(a: &SweepArgs) -> Vec<PlanRequest> {
    let mut out = Vec::new();
    for g in a.genus.clone() {
        for e in a.e.clone() {
            for rank in a.rank.clone() {
                for s in a.s.clone() {
                    for t in a.t.clone() {
                        for c2 in a.c2.clone() {
                            let mut req = PlanRequest::new(g, e, rank, s, t, c2);
                            req.theorem = a.theorem;
                            out.push(req);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn row(req: &PlanRequest) -> SweepRow {
    let mut row = SweepRow {
        g: req.g,
        e: req.e,
        rank: req.rank,
        s: req.s,
        t: req.t,
        c2: req.c2,
        status: RowStatus::Rejected,
        theorem: None,
        h0_lower: None,
        c2_threshold: None,
        reason: None,
        warnings: Vec::new(),
    };
    let describe = |row: &mut SweepRow, p: &prior_forge::ConstructionPlan| {
        row.theorem = Some(p.theorem);
        row.c2_threshold = Some(p.c2_threshold);
        row.warnings = crate::document::warnings_of(p)
            .into_iter()
            .map(|w| w.code)
            .collect();
    };
    match plan(req) {
        Ok(p) => {
            describe(&mut row, &p);
            row.status = RowStatus::Accepted;
            row.h0_lower = Some(p.h0_lower);
        }
        Err(PlanError::ChecklistFailed { item, plan }) => {
            describe(&mut row, &plan);
            row.status = RowStatus::ChecklistFailed;
            row.reason = Some(format!("checklist item `{item}` failed"));
        }
        Err(e) => {
            if let PlanError::C2BelowThreshold { threshold, .. } = e {
                row.c2_threshold = Some(threshold);
            }
            row.reason = Some(e.to_string());
        }
    }
    row
}

fn threads() -> Option<usize> {
    std::env::var(THREADS_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n| n > 0)
}

pub fn sweep(reqs: &[PlanRequest]) -> SweepReport {
    let work = || reqs.par_iter().map(row).collect::<Vec<_>>();
    let rows = match threads().map(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build()) {
        Some(Ok(pool)) => pool.install(work),
        _ => work(),
    };
    SweepReport::new(rows)
}

fn text(report: &SweepReport) -> String {
    let mut s =
        String::from("g\te\trank\ts\tt\tc2\tstatus\ttheorem\th0_lower\tthreshold\treason\n");
    let opt = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
    for r in &report.rows {
        let status = match r.status {
            RowStatus::Accepted => "accepted",
            RowStatus::ChecklistFailed => "checklist-failed",
            RowStatus::Rejected => "rejected",
        };
        s += &format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{status}\t{}\t{}\t{}\t{}\n",
            r.g,
            r.e,
            r.rank,
            r.s,
            r.t,
            r.c2,
            r.theorem.map_or("-", |t| t.as_str()),
            opt(r.h0_lower),
            opt(r.c2_threshold),
            r.reason.as_deref().unwrap_or("-"),
        );
    }
    let c = &report.counts;
    s += &format!(
        "# total {} accepted {} checklist-failed {} rejected {}\n",
        c.total, c.accepted, c.checklist_failed, c.rejected
    );
    s
}

pub(crate) fn cmd_sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let report = sweep(&grid(&a));
    let body = match a.format {
        Format::Json => to_json(&report),
        Format::Text => text(&report),
    };
    let written = match &a.out {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("{}: {e}", p.display())),
        None => out.write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
