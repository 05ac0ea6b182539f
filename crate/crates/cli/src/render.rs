//! Human-readable renderings.

use std::fmt::Write;

use prior_forge::planners::{Evidence, ItemStatus};
use prior_forge::SheafExpr;

use crate::document::{CheckReport, PlanDocument, PlanStatus};

fn chain(expr: &SheafExpr) -> String {
    match expr {
        SheafExpr::LineBundle { divisor } => format!("O{divisor}"),
        SheafExpr::IdealSheaf {
            divisor,
            length,
            label,
            ..
        } => match label {
            Some(i) => format!("I_Z{i}[{length}]{divisor}"),
            None => format!("I_Z[{length}]{divisor}"),
        },
        SheafExpr::Extension {
            sub,
            quot,
            nontrivial,
        } => {
            let sep = if *nontrivial { " -> " } else { " + " };
            format!("[{}{sep}{}]", chain(sub), chain(quot))
        }
    }
}

pub(crate) fn plan_text(doc: &PlanDocument) -> String {
    let p = &doc.plan;
    let r = &doc.request;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "request   g={} e={} rank={} c1=({},{}) c2={}",
        r.g, r.e, r.rank, r.s, r.t, r.c2
    );
    let status = match doc.status {
        PlanStatus::Accepted => "accepted".to_string(),
        PlanStatus::ChecklistFailed => format!(
            "checklist failed at `{}`",
            doc.failed_item.as_deref().unwrap_or("?")
        ),
    };
    let _ = writeln!(s, "status    {status}");
    let _ = writeln!(s, "theorem   {}", p.theorem);
    let rel = if p.threshold_strict { ">" } else { ">=" };
    let _ = writeln!(s, "threshold c2 {rel} {}", p.c2_threshold);
    if let Some(n) = &p.normalization {
        let _ = writeln!(s, "twist     {} gives c1={} c2={}", n.twist, n.c1, n.c2);
    }
    let _ = writeln!(s, "h0        >= {}", p.h0_lower);
    if p.theorem_h0_bound != p.h0_lower {
        let _ = writeln!(s, "          (stated bound {})", p.theorem_h0_bound);
    }
    let q = &p.parameters;
    if let Some(b) = q.b {
        let _ = writeln!(s, "b         {b}");
    }
    if let Some(l) = q.l {
        let _ = writeln!(s, "l         {l}");
    }
    for d in &q.divisors {
        let _ = writeln!(s, "{:<9} {}", d.name, d.value);
    }
    for z in &q.lengths {
        let _ = writeln!(s, "{:<9} {}", format!("|{}|", z.name), z.value);
    }
    for st in &p.computed.stages {
        let _ = writeln!(s, "stage     {} {}", st.name, st.value);
    }
    for c in &p.computed.chi {
        let _ = writeln!(s, "chi       {} = {}", c.name, c.value);
    }
    let _ = writeln!(s, "chain     {}", chain(&p.chain));
    let _ = writeln!(s, "checklist");
    for i in &p.checklist {
        let mark = match i.status {
            ItemStatus::Certified => "ok",
            ItemStatus::PaperAsserted => "asserted",
            ItemStatus::Failed => "FAILED",
        };
        let how = match &i.evidence {
            Evidence::Certificate { certificate, .. } => {
                format!("{} steps", certificate.trace.len())
            }
            Evidence::Arithmetic { lhs, relation, rhs } => {
                format!("{lhs} {} {rhs}", relation.symbol())
            }
            Evidence::Asserted { note } => note.clone(),
        };
        let _ = writeln!(s, "  [{mark:>8}] {:<28} {}  ({how})", i.id, i.hypothesis);
    }
    for w in &doc.warnings {
        let _ = writeln!(s, "warning   {}: {}", w.code, w.message);
    }
    s
}

pub(crate) fn check_text(r: &CheckReport) -> String {
    let mut s = String::new();
    for f in &r.findings {
        let _ = writeln!(s, "finding   {f:?}");
    }
    for x in &r.oracle {
        let _ = writeln!(
            s,
            "oracle    {}: plan {} oracle {}",
            x.what, x.plan, x.oracle
        );
    }
    for d in &r.document {
        let _ = writeln!(s, "document  {d}");
    }
    s += if r.clean { "clean\n" } else { "NOT CLEAN\n" };
    s
}
