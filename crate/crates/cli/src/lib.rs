//! Command-line front end for `prior-forge`: single plans, re-verification of
//! saved documents, parameter sweeps, a desk calculator and the oracle suites.
//!
//! Exit codes: 0 accepted or clean, 1 sound rejection or findings, 2 input or
//! I/O error.

pub mod args;
pub mod document;
mod render;
pub mod sweep;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use prior_forge::lattice::{effectivity, h0_upper, make_surface};
use prior_forge::oracle::{closed_form_suite, cross_check_plan, SuiteGrid};
use prior_forge::{euler_char, plan, verify_plan, ChernData, PlanError, PlanRequest};
use serde::Serialize;

use args::{CalcCommand, CheckArgs, Cli, Command, Format, OracleCommand, PlanArgs, SuiteArgs};
use document::{warnings_of, CheckReport, PlanDocument, PlanStatus, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, msg: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.err, "error: {msg}");
        EXIT_INPUT
    }

    /// Writes to `path` if given, otherwise to standard output.
    fn emit(&mut self, path: Option<&Path>, body: &str) -> Result<(), String> {
        match path {
            Some(p) => fs::write(p, body).map_err(|e| format!("{}: {e}", p.display())),
            None => self
                .out
                .write_all(body.as_bytes())
                .map_err(|e| e.to_string()),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents serialize");
    s.push('\n');
    s
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    match cli.command {
        Command::Plan(a) => cmd_plan(&mut io, a),
        Command::Check(a) => cmd_check(&mut io, a),
        Command::Sweep(a) => sweep::cmd_sweep(a, io.out, io.err),
        Command::Calc(c) => cmd_calc(&mut io, c),
        Command::Oracle(OracleCommand::Suite(a)) => cmd_suite(&mut io, a),
        Command::Oracle(OracleCommand::CrossCheck { file, format }) => {
            cmd_cross_check(&mut io, &file, format)
        }
    }
}

fn cmd_plan(io: &mut Io, a: PlanArgs) -> i32 {
    let mut req = PlanRequest::new(a.genus, a.e, a.rank, a.c1.a, a.c1.b, a.c2);
    req.theorem = a.theorem;
    let (doc, code) = match plan(&req) {
        Ok(p) => (PlanDocument::new(p, None), EXIT_OK),
        Err(PlanError::ChecklistFailed { item, plan }) => {
            (PlanDocument::new(*plan, Some(item)), EXIT_REJECTED)
        }
        Err(e) => return io.fail(e),
    };
    let body = match a.format {
        Format::Json => to_json(&doc),
        Format::Text => render::plan_text(&doc),
    };
    if let Err(e) = io.emit(a.out.as_deref(), &body) {
        return io.fail(e);
    }
    if let Some(item) = &doc.failed_item {
        let _ = writeln!(io.err, "checklist item `{item}` could not be certified");
    }
    code
}

fn read_document(path: &Path) -> Result<PlanDocument, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: PlanDocument =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(format!(
            "{}: schema version {} is not supported (expected {SCHEMA_VERSION})",
            path.display(),
            doc.schema_version
        ));
    }
    Ok(doc)
}

fn cmd_check(io: &mut Io, a: CheckArgs) -> i32 {
    let doc = match read_document(&a.file) {
        Ok(d) => d,
        Err(e) => return io.fail(e),
    };
    let verify = verify_plan(&doc.plan);
    let oracle = match cross_check_plan(&doc.plan) {
        Ok(r) => r.entries,
        Err(e) => return io.fail(e),
    };
    let mut document = Vec::new();
    if doc.request != doc.plan.request {
        document.push("request differs from the plan's request".to_string());
    }
    if doc.warnings != warnings_of(&doc.plan) {
        document.push("warnings differ from those derived from the plan".to_string());
    }
    let failing = doc
        .plan
        .checklist
        .iter()
        .find(|i| i.status == prior_forge::planners::ItemStatus::Failed)
        .map(|i| i.id.clone());
    match (doc.status, &doc.failed_item) {
        (PlanStatus::Accepted, None) if failing.is_none() => {}
        (PlanStatus::ChecklistFailed, Some(item)) if failing.as_ref() == Some(item) => {}
        _ => document.push("status does not match the checklist".to_string()),
    }
    let report = CheckReport {
        schema_version: SCHEMA_VERSION.to_string(),
        clean: verify.is_clean() && oracle.is_empty() && document.is_empty(),
        findings: verify.findings,
        oracle,
        document,
    };
    let body = match a.format {
        Format::Json => to_json(&report),
        Format::Text => render::check_text(&report),
    };
    if let Err(e) = io.emit(None, &body) {
        return io.fail(e);
    }
    if report.clean {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

fn cmd_calc(io: &mut Io, c: CalcCommand) -> i32 {
    let result = match c {
        CalcCommand::Intersect {
            genus,
            e,
            d1,
            d2,
            format,
        } => make_surface(genus, e).map(|s| {
            value(
                format,
                s.intersect(d1, d2),
                serde_json::json!(s.intersect(d1, d2)),
            )
        }),
        CalcCommand::Chi {
            genus,
            e,
            rank,
            c1,
            c2,
            format,
        } => make_surface(genus, e)
            .and_then(|s| euler_char(&s, ChernData::new(rank, c1, c2)))
            .map(|v| value(format, v, serde_json::json!(v))),
        CalcCommand::Canonical { genus, e, format } => make_surface(genus, e).map(|s| {
            let k = s.canonical();
            value(format, k, serde_json::json!(k))
        }),
        CalcCommand::H0upper {
            genus,
            e,
            d,
            format,
        } => make_surface(genus, e).map(|s| {
            let v = h0_upper(&s, d);
            match format {
                Format::Text => format!("{v}\n"),
                Format::Json => to_json(&serde_json::json!({
                    "value": v,
                    "effectivity": effectivity(&s, d),
                })),
            }
        }),
    };
    match result {
        Ok(body) => match io.emit(None, &body) {
            Ok(()) => EXIT_OK,
            Err(e) => io.fail(e),
        },
        Err(e) => io.fail(e),
    }
}

fn value(format: Format, text: impl std::fmt::Display, json: serde_json::Value) -> String {
    match format {
        Format::Text => format!("{text}\n"),
        Format::Json => to_json(&serde_json::json!({ "value": json })),
    }
}

fn cmd_suite(io: &mut Io, a: SuiteArgs) -> i32 {
    let d = SuiteGrid::default();
    let grid = SuiteGrid {
        g: a.genus.unwrap_or(d.g),
        e: a.e.unwrap_or(d.e),
        m: a.m.unwrap_or(d.m),
        b: a.b.unwrap_or(d.b),
        d: a.d.unwrap_or(d.d),
        t: a.t.unwrap_or(d.t),
        l: a.l.unwrap_or(d.l),
        z: a.z.unwrap_or(d.z),
    };
    let report = match closed_form_suite(&grid) {
        Ok(r) => r,
        Err(e) => return io.fail(e),
    };
    let body = match a.format {
        Format::Json => to_json(&report),
        Format::Text => report.to_text(),
    };
    if let Err(e) = io.emit(None, &body) {
        return io.fail(e);
    }
    if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}

fn cmd_cross_check(io: &mut Io, file: &Path, format: Format) -> i32 {
    let report = match read_document(file)
        .and_then(|d| cross_check_plan(&d.plan).map_err(|e| e.to_string()))
    {
        Ok(r) => r,
        Err(e) => return io.fail(e),
    };
    let body = match format {
        Format::Json => to_json(&report),
        Format::Text if report.is_clean() => "clean\n".to_string(),
        Format::Text => report
            .entries
            .iter()
            .map(|x| format!("{}: plan {} oracle {}\n", x.what, x.plan, x.oracle))
            .collect(),
    };
    if let Err(e) = io.emit(None, &body) {
        return io.fail(e);
    }
    if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_REJECTED
    }
}
