//! The identity registry: every checked identity bound to two evaluators (or
//! a WZ pair, or an exact computation) and a tolerance, plus the runner and
//! its report formats.

mod entries;
mod sums;

use std::fmt;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{to_decimal, to_short, PrecisionCtx};
use crate::symbolic::{builtin_pair, wz_verify};

pub use entries::registry_entries;

/// Schema tag carried by JSON reports.
pub const REPORT_SCHEMA: &str = "wzmahler-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    ExactSymbolic,
    Numeric,
    ConjecturalNumeric,
    FiniteFamily,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::ExactSymbolic => "exact-symbolic",
            Kind::Numeric => "numeric",
            Kind::ConjecturalNumeric => "conjectural-numeric",
            Kind::FiniteFamily => "finite-family",
        })
    }
}

/// One side of a numeric identity.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub value: Float,
    pub terms: usize,
    pub note: Option<String>,
}

impl Evaluated {
    pub fn new(value: Float, terms: usize) -> Self {
        Self {
            value,
            terms,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

pub type Evaluator = Arc<dyn Fn(&PrecisionCtx) -> Result<Evaluated> + Send + Sync>;

/// Outcome of an exact check: rendered left and right sides and whether they
/// are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactOutcome {
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    pub note: String,
}

pub type ExactCheck = Arc<dyn Fn() -> Result<ExactOutcome> + Send + Sync>;

#[derive(Clone)]
pub enum Check {
    /// Certificate check of a built-in WZ pair.
    Wz(String),
    /// Two evaluators compared at the record's tolerance.
    Numeric { lhs: Evaluator, rhs: Evaluator },
    /// An exact computation.
    Exact(ExactCheck),
}

impl fmt::Debug for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Wz(name) => write!(f, "Wz({name})"),
            Check::Numeric { .. } => f.write_str("Numeric"),
            Check::Exact(_) => f.write_str("Exact"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdentityRecord {
    pub id: String,
    pub description: String,
    pub kind: Kind,
    pub check: Check,
    /// Absolute tolerance as a decimal literal; `"0"` for exact checks.
    pub tol: String,
    /// Sample parameter values, e.g. `["x=1/4"]`.
    pub params: Vec<String>,
    /// Standing annotations (open questions, interpretations).
    pub notes: String,
    /// Reported but never counted against the exit code.
    pub documented_discrepancy: bool,
}

impl IdentityRecord {
    /// `true` if a FAIL or ERROR of this record fails the suite.
    pub fn affects_exit(&self) -> bool {
        self.kind != Kind::ConjecturalNumeric && !self.documented_discrepancy
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "CONJECTURAL-PASS")]
    ConjecturalPass,
    #[serde(rename = "CONJECTURAL-FAIL")]
    ConjecturalFail,
    #[serde(rename = "ERROR")]
    Error,
}

impl Status {
    pub fn is_pass(self) -> bool {
        matches!(self, Status::Pass | Status::ConjecturalPass)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ConjecturalPass => "CONJECTURAL-PASS",
            Status::ConjecturalFail => "CONJECTURAL-FAIL",
            Status::Error => "ERROR",
        })
    }
}

/// Result of checking one record. Numbers are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub status: Status,
    pub lhs_value: String,
    pub rhs_value: String,
    pub abs_diff: String,
    pub terms_used: u64,
    pub elapsed_ms: u64,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportSet {
    pub schema: String,
    pub reports: Vec<CheckReport>,
}

fn registry() -> &'static [IdentityRecord] {
    static REGISTRY: OnceLock<Vec<IdentityRecord>> = OnceLock::new();
    REGISTRY.get_or_init(registry_entries)
}

pub fn lookup(id: &str) -> Option<IdentityRecord> {
    registry().iter().find(|r| r.id == id).cloned()
}

/// Checks `id` at the record's own tolerance.
pub fn run_check(id: &str, ctx: &PrecisionCtx) -> Result<CheckReport> {
    run_check_with_tol(id, ctx, None)
}

/// Checks `id`, replacing the record's tolerance by `tol` if given.
pub fn run_check_with_tol(id: &str, ctx: &PrecisionCtx, tol: Option<&str>) -> Result<CheckReport> {
    let rec = registry()
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))?;
    Ok(run_record(rec, ctx, tol))
}

/// Runs every record whose id contains `filter` on a pool of `jobs` threads.
/// Returns the reports sorted by id and the suite exit code.
pub fn run_all(filter: Option<&str>, jobs: usize, ctx: &PrecisionCtx) -> (Vec<CheckReport>, i32) {
    run_all_with_tol(filter, jobs, ctx, None)
}

pub fn run_all_with_tol(
    filter: Option<&str>,
    jobs: usize,
    ctx: &PrecisionCtx,
    tol: Option<&str>,
) -> (Vec<CheckReport>, i32) {
    let selected: Vec<&IdentityRecord> = registry()
        .iter()
        .filter(|r| filter.map_or(true, |f| r.id.contains(f)))
        .collect();
    let run = || -> Vec<CheckReport> {
        selected
            .par_iter()
            .map(|r| run_record(r, ctx, tol))
            .collect()
    };
    let mut reports = match rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(run),
        Err(_) => selected.iter().map(|r| run_record(r, ctx, tol)).collect(),
    };
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    let code = exit_code(&reports);
    (reports, code)
}

/// 1 if a record that counts toward the suite failed or errored, else 0.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    let failed = reports.iter().any(|rep| {
        matches!(rep.status, Status::Fail | Status::Error)
            && lookup(&rep.id).map_or(true, |r| r.affects_exit())
    });
    i32::from(failed)
}

fn join_notes(parts: &[&str]) -> String {
    parts
        .iter()
        .filter(|s| !s.is_empty())
        .copied()
        .collect::<Vec<_>>()
        .join("; ")
}

fn error_report(rec: &IdentityRecord, err: &Error, start: Instant) -> CheckReport {
    CheckReport {
        id: rec.id.clone(),
        status: Status::Error,
        lhs_value: String::new(),
        rhs_value: String::new(),
        abs_diff: String::new(),
        terms_used: 0,
        elapsed_ms: start.elapsed().as_millis() as u64,
        notes: join_notes(&[&err.to_string(), &rec.notes]),
    }
}

/// Decimal digits worth printing for a value computed to `target`.
fn significant_bits(ctx: &PrecisionCtx) -> u32 {
    let target_bits = (-ctx.target_tol().clone().log2().to_f64()).floor().max(1.0) as u32;
    ctx.bits().min(target_bits)
}

fn run_record(rec: &IdentityRecord, ctx: &PrecisionCtx, tol_override: Option<&str>) -> CheckReport {
    let start = Instant::now();
    let tol_text = tol_override.unwrap_or(&rec.tol);
    let tol = match ctx.parse(tol_text) {
        Ok(t) if t >= 0 => t,
        Ok(_) => {
            return error_report(
                rec,
                &Error::InvalidContext(format!("negative tolerance {tol_text}")),
                start,
            )
        }
        Err(e) => return error_report(rec, &e, start),
    };
    let pass_status = |ok: bool| match (rec.kind == Kind::ConjecturalNumeric, ok) {
        (false, true) => Status::Pass,
        (false, false) => Status::Fail,
        (true, true) => Status::ConjecturalPass,
        (true, false) => Status::ConjecturalFail,
    };
    match &rec.check {
        Check::Wz(name) => {
            let rep = match builtin_pair(name).and_then(|p| wz_verify(&p)) {
                Ok(r) => r,
                Err(e) => return error_report(rec, &e, start),
            };
            let ok = rep.passed();
            let residual = rep
                .witness
                .as_ref()
                .map_or("0".to_string(), |w| w.to_string());
            let note = if ok {
                format!(
                    "certificate polynomial ≡ 0; {}/{} random rational points agree",
                    rep.random_points, rep.random_points
                )
            } else {
                format!(
                    "certificate numerator {residual}; random points agree: {}",
                    rep.random_agrees
                )
            };
            CheckReport {
                id: rec.id.clone(),
                status: pass_status(ok),
                lhs_value: residual,
                rhs_value: "0".into(),
                abs_diff: if ok { "0".into() } else { "1".into() },
                terms_used: 0,
                elapsed_ms: start.elapsed().as_millis() as u64,
                notes: join_notes(&[&note, &rec.notes]),
            }
        }
        Check::Exact(f) => match f() {
            Ok(out) => CheckReport {
                id: rec.id.clone(),
                status: pass_status(out.equal),
                lhs_value: out.lhs,
                rhs_value: out.rhs,
                abs_diff: if out.equal { "0".into() } else { "1".into() },
                terms_used: 0,
                elapsed_ms: start.elapsed().as_millis() as u64,
                notes: join_notes(&[&out.note, &rec.notes]),
            },
            Err(e) => error_report(rec, &e, start),
        },
        Check::Numeric { lhs, rhs } => {
            // Evaluate only as far as the comparison needs, never coarser than
            // the context itself.
            let mut work_tol = Float::with_val(ctx.prec(), &tol) >> 32u32;
            if work_tol < *ctx.target_tol() {
                work_tol = ctx.target_tol().clone();
            }
            let work = match ctx.clone().with_target_tol(&work_tol) {
                Ok(w) => w,
                Err(e) => return error_report(rec, &e, start),
            };
            let (l, r) = match lhs(&work).and_then(|l| rhs(&work).map(|r| (l, r))) {
                Ok(v) => v,
                Err(e) => return error_report(rec, &e, start),
            };
            let diff = Float::with_val(ctx.prec(), &l.value - &r.value).abs();
            let ok = diff <= tol;
            let bits = significant_bits(&work);
            let notes: Vec<&str> = [
                l.note.as_deref(),
                r.note.as_deref(),
                Some(rec.notes.as_str()),
            ]
            .into_iter()
            .flatten()
            .collect();
            CheckReport {
                id: rec.id.clone(),
                status: pass_status(ok),
                lhs_value: to_decimal(&l.value, bits),
                rhs_value: to_decimal(&r.value, bits),
                abs_diff: to_short(&diff),
                terms_used: (l.terms + r.terms) as u64,
                elapsed_ms: start.elapsed().as_millis() as u64,
                notes: join_notes(&notes),
            }
        }
    }
}

/// JSON report envelope.
pub fn reports_to_json(reports: &[CheckReport]) -> String {
    let set = ReportSet {
        schema: REPORT_SCHEMA.to_string(),
        reports: reports.to_vec(),
    };
    serde_json::to_string_pretty(&set).expect("reports serialize")
}

pub fn reports_from_json(text: &str) -> Result<Vec<CheckReport>> {
    let set: ReportSet = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    if set.schema != REPORT_SCHEMA {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported schema `{}`", set.schema),
        });
    }
    Ok(set.reports)
}

/// One line per report, notes indented beneath.
pub fn reports_to_text(reports: &[CheckReport]) -> String {
    let width = reports.iter().map(|r| r.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in reports {
        let diff = if r.abs_diff.is_empty() {
            "-"
        } else {
            &r.abs_diff
        };
        out.push_str(&format!(
            "{:<16} {:<width$}  |diff| = {:<14} terms = {:<7} {} ms\n",
            r.status.to_string(),
            r.id,
            diff,
            r.terms_used,
            r.elapsed_ms
        ));
        if !r.notes.is_empty() {
            out.push_str(&format!("{:16}   {}\n", "", r.notes));
        }
    }
    out
}

/// Summary counts by status, e.g. `"41 PASS, 1 CONJECTURAL-PASS"`.
pub fn summary(reports: &[CheckReport]) -> String {
    if reports.is_empty() {
        return "no matching identities".to_string();
    }
    let order = [
        Status::Pass,
        Status::Fail,
        Status::ConjecturalPass,
        Status::ConjecturalFail,
        Status::Error,
    ];
    order
        .iter()
        .filter_map(|s| {
            let n = reports.iter().filter(|r| r.status == *s).count();
            (n > 0).then(|| format!("{n} {s}"))
        })
        .collect::<Vec<_>>()
        .join(", ")
}
