use std::collections::HashSet;

use proptest::prelude::*;
use rug::Float;
use wzmahler_core::numkernel::PrecisionCtx;
use wzmahler_core::registry::{
    exit_code, lookup, registry_entries, reports_from_json, reports_to_json, run_all, run_check,
    run_check_with_tol, CheckReport, Kind, Status,
};
use wzmahler_core::Error;

fn ctx() -> PrecisionCtx {
    PrecisionCtx::default()
}

/// Reports without the timing field, which is the only nondeterministic one.
fn untimed(reports: &[CheckReport]) -> Vec<CheckReport> {
    reports
        .iter()
        .cloned()
        .map(|r| CheckReport { elapsed_ms: 0, ..r })
        .collect()
}

#[test]
fn ids_are_unique_and_numeric_tolerances_positive() {
    let entries = registry_entries();
    let ids: HashSet<&str> = entries.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids.len(), entries.len());
    for r in &entries {
        let tol: f64 = r.tol.parse().unwrap();
        match r.kind {
            Kind::ExactSymbolic => assert_eq!(tol, 0.0, "{}", r.id),
            _ => assert!(tol > 0.0, "{}", r.id),
        }
    }
}

#[test]
fn required_entries_are_present() {
    let mut required: Vec<String> = [
        "wz-pair-1",
        "wz-pair-3",
        "wz-pair-divergent",
        "log2-f1",
        "log2-f2",
        "log2-f3",
        "zeta2-laurent",
        "zeta3-f1",
        "zeta3-f2",
        "zeta3-f3",
        "lalin-m1-m16",
        "lalin-m2-m8",
        "lalin-m1-m16-m5",
        "lalin-m2-m8-m3r2",
        "dilog-equiv-1",
        "dilog-equiv-2",
        "dilog-m5",
        "dilog-m8",
        "dilog-m16",
        "dilog-m3r2",
        "bertin-exotic",
        "bertin-n-form",
        "bertin-series",
        "strange-4.1",
        "torsion-orders",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for x in ["1/4", "1/3", "1/2", "3/2"] {
        required.push(format!("thm-2.2-gen1@x={x}"));
        required.push(format!("thm-2.2-gen3@x={x}"));
    }
    for m in 1..=8 {
        required.push(format!("finite-4f3@m={m}"));
    }
    for q in ["1/10", "1/5"] {
        for f in ["m", "n", "n2"] {
            required.push(format!("thm-3.1-{f}@q={q}"));
        }
    }
    for q in ["1/10", "1/4"] {
        required.push(format!("rs-param@q={q}"));
    }
    for id in &required {
        assert!(lookup(id).is_some(), "missing {id}");
    }
    assert!(registry_entries()
        .iter()
        .any(|r| r.id.starts_with("log4r-identity@")));
}

#[test]
fn lookups() {
    let rec = lookup("log2-f3").unwrap();
    assert!(rec.description.starts_with("8log2 = 11/2 + Σ"));
    assert_eq!(rec.kind, Kind::Numeric);
    assert_eq!(lookup("zeta3-f2").unwrap().kind, Kind::ConjecturalNumeric);
    assert!(lookup("nonexistent").is_none());
    assert!(lookup("bertin-series").unwrap().documented_discrepancy);
    assert!(!lookup("bertin-series").unwrap().affects_exit());
    assert_eq!(
        lookup("finite-4f3@m=3").unwrap().params,
        vec!["m=3".to_string()]
    );
}

#[test]
fn log2_f3_sides() {
    let rep = run_check("log2-f3", &ctx()).unwrap();
    assert_eq!(rep.status, Status::Pass);
    let c = ctx();
    let lhs = c.parse(&rep.lhs_value).unwrap();
    assert!((lhs - c.ln2() * 8u32).abs().to_f64() < 1e-40);
}

#[test]
fn wz_pair_one_passes_with_certificate_note() {
    let rep = run_check("wz-pair-1", &ctx()).unwrap();
    assert_eq!(rep.status, Status::Pass);
    assert!(rep.notes.contains("certificate polynomial ≡ 0"));
    assert_eq!(rep.abs_diff, "0");
}

#[test]
fn lalin_m1_m16_to_forty_digits() {
    let rep = run_check("lalin-m1-m16", &ctx()).unwrap();
    assert_eq!(rep.status, Status::Pass);
    let d: f64 = rep.abs_diff.parse().unwrap();
    assert!(d < 1e-40);
}

#[test]
fn unknown_id_is_an_error() {
    assert_eq!(
        run_check("unknown", &ctx()).unwrap_err(),
        Error::UnknownIdentity("unknown".into())
    );
}

#[test]
fn zeta3_filter() {
    let (reports, code) = run_all(Some("zeta3"), 2, &ctx());
    let ids: Vec<&str> = reports.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["zeta3-f1", "zeta3-f2", "zeta3-f3"]);
    assert_eq!(reports[1].status, Status::ConjecturalPass);
    assert_eq!(code, 0);
}

#[test]
fn empty_filter_result() {
    let (reports, code) = run_all(Some("no-such-identity"), 4, &ctx());
    assert!(reports.is_empty());
    assert_eq!(code, 0);
}

#[test]
fn full_run_is_green_and_job_count_invariant() {
    let c = ctx();
    let (one, code1) = run_all(None, 1, &c);
    let (eight, code8) = run_all(None, 8, &c);
    assert_eq!(code1, 0, "{one:#?}");
    assert_eq!(code8, 0);
    assert_eq!(one.len(), registry_entries().len());
    assert_eq!(untimed(&one), untimed(&eight));
    for r in &one {
        assert!(r.status.is_pass(), "{r:#?}");
        let rec = lookup(&r.id).unwrap();
        let tol = c.parse(&rec.tol).unwrap();
        let diff = c.parse(&r.abs_diff).unwrap();
        assert_eq!(diff <= tol, r.status.is_pass(), "{}", r.id);
    }
}

#[test]
fn raising_precision_keeps_passes() {
    let low = PrecisionCtx::new(192).unwrap();
    let high = PrecisionCtx::new(320).unwrap();
    let (lo, _) = run_all(None, 4, &low);
    let (hi, code) = run_all(None, 4, &high);
    assert_eq!(code, 0);
    for (a, b) in lo.iter().zip(&hi) {
        assert_eq!(a.id, b.id);
        if a.status == Status::Pass {
            assert_eq!(b.status, Status::Pass, "{}", a.id);
        }
    }
}

#[test]
fn tolerance_override_can_fail_an_entry() {
    let rep =
        run_check_with_tol("log2-f2", &PrecisionCtx::new(128).unwrap(), Some("1e-300")).unwrap();
    assert_eq!(rep.status, Status::Fail);
    assert_eq!(exit_code(&[rep]), 1);
}

#[test]
fn conjectural_and_discrepancy_failures_keep_exit_zero() {
    let c = PrecisionCtx::new(128).unwrap();
    let conj = run_check_with_tol("zeta3-f2", &c, Some("1e-300")).unwrap();
    assert_eq!(conj.status, Status::ConjecturalFail);
    let flagged = run_check_with_tol("bertin-series", &c, Some("1e-300")).unwrap();
    assert_eq!(flagged.status, Status::Fail);
    assert_eq!(exit_code(&[conj, flagged]), 0);
}

#[test]
fn bertin_series_documents_the_printed_base() {
    let rep = run_check("bertin-series", &ctx()).unwrap();
    assert_eq!(rep.status, Status::Pass);
    assert!(rep.notes.contains("printed base 27/32"));
    assert!(rep.notes.contains("diverges"));
}

#[test]
fn zeta2_records_the_interpretation_check() {
    let rep = run_check("zeta2-laurent", &ctx()).unwrap();
    assert_eq!(rep.status, Status::Pass);
    assert!(rep.notes.contains("interpretation check at 64 bits"));
}

#[test]
fn values_are_deterministic() {
    let a = run_check("thm-3.1-n2-series@q=1/10", &ctx()).unwrap();
    let b = run_check("thm-3.1-n2-series@q=1/10", &ctx()).unwrap();
    assert_eq!((a.lhs_value, a.rhs_value), (b.lhs_value, b.rhs_value));
}

#[test]
fn json_schema_is_checked() {
    let bad = r#"{"schema":"other/9","reports":[]}"#;
    assert!(matches!(reports_from_json(bad), Err(Error::Parse { .. })));
    let text = reports_to_json(&[]);
    assert!(text.contains("wzmahler-report/1"));
    assert!(reports_from_json(&text).unwrap().is_empty());
}

fn status_strategy() -> impl Strategy<Value = Status> {
    prop_oneof![
        Just(Status::Pass),
        Just(Status::Fail),
        Just(Status::ConjecturalPass),
        Just(Status::ConjecturalFail),
        Just(Status::Error),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn report_json_round_trip(
        id in "[a-z0-9.@=/-]{1,24}",
        status in status_strategy(),
        lhs in -1e300f64..1e300,
        rhs in -1e300f64..1e300,
        terms in any::<u64>(),
        ms in any::<u64>(),
        notes in "\\PC{0,40}",
    ) {
        let f = |x: f64| Float::with_val(256, x).to_string_radix(10, None);
        let rep = CheckReport {
            id,
            status,
            lhs_value: f(lhs),
            rhs_value: f(rhs),
            abs_diff: f((lhs - rhs).abs()),
            terms_used: terms,
            elapsed_ms: ms,
            notes,
        };
        let text = reports_to_json(std::slice::from_ref(&rep));
        prop_assert_eq!(reports_from_json(&text).unwrap(), vec![rep]);
    }
}
