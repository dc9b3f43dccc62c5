use std::path::PathBuf;
use std::process::Command;

use parabolic_cli::cli::run;
use parabolic_cli::report::{ReportDocument, Verdict};
use parabolic_cli::spec_file::parse_problem;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn parabolic(args: &[&str]) -> parabolic_cli::cli::RunOutput {
    run(std::iter::once("parabolic").chain(args.iter().copied()))
}

const BAD_ORDER: &str = r#"[problem]
n = 2
unknowns = 1
b = 1
kappa = [1]
ell = [-2]

[[operators.A]]
row = 1
col = 1
terms = [
  { alpha = [0, 0], beta = 1, coeff = "1" },
  { alpha = [2, 0], beta = 0, coeff = "1" },
  { alpha = [2, 1], beta = 0, coeff = "1" },
]

[[operators.B]]
row = 1
col = 1
terms = [{ alpha = [0, 0], beta = 0, coeff = "1" }]

[geometry]
domain = "unit_ball"
"#;

#[test]
fn minimal_scalar_heat_parses() {
    let text = std::fs::read_to_string(fixture("scalar_heat.toml")).unwrap();
    let spec = parse_problem(&text).unwrap();
    assert_eq!(spec.problem.unknowns(), 1);
    assert_eq!(spec.problem.b(), 1);
    assert_eq!(spec.problem.boundary_rows(), 1);
    assert_eq!(spec.problem.derived_orders().m, 1);
    assert!(spec.claims.is_empty());
}

#[test]
fn over_order_term_is_named_with_position() {
    let err = parse_problem(BAD_ORDER).unwrap_err();
    assert!(err.message.contains("A[1][1] term #3"), "{err}");
    assert_eq!(err.line, 14, "{err}");
    assert!(err.column > 1, "{err}");
}

#[test]
fn empty_file_is_missing_a_section() {
    let err = parse_problem("").unwrap_err();
    assert!(err.message.contains("missing section [problem]"), "{err}");
}

#[test]
fn syntax_errors_are_anchored() {
    let err = parse_problem("[problem]\nn = = 2\n").unwrap_err();
    assert_eq!(err.line, 2, "{err}");
}

#[test]
fn unknown_keys_are_rejected() {
    let text = std::fs::read_to_string(fixture("scalar_heat.toml")).unwrap().replace("tau = 1.0", "tau = 1.0\nmu = 3");
    let err = parse_problem(&text).unwrap_err();
    assert!(err.message.contains("mu"), "{err}");
    assert_eq!(err.line, 8, "{err}");
}

#[test]
fn check_parabolic_exit_codes() {
    assert_eq!(parabolic(&["check-parabolic", &fixture("heat_pair_n2.toml")]).exit_code, 0);
    assert_eq!(parabolic(&["check-parabolic", &fixture("quartic.toml")]).exit_code, 0);
    let back = parabolic(&["check-parabolic", &fixture("backward_heat.toml")]);
    assert_eq!(back.exit_code, 1);
    let doc = back.report.unwrap();
    assert_eq!(doc.sections[0].verdict, Verdict::Fail);
    assert_eq!(doc.sections[2].verdict, Verdict::Skipped);
}

#[test]
fn check_regularity_n2_reports_threshold_violation() {
    let out = parabolic(&["check-regularity", &fixture("heat_pair_n2.toml")]);
    assert_eq!(out.exit_code, 1);
    assert!(out.stdout.contains("σ₂ > σ₀ violated"), "{}", out.stdout);
    assert!(out.report.unwrap().summary.message.contains("σ₂ > σ₀ violated"));
}

#[test]
fn check_regularity_n4_is_classical() {
    let out = parabolic(&["check-regularity", &fixture("heat_pair_n4.toml")]);
    assert_eq!(out.exit_code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("guaranteed-classical"));
}

#[test]
fn missing_claim_is_an_input_error() {
    let out = parabolic(&["check-regularity", &fixture("scalar_heat.toml")]);
    assert_eq!(out.exit_code, 3);
    assert!(out.stderr.contains("missing regularity claims"), "{}", out.stderr);
}

#[test]
fn phi_check_exit_codes() {
    let low = parabolic(&["phi-check", "--phi", "(1 + ln(r))^0.4"]);
    assert_eq!(low.exit_code, 1);
    assert!(low.stdout.contains("Dini integral diverges"));
    assert_eq!(parabolic(&["phi-check", "--phi", "0.6", "--theta-form"]).exit_code, 0);
    assert_eq!(parabolic(&["phi-check", "--phi", "r"]).exit_code, 1);
    assert_eq!(parabolic(&["phi-check", "--phi", "ln("]).exit_code, 3);
}

#[test]
fn norm_of_truncated_grid_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.grid");
    let mut text = String::from("dims 1\nspacing 0.5 0.5\nextents 4 4\ndata\n");
    for _ in 0..16 {
        text.push_str("1\n");
    }
    std::fs::write(&path, text).unwrap();
    let out = parabolic(&["norm", path.to_str().unwrap(), "--s", "0", "--gamma", "1"]);
    assert_eq!(out.exit_code, 2, "{}", out.stdout);
}

#[test]
fn norm_on_gaussian_fixture() {
    let out = parabolic(&["norm", &fixture("gaussian.grid"), "--s", "1", "--gamma", "0.5", "--machine"]);
    assert_eq!(out.exit_code, 0);
    let doc = ReportDocument::from_json(&out.stdout).unwrap();
    assert_eq!(doc.summary.verdict, Verdict::Pass);
}

#[test]
fn overrides_reach_the_settings() {
    let out = parabolic(&[
        "check-parabolic",
        &fixture("scalar_heat.toml"),
        "--samples",
        "7",
        "--tolerance",
        "rank_tol=1e-6",
        "--delta1",
        "0.25",
        "--machine",
    ]);
    assert_eq!(out.exit_code, 0);
    let doc = ReportDocument::from_json(&out.stdout).unwrap();
    let get = |k: &str| doc.settings.iter().find(|e| e.key == k).unwrap().value.clone();
    assert_eq!(get("xi_directions"), parabolic_cli::report::Value::Int(7));
    assert_eq!(get("rank_tol"), parabolic_cli::report::Value::Real(1e-6));
    assert_eq!(get("delta1"), parabolic_cli::report::Value::Real(0.25));

    let bad = parabolic(&["check-parabolic", &fixture("scalar_heat.toml"), "--tolerance", "nope=1"]);
    assert_eq!(bad.exit_code, 3);
    let bad = parabolic(&["check-parabolic", &fixture("scalar_heat.toml"), "--delta1", "5"]);
    assert_eq!(bad.exit_code, 3);
}

#[test]
fn bad_arguments_exit_with_input_status() {
    assert_eq!(parabolic(&["frobnicate"]).exit_code, 3);
    assert_eq!(parabolic(&["norm", "x.grid"]).exit_code, 3);
    assert_eq!(parabolic(&["check-parabolic", "/nonexistent/spec.toml"]).exit_code, 3);
    assert_eq!(parabolic(&["--help"]).exit_code, 0);
}

#[test]
fn report_file_matches_machine_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = parabolic(&[
        "check-parabolic",
        &fixture("quartic.toml"),
        "--machine",
        "--report",
        path.to_str().unwrap(),
    ]);
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, out.stdout);
    let doc = ReportDocument::from_json(&written).unwrap();
    assert_eq!(doc.to_json(), written);
}

#[test]
fn every_numeric_check_carries_a_tolerance_or_exact_criterion() {
    for args in [
        vec!["check-parabolic".to_string(), fixture("heat_pair_n2.toml")],
        vec!["phi-check".to_string(), "--phi".to_string(), "1 + ln(r)".to_string()],
    ] {
        let out = run(std::iter::once("parabolic".to_string()).chain(args));
        for section in &out.report.unwrap().sections {
            for check in &section.checks {
                assert!(
                    check.tolerance.is_some() || check.criterion.contains("exact") || check.criterion.contains("closed form"),
                    "{}: {}",
                    section.name,
                    check.name
                );
            }
        }
    }
}

#[test]
fn binary_sets_process_status() {
    let status = Command::new(env!("CARGO_BIN_EXE_parabolic"))
        .args(["phi-check", "--phi", "0.4", "--theta-form"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&status.stdout).contains("Dini integral diverges"));
}
