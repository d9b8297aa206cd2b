//! The job-file front end: grammar round-trips, command dispatch, artifact
//! files, and the exit-code contract.

use curveres::cli::{parse_job, print_job, run_job, Command, JobSpec, RenderFormat};
use curveres::error::Error;

fn job(text: &str) -> JobSpec {
    parse_job(text).unwrap()
}

#[test]
fn jobs_round_trip_through_the_printer() {
    let j = job("field GF(2);\ninvert z;\nf = y^4 + z^5*x^3*y^2 + z^3*x^6 + x^5*y;\nresolve;");
    assert_eq!(j.field, "GF(2)");
    assert_eq!(j.invert, vec!["z".to_string()]);
    assert_eq!(j.command, Command::Resolve);
    assert_eq!(parse_job(&print_job(&j)).unwrap(), j);

    let j2 = job("field QQ; f = y^2 - x^3; format svg; output /tmp/foo; render;");
    assert_eq!(j2.format, RenderFormat::Svg);
    assert_eq!(j2.output.as_deref(), Some("/tmp/foo"));
    assert_eq!(parse_job(&print_job(&j2)).unwrap(), j2);
}

#[test]
fn empty_input_errors_at_line_one_column_one() {
    match parse_job("") {
        Err(Error::Parse { line: 1, col: 1, .. }) => {}
        other => panic!("expected a positioned parse error, got {other:?}"),
    }
}

#[test]
fn parse_errors_carry_positions() {
    match parse_job("field QQ;\nf = y^2 - x^3\nresolve;") {
        Err(Error::Parse { line, .. }) => assert!(line >= 2),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(
        parse_job("field QQ; bogus;"),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn cusp_resolve_job_succeeds_with_a_depth_one_tree() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("cusp").to_string_lossy().into_owned();
    let j = job(&format!("field QQ; f = y^2 - x^3; output {prefix}; resolve;"));
    let mut out = String::new();
    assert_eq!(run_job(&j, &mut out), 0);
    assert!(out.contains("invariant (2, 3)"));
    assert!(out.contains("weights (3, 2)"));
    assert!(out.contains("max depth: 0"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.tree.json")).unwrap())
            .unwrap();
    assert_eq!(json["root"]["status"], "blown-up");
    let dot = std::fs::read_to_string(format!("{prefix}.tree.dot")).unwrap();
    assert!(dot.starts_with("digraph"));
}

#[test]
fn verify_recrosses_the_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("v").to_string_lossy().into_owned();
    let j = job(&format!("field QQ; f = y^2 - x^4; output {prefix}; verify;"));
    let mut out = String::new();
    assert_eq!(run_job(&j, &mut out), 0);
    assert!(out.contains("verified"), "missing verification line: {out}");
}

#[test]
fn quasiregular_input_gets_a_verdict_not_a_loop() {
    let j = job("field QQ; f = y^2; invariant;");
    let mut out = String::new();
    assert_eq!(run_job(&j, &mut out), 0);
    assert!(out.contains("quasi-regular"));

    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("q").to_string_lossy().into_owned();
    let j2 = job(&format!("field QQ; f = y^2; output {prefix}; resolve;"));
    let mut out2 = String::new();
    assert_eq!(run_job(&j2, &mut out2), 0);
    assert!(out2.contains("regular"));
}

#[test]
fn two_parameter_polyhedron_renders_with_the_known_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("p").to_string_lossy().into_owned();
    let j = job(&format!(
        "field GF(2)(t);\nf = y^2 + x1^3*(x1^2 + t)^7 + t*x2^6;\noutput {prefix};\nformat svg;\nrender;"
    ));
    let mut out = String::new();
    assert_eq!(run_job(&j, &mut out), 0, "{out}");
    let svg = std::fs::read_to_string(format!("{prefix}.polyhedron.svg")).unwrap();
    assert!(svg.contains("<svg"));
    assert!(svg.contains("3/2") && svg.contains("(0, 3)"), "{svg}");
}

#[test]
fn center_and_blowup_commands_report_the_chart() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("b").to_string_lossy().into_owned();
    let j = job(&format!("field QQ; f = y^2 - x^3; output {prefix}; blowup;"));
    let mut out = String::new();
    assert_eq!(run_job(&j, &mut out), 0);
    assert!(out.contains("weights: (3, 2), l = 6"));
    assert!(out.contains("mu_2") && out.contains("mu_3"));
    let chart: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{prefix}.chart.json")).unwrap())
            .unwrap();
    assert!(chart["variables"].is_array());
}

#[test]
fn tower_cap_violations_exit_with_the_certified_failure_code() {
    // Absorbing a second transcendental exceeds the tower shape cap.
    let j = job("field GF(2)(t); invert w; f = w*y^2 + x^3; resolve;");
    let mut out = String::new();
    assert_eq!(run_job(&j, &mut out), 2, "{out}");
}

#[test]
fn unknown_identifiers_are_rejected() {
    let j = job("field QQ; invert q; f = y^2 - x^3; resolve;");
    let mut out = String::new();
    assert_eq!(run_job(&j, &mut out), 1, "{out}");
    assert!(out.contains("does not occur"));
}
