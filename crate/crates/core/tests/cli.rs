use std::process::{Command, Output};

use serde_json::Value;
use symtensor::cli::exit_code;
use symtensor::error::Error;
use symtensor::catalog::ideal_for;
use symtensor::error::LimitDiagnostics;
use symtensor::{MonomialOrder, Polynomial, VarietySpec};

fn symtensor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symtensor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn series_json_schema() {
    let o = symtensor(&["series", "Q(3)", "--max-degree", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["spec"], "Q(3)");
    let coeffs: Vec<u64> = v["coefficients"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect();
    assert_eq!(coeffs.len(), 5);
    assert_eq!(coeffs[0], 1);
    assert_eq!(v["krull_dim"], 6);
    assert_eq!(v["rational_form"]["numerator"], serde_json::json!([1, 4, 4, 1]));
    assert_eq!(v["rational_form"]["denominator_weights"], serde_json::json!([1, 1, 1, 1, 1, 1]));
    assert!(v["provenance"].as_str().unwrap().len() > 10);
    assert!(v["flags"].as_array().unwrap().iter().any(|f| f == "groebner"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = ["series", "Klein(2T)", "--max-degree", "30", "--format", "json"];
    assert_eq!(symtensor(&args).stdout, symtensor(&args).stdout);
}

#[test]
fn every_format_renders_series() {
    for format in ["json", "csv", "markdown", "text"] {
        let o = symtensor(&["series", "Pn(2)", "--max-degree", "3", "--format", format]);
        assert_eq!(o.status.code(), Some(0), "{format}");
        assert!(stdout(&o).contains("64"), "{format}: {}", stdout(&o));
    }
}

#[test]
fn table_lists_rows_in_argument_order() {
    let o = symtensor(&["table", "Pn(2)", "Ab(1)", "2Q(3)", "--max-degree", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(rows, ["Pn(2)", "Ab(1)", "2Q(3)"]);
    assert!(text.lines().nth(1).unwrap().starts_with("Pn(2),1,8,27,64,125"));
}

#[test]
fn ideal_dump_round_trips_through_the_parser() {
    for text in ["Gr(1,2)", "Q(2)"] {
        let o = symtensor(&["ideal-dump", text]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        let ideal = ideal_for(&text.parse().unwrap()).unwrap();
        let ctx = ideal.context().clone();
        let mut parsed: Vec<Polynomial> = out
            .lines()
            .map(|l| Polynomial::parse(&ctx, MonomialOrder::DegRevLex, l).unwrap_or_else(|e| panic!("{l}: {e}")))
            .collect();
        let mut want = ideal.generators().to_vec();
        let key = |p: &Polynomial| p.to_string();
        parsed.sort_by_key(key);
        want.sort_by_key(key);
        assert_eq!(parsed, want, "{text}");
    }
    assert!(stdout(&symtensor(&["ideal-dump", "Gr(1,2)"])).lines().any(|l| l == "u11*u22 - u12*u21"));
}

#[test]
fn spec_grammar_round_trips() {
    for text in ["Prod(Q(2),Ab(1))", "ParHitchin(g=2,r=2,s=3,mode=symmetric)", "Klein(BD,4)"] {
        let o = symtensor(&["series", text, "--max-degree", "2", "--format", "json"]);
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        let spec: VarietySpec = v["spec"].as_str().unwrap().parse().unwrap();
        assert_eq!(spec, text.parse::<VarietySpec>().unwrap());
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(symtensor(&["series", "Pn(x)"]).status.code(), Some(2));
    assert_eq!(symtensor(&["series", "Hitchin(g=2,r=2,d=2)"]).status.code(), Some(2));
    assert_eq!(symtensor(&["ideal-dump", "2Q(3)"]).status.code(), Some(2));
    assert_eq!(symtensor(&["table"]).status.code(), Some(2));
    assert_eq!(symtensor(&["series", "Q(1)", "--timeout", "-1"]).status.code(), Some(2));
    assert_eq!(symtensor(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn caps_need_force() {
    assert_eq!(symtensor(&["series", "Q(5)", "--max-degree", "2"]).status.code(), Some(2));
}

#[test]
fn limits_exit_3() {
    let o = symtensor(&["series", "Q(3)", "--gb-max-degree", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn verify_passes_and_reports_each_check() {
    let o = symtensor(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    for id in ["1", "2", "3", "3s", "4", "5", "6", "7", "8", "9"] {
        assert!(text.contains(&format!("[PASS] {id} ")), "check {id} missing:\n{text}");
    }
}

#[test]
fn verify_with_tight_limits_exits_3() {
    let o = symtensor(&["verify", "--gb-max-degree", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["status"] == "skipped-by-limit"));
}

#[test]
fn error_kinds_map_to_exit_codes() {
    assert_eq!(exit_code(&Error::Parse("x".into())), 2);
    assert_eq!(exit_code(&Error::LimitExceeded(LimitDiagnostics {
        pairs_processed: 0,
        max_degree_reached: 0,
        basis_size: 0,
        reason: "x".into(),
    })), 3);
    assert_eq!(exit_code(&Error::Integrity("x".into())), 4);
}
