use std::process::{Command, Output};

use serde_json::{json, Value};

const P1_Z2: &str = include_str!("../../core/fixtures/p1_z2.json");

fn cdr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdr")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn assert_exit(o: &Output, code: i32) {
    assert_eq!(o.status.code(), Some(code), "stdout:\n{}\nstderr:\n{}", stdout(o), stderr(o));
}

/// Runs `cdr <cmd> --input <file>` on a modified copy of the P1/Z2 fixture.
fn with_input(cmd: &str, edit: impl FnOnce(&mut Value), extra: &[&str]) -> Output {
    let mut v: Value = serde_json::from_str(P1_Z2).unwrap();
    edit(&mut v);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("input.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let mut args = vec![cmd, "--input", p];
    args.extend_from_slice(extra);
    cdr(&args)
}

#[test]
fn ope_check_untwisted() {
    let o = cdr(&["ope-check", "--n", "1", "--max-weight", "3"]);
    assert_exit(&o, 0);
    let out = stdout(&o);
    assert!(out.contains("all brackets verified"), "{out}");
    assert!(out.contains("{Q_m, G_n}"), "{out}");
}

#[test]
fn ope_check_twisted_json() {
    let o = cdr(&["ope-check", "--twist", "1/2", "--format", "json"]);
    assert_exit(&o, 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["ok"], json!(true));
    assert_eq!(v["twist"], json!("(1)/2"));
    assert_eq!(v["relations"].as_array().unwrap().len(), 11);
}

#[test]
fn character_twisted_matches_product() {
    let o = cdr(&["character", "--n", "1", "--twist", "1/2", "--qmax", "5/2"]);
    assert_exit(&o, 0);
    assert!(stdout(&o).contains("matches product formula: yes"));
    let o = cdr(&["character", "--n", "1", "--twist", "1/2", "--qmax", "5/2", "--format", "json"]);
    assert_exit(&o, 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matches_product"], json!(true));
    assert_eq!(v["iota"], json!("1/2"));
    assert_eq!(v["character"]["terms"][0], json!({"q": "0", "y": "1/2", "coeff": "1"}));
}

#[test]
fn character_untwisted_spot_value() {
    let o = cdr(&["character", "--qmax", "1", "--format", "json"]);
    assert_exit(&o, 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let q1: Vec<(String, String)> = v["character"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|t| t["q"] == "1")
        .map(|t| (t["y"].as_str().unwrap().to_string(), t["coeff"].as_str().unwrap().to_string()))
        .collect();
    let want = [("-1", "1"), ("0", "3"), ("1", "3"), ("2", "1")].map(|(a, b)| (a.to_string(), b.to_string()));
    assert_eq!(q1, want);
}

#[test]
fn brst_reports_weight_zero_cohomology() {
    let o = cdr(&["brst", "--n", "2", "--twist", "0,1/2", "--max-weight", "3/2"]);
    assert_exit(&o, 0);
    let out = stdout(&o);
    assert!(out.contains("d^2 = 0: yes"), "{out}");
    assert!(out.contains("{G_0, d} = -L_0 on every block: yes"), "{out}");
    assert!(out.contains("total cohomology: 2 (2^1 = 2)"), "{out}");
    assert!(out.contains("cohomology concentrated at weight 0: yes"), "{out}");
}

#[test]
fn brst_with_b0_json() {
    let o = cdr(&["brst", "--n", "1", "--max-weight", "1", "--b0-cap", "1", "--format", "json"]);
    assert_exit(&o, 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d_squared_zero"], json!(true));
    assert_eq!(v["homotopy_sign"], json!(-1));
    assert!(v.get("weight_zero").is_none());
}

#[test]
fn cr_bundled() {
    let o = cdr(&["cr", "--input", "p1_z2.json"]);
    assert_exit(&o, 0);
    assert!(stdout(&o).contains("Chen-Ruan Poincaré polynomial: 1 + 2*t + t^2"));
    let o = cdr(&["cr", "--input", "p1_s3", "--format", "json"]);
    assert_exit(&o, 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["sectors"].as_array().unwrap().len(), 5);
}

#[test]
fn genus_paths_agree_and_note_t_dependence() {
    let o = cdr(&["genus", "--input", "p1_z2.json", "--qmax", "2"]);
    assert_exit(&o, 0);
    let out = stdout(&o);
    assert!(out.contains("paths agree: yes"), "{out}");
    assert!(out.contains("  y^(-1/2) + 2 - y^(1/2) + "), "{out}");
    assert!(out.contains("note: 8 localization coefficients depend on the torus parameter t"), "{out}");
    assert!(out.contains("L(h=0) on P1 at q^1 y^0: t^-1 + 1 + t"), "{out}");
}

#[test]
fn genus_from_file_path() {
    let o = with_input("genus", |_| {}, &["--qmax", "1", "--format", "json"]);
    assert_exit(&o, 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["paths_agree"], json!(true));
    assert_eq!(v["ell_orb"], v["ell_orb_via_traces"]);
}

#[test]
fn genus_strict_rejects_t_dependence() {
    let o = cdr(&["genus", "--input", "p1_z2.json", "--qmax", "1", "--strict"]);
    assert_exit(&o, 1);
    assert!(stderr(&o).contains("depends on t"), "{}", stderr(&o));
}

#[test]
fn genus_q0_is_strict() {
    let o = cdr(&["genus", "--input", "p1_z2.json", "--qmax", "0", "--strict"]);
    assert_exit(&o, 0);
    assert!(stdout(&o).contains("  y^(-1/2) + 2 - y^(1/2)\n"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["genus", "--input", "p1_s3", "--qmax", "1", "--format", "json"][..],
        &["selftest", "--seed", "7", "--samples", "2"][..],
        &["cr", "--input", "p1_s3"][..],
    ] {
        let a = cdr(args);
        let b = cdr(&[args, &["--jobs", "1"]].concat());
        assert_exit(&a, 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn selftest_passes() {
    let o = cdr(&["selftest", "--seed", "3"]);
    assert_exit(&o, 0);
    let out = stdout(&o);
    assert!(out.contains("selftest: 10 of 10 checks pass"), "{out}");
    assert!(out.contains("info  8 localization coefficients on P1/Z2 depend on t"), "{out}");
}

#[test]
fn empty_class_is_a_warning() {
    let o = with_input("cr", |v| v["classes"][1]["components"] = json!([]), &[]);
    assert_exit(&o, 0);
    let out = stdout(&o);
    assert!(out.contains("warning:"), "{out}");
    assert!(out.contains("Chen-Ruan Poincaré polynomial: 1 + t^2"), "{out}");
}

// input errors: exit status 2

#[test]
fn unknown_subcommand_and_flag() {
    assert_exit(&cdr(&["frobnicate"]), 2);
    assert_exit(&cdr(&["character", "--bogus"]), 2);
    assert_exit(&cdr(&["character", "--format", "xml"]), 2);
    assert_exit(&cdr(&[]), 2);
}

#[test]
fn bad_twist() {
    let o = cdr(&["character", "--twist", "3/2"]);
    assert_exit(&o, 2);
    assert!(stderr(&o).contains("--twist"), "{}", stderr(&o));
    assert_exit(&cdr(&["character", "--twist", "a/2"]), 2);
    assert_exit(&cdr(&["character", "--twist", "1/0"]), 2);
}

#[test]
fn twist_length_mismatch() {
    let o = cdr(&["brst", "--n", "2", "--twist", "1/2"]);
    assert_exit(&o, 2);
    assert!(stderr(&o).contains("--twist has 1 exponents but --n is 2"));
}

#[test]
fn bad_rationals() {
    assert_exit(&cdr(&["character", "--qmax", "x"]), 2);
    assert_exit(&cdr(&["character", "--qmax", "1/0"]), 2);
    let o = cdr(&["ope-check", "--max-weight=-1"]);
    assert_exit(&o, 2);
    assert!(stderr(&o).contains("must be nonnegative"));
    assert_exit(&cdr(&["genus", "--input", "p1_z2", "--qmax", "1/"]), 2);
}

#[test]
fn zero_jobs() {
    assert_exit(&cdr(&["cr", "--input", "p1_z2", "--jobs", "0"]), 2);
}

#[test]
fn missing_input() {
    let o = cdr(&["cr", "--input", "/nonexistent/nothing.json"]);
    assert_exit(&o, 2);
    assert!(stderr(&o).contains("no such file or bundled input"));
}

#[test]
fn invalid_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let o = cdr(&["cr", "--input", path.to_str().unwrap()]);
    assert_exit(&o, 2);
    assert!(stderr(&o).contains("invalid JSON"));
}

#[test]
fn non_group_table() {
    let o = with_input("cr", |v| v["group"]["table"] = json!([[0, 1], [0, 1]]), &[]);
    assert_exit(&o, 2);
    assert!(stderr(&o).contains("group"), "{}", stderr(&o));
}

#[test]
fn exponent_out_of_range() {
    let o = with_input("genus", |v| v["classes"][1]["components"][0]["exponents"] = json!([2]), &[]);
    assert_exit(&o, 2);
    assert!(stderr(&o).contains("classes[1].components[0].exponents[0]"), "{}", stderr(&o));
}

#[test]
fn missing_localization() {
    let o = with_input(
        "genus",
        |v| {
            v["classes"][0]["components"][0]["localization"].as_object_mut().unwrap().remove("1");
        },
        &[],
    );
    assert_exit(&o, 2);
    assert!(stderr(&o).contains("missing localization data"), "{}", stderr(&o));
}

#[test]
fn missing_field() {
    let o = with_input("cr", |v| drop(v.as_object_mut().unwrap().remove("dim")), &[]);
    assert_exit(&o, 2);
    assert!(stderr(&o).contains("$.dim: missing field"), "{}", stderr(&o));
}

// computation errors: exit status 1

#[test]
fn non_integral_invariants() {
    let o = with_input("cr", |v| v["classes"][1]["components"][0]["cohomology"]["characters"]["1"] = json!([0]), &[]);
    assert_exit(&o, 1);
    assert!(stderr(&o).contains("not a nonnegative integer"), "{}", stderr(&o));
}

#[test]
fn localization_without_enough_points() {
    let o = with_input(
        "genus",
        |v| {
            v["classes"][0]["components"][0]["localization"]["0"].as_array_mut().unwrap().pop();
        },
        &["--qmax", "0"],
    );
    assert_exit(&o, 1);
    assert!(stderr(&o).contains("not a Laurent polynomial"), "{}", stderr(&o));
}
