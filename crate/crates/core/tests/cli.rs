use std::process::{Command, Output};

fn engine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdr-engine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn char_first_row() {
    let o = engine(&["char", "--N", "2", "--r-max", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "#format=character-report/v1");
    assert_eq!(
        lines[1],
        "N,r,formula,formula_multichoose_variant,oracle,stable,witness_count"
    );
    assert_eq!(lines[2], "2,1,6,6,6,stable,6");
}

#[test]
fn char_formula_column() {
    let o = engine(&["char", "--N", "3", "--r-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let formula: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["formula"].as_str().unwrap())
        .collect();
    assert_eq!(formula, vec!["6", "27"]);
}

#[test]
fn char_rejects_zero_r_max() {
    let o = engine(&["char", "--N", "2", "--r-max", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ope_examples() {
    let v = json(&engine(&["ope", "b[1,-1]|0>", "g[1,0]|0>"]));
    assert_eq!(
        v["poles"],
        serde_json::json!([{ "pole_order": 1, "state": "|0>" }])
    );
    let v = json(&engine(&["ope", "|0>", "|0>"]));
    assert_eq!(v["poles"], serde_json::json!([]));
    let v = json(&engine(&["ope", "C[1,0]|0>", "B[1,-1]|0>"]));
    assert_eq!(
        v["poles"],
        serde_json::json!([{ "pole_order": 1, "state": "|0>" }])
    );
}

#[test]
fn ope_parse_error_echoes_token() {
    let o = engine(&["ope", "b[1,-1]|0>", "q[1,0]|0>"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("q[1,0]|0>"), "{err}");
}

#[test]
fn transform_examples() {
    let identity = engine(&["transform", "--f", "g"]);
    assert_eq!(identity.status.code(), Some(0));
    assert_eq!(json(&identity)["pass"], true);

    let degenerate = engine(&["transform", "--f", "g^2"]);
    assert_eq!(degenerate.status.code(), Some(2));

    // the field formulas as printed lose the OPE for nonlinear f
    let printed = engine(&["transform", "--f", "g+g^2", "--cutoff", "8"]);
    assert_eq!(printed.status.code(), Some(1));
    let v = json(&printed);
    let failing: Vec<(String, String)> = v["ope"]["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["pass"] == false)
        .map(|p| {
            (
                p["left"].as_str().unwrap().into(),
                p["right"].as_str().unwrap().into(),
            )
        })
        .collect();
    assert_eq!(
        failing,
        vec![("c".into(), "beta".into()), ("b".into(), "beta".into())]
    );

    let ordinary = engine(&["transform", "--f", "g+g^2", "--rule", "ordinary"]);
    assert_eq!(ordinary.status.code(), Some(0));
}

#[test]
fn monoid_examples() {
    let o = engine(&[
        "monoid",
        "etale",
        "--gens",
        "(3,0);(0,3);(1,1)",
        "--into",
        "N2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["etale"], true);
    assert_eq!(
        v["cokernel"],
        serde_json::json!({ "rank": 0, "torsion": [3] })
    );
    assert!(v["certificate"]["u"].is_array());

    let id = engine(&[
        "monoid",
        "etale",
        "--gens",
        "(1,0);(0,1)",
        "--into",
        "N2",
        "--format",
        "text",
    ]);
    assert_eq!(stdout(&id).trim(), "etale: kernel 0, cokernel 0");

    let sat = engine(&["monoid", "saturation", "--gens", "gens=(4,0);(0,4);(1,1)"]);
    assert_eq!(sat.status.code(), Some(0));
    assert_eq!(json(&sat)["saturated"], true);

    let not_sat = engine(&["monoid", "saturation", "--gens", "(2,0);(3,0)"]);
    assert_eq!(not_sat.status.code(), Some(1));

    let smooth = engine(&[
        "monoid",
        "smooth",
        "--gens",
        "(2)",
        "--relations",
        "(4)",
        "--char",
        "2",
    ]);
    assert_eq!(smooth.status.code(), Some(1));

    let member = json(&engine(&[
        "monoid",
        "member",
        "--gens",
        "(3,0);(0,3);(1,1)",
        "--vector",
        "(4,1)",
    ]));
    assert_eq!(
        member["membership"]["witness"],
        serde_json::json!([1, 0, 1])
    );

    let diff = engine(&[
        "monoid",
        "differentials",
        "--gens",
        "(2,0);(0,2);(1,1)",
        "--format",
        "text",
    ]);
    assert!(stdout(&diff).contains("d[1, 1] -> dγ¹/γ¹ + dγ²/γ²"));
}

#[test]
fn selftest_is_reproducible_and_detects_corruption() {
    let dir = std::env::temp_dir().join(format!("cdr-engine-selftest-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        let o = engine(&[
            "selftest",
            "--seed",
            "7",
            "--rule",
            "ordinary",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let bad = engine(&[
        "selftest",
        "--rule",
        "ordinary",
        "--corrupt-relation",
        "--format",
        "text",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL modes.relations"));

    // the default field rule fails covariance for nonlinear transforms
    let default = engine(&["selftest", "--format", "text"]);
    assert_eq!(default.status.code(), Some(1));
    let text = stdout(&default);
    let failed: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].starts_with("FAIL coordinate.covariance"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn thread_cap_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_cdr-engine"))
        .args(["char", "--N", "2", "--r-max", "1"])
        .env("CDR_ENGINE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_cdr-engine"))
        .args(["char", "--N", "2", "--r-max", "2"])
        .env("CDR_ENGINE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors() {
    assert_eq!(engine(&["char", "--N", "2"]).status.code(), Some(2));
    assert_eq!(engine(&["nonsense"]).status.code(), Some(2));
    assert_eq!(engine(&["--help"]).status.code(), Some(0));
    assert_eq!(
        engine(&["ope", "|0>", "|0>", "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
}
