use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extraspecial"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim_end().to_string()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn element_commands() {
    assert_eq!(
        ok(&["mul", "es1(3,1):[1|0|0]", "es1(3,1):[0|1|0]"]),
        "es1(3,1):[1|1|1]"
    );
    assert_eq!(ok(&["order", "es2(3,1):[1|0]"]), "9");
    assert_eq!(ok(&["classify", "es2(3,1):[3|2]"]), "ES2_OB(2)");
    assert_eq!(ok(&["inverse", "es1(3,1):[1|1|0]"]), "es1(3,1):[2|2|1]");
}

#[test]
fn printed_elements_reparse() {
    let product = ok(&["mul", "es2(3,2):[4|1|2|0]", "es2(3,2):[1|1|1|2]"]);
    assert_eq!(ok(&["mul", &product, "es2(3,2):[0|0|0|0]"]), product);
}

#[test]
fn classify_json_reports_orbit_size() {
    let out = ok(&["classify", "--json", "es1(3,1):[1|0|0]"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["label"], "ES1_NONCENTRAL");
    assert_eq!(v["cardinality"], "24");
}

#[test]
fn parse_errors_exit_2_with_position() {
    let o = run(&["classify", "es2(3,1):[3|2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
    assert_eq!(
        run(&[
            "census",
            "--p-list",
            "x",
            "--n-list",
            "1",
            "--quantities",
            "alpha_k"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "census",
            "--p-list",
            "3",
            "--n-list",
            "1",
            "--quantities",
            "nope"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn domain_errors_exit_1() {
    assert_eq!(
        run(&["mul", "es1(3,1):[1|0|0]", "es1(5,1):[0|1|0]"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["order", "es1(4,1):[1|0|0]"]).status.code(), Some(1));
}

#[test]
fn endo_build_verdicts() {
    assert_eq!(
        ok(&["endo", "build", "es1(3,1) A=[1] B=[1] C=[0] D=[0]"]),
        "valid automorphism, l=1"
    );
    let o = run(&[
        "endo",
        "build",
        "es2(3,2) A=[1,1;0,1] B=[1,0;0,1] C=[0,0;0,0] D=[0,0;0,0]",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o),
        "invalid: first-row constraint a_{1j}=0 violated"
    );
    let o = run(&[
        "endo",
        "build",
        "es1(3,2) A=[1,1;0,1] B=[1,0;0,1] C=[0,0;0,0] D=[0,0;0,0]",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid: not in symp^scalar"));
}

#[test]
fn endo_apply_and_check() {
    assert_eq!(
        ok(&[
            "endo",
            "apply",
            "es1(3,1) A=[2] B=[1] C=[0] D=[0]",
            "es1(3,1):[1|1|1]"
        ]),
        "es1(3,1):[2|1|2]"
    );
    let out = ok(&[
        "endo",
        "check",
        "es2(3,1) A=[0] B=[0] C=[0] D=[1] beta=[1] a=3",
    ]);
    assert!(out.starts_with("valid endomorphism, l=0, a=3"), "{out}");
    assert!(out.contains("729 pairs"));
}

#[test]
fn census_end_order_with_oracle() {
    let out = ok(&[
        "census",
        "--p-list",
        "3",
        "--n-list",
        "1",
        "--quantities",
        "end_order",
        "--oracle",
    ]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.len(), 2);
    for (row, (group, value)) in rows.iter().zip([("es1", "729"), ("es2", "135")]) {
        assert_eq!(row["group"], group);
        assert_eq!(row["formula_value"], value);
        assert_eq!(row["oracle_value"], value);
        assert_eq!(row["match"], true);
    }
}

#[test]
fn census_formula_only_grid() {
    let out = ok(&[
        "census",
        "--p-list",
        "3,5,7",
        "--n-list",
        "1,2,3",
        "--quantities",
        "alpha_k",
    ]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.len(), 3 * (2 + 3 + 4));
    assert!(rows
        .iter()
        .all(|r| r.get("oracle_value").is_none() && r.get("match").is_none()));
    let keys: Vec<(u64, u64, u64)> = rows
        .iter()
        .map(|r| {
            (
                r["p"].as_u64().unwrap(),
                r["n"].as_u64().unwrap(),
                r["k"].as_u64().unwrap(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn census_partial_order_rows() {
    let out = ok(&[
        "census",
        "--quantities",
        "partial_order",
        "--p-list",
        "3",
        "--n-list",
        "1",
    ]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&out).unwrap();
    assert_eq!(rows[0]["group"], "es1");
    assert_eq!(rows[0]["formula_value"], "PARTIAL_ORDER");
    assert_eq!(rows[1]["group"], "es2");
    assert_eq!(rows[1]["formula_value"], "NO_PARTIAL_ORDER");
    assert!(rows[1]["witness"]["forward"].is_object());
}

#[test]
fn census_skips_over_cap() {
    let out = ok(&[
        "census",
        "--p-list",
        "3",
        "--n-list",
        "3",
        "--quantities",
        "count_X",
        "--oracle",
        "--format",
        "csv",
    ]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("group,p,n,quantity,k,formula_value,oracle_value,match,detail")
    );
    let row = lines.next().unwrap();
    assert!(
        row.starts_with(",3,3,count_x,,428129086113,skipped,n/a"),
        "{row}"
    );
}

#[test]
fn census_is_byte_deterministic() {
    let args = [
        "census",
        "--p-list",
        "5,3",
        "--n-list",
        "2,1",
        "--quantities",
        "gamma_k,aut_order",
        "--format",
        "csv",
    ];
    let a = ok(&args);
    let b = ok(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a, b);
    assert!(a.lines().nth(1).unwrap().starts_with("es1,3,1,aut_order"));
}

#[test]
fn count_with_oracle_and_polynomial() {
    let out = ok(&[
        "count",
        "--p",
        "3",
        "--n",
        "2",
        "--quantity",
        "beta_k",
        "--k",
        "2",
        "--oracle",
        "--poly",
    ]);
    assert_eq!(out, "4 = p + 1\noracle 4 (subspace scan): match");
    assert_eq!(
        run(&["count", "--p", "3", "--n", "1", "--quantity", "aut_order"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_quick_passes() {
    let out = ok(&["verify", "--suite", "quick"]);
    assert!(out.ends_with("checks passed"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn help_documents_caps() {
    let out = ok(&["--help"]);
    assert!(out.contains("EXTRASPECIAL_CAP_MATRIX_SCAN"));
}
