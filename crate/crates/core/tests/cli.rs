//! The command-line front end, driven in-process.

use std::path::PathBuf;

use lindy::cli::main_with_args;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lindy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("lindy").chain(args.iter().copied()))
}

fn run_to(name: &str, args: &[&str]) -> (i32, String) {
    let out = scratch(name);
    let out_s = out.to_str().unwrap().to_string();
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", &out_s]);
    let code = run(&full);
    (code, std::fs::read_to_string(&out).unwrap_or_default())
}

fn rows(json: &str) -> Vec<serde_json::Value> {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    match v {
        serde_json::Value::Array(rows) => rows,
        serde_json::Value::Object(mut o) => o.remove("rows").unwrap().as_array().unwrap().clone(),
        other => panic!("unexpected report {other}"),
    }
}

#[test]
fn constants_at_two() {
    let (code, text) = run_to(
        "constants.json",
        &["constants", "--p", "1", "--delta", "const:2", "--m", "2"],
    );
    assert_eq!(code, 0);
    let rows = rows(&text);
    let km = rows
        .iter()
        .find(|r| r["quantity"] == "k_m" && r["m"] == 2)
        .expect("k_m row");
    assert!((km["lower"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert!((km["upper"].as_f64().unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn rows_carry_every_field() {
    let (code, text) = run_to("indexing.json", &["indexing", "--m", "2,4,...,64"]);
    assert_eq!(code, 0);
    for row in rows(&text) {
        for key in [
            "m",
            "quantity",
            "lower",
            "upper",
            "reference",
            "paper_ref",
            "pass",
        ] {
            assert!(row.get(key).is_some(), "{key} missing from {row}");
        }
    }
}

#[test]
fn csv_has_a_header_and_rows() {
    let (code, text) = run_to(
        "indexing.csv",
        &["indexing", "--m", "1..16", "--format", "csv"],
    );
    assert_eq!(code, 0);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(
        header.starts_with("m,quantity,lower,upper,reference,paper_ref,pass"),
        "{header}"
    );
    assert!(lines.count() >= 16);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(run(&["constants", "--delta", "const:1"]), 2);
    assert_eq!(run(&["basis", "--p", "0"]), 2);
    assert_eq!(run(&["basis", "--p", "1.5"]), 2);
    assert_eq!(run(&["basis", "--p", "0.7", "--exact"]), 2);
    assert_eq!(run(&["greedy", "--m", "8,4"]), 2);
    assert_eq!(run(&["directsum", "--eta", "geom:0.5"]), 2);
    assert_eq!(run(&["synthesize", "--phi", "pow:2"]), 2);
    assert_eq!(run(&["no-such-command"]), 2);
}

#[test]
fn capacity_errors_exit_three() {
    assert_eq!(run(&["constants", "--m", "100000000"]), 3);
    assert_eq!(
        run(&["greedy", "--max-support", "1000000000", "--trials", "1"]),
        3
    );
}

#[test]
fn violations_exit_one() {
    // The democracy upper bound (1+Γ(m))^{1/p} fails for p < 1.
    let (code, text) = run_to(
        "greedy-half.json",
        &["greedy", "--p", "0.5", "--m", "8", "--trials", "20"],
    );
    assert_eq!(code, 1);
    assert!(rows(&text).iter().any(|r| r["pass"] == false));
}

#[test]
fn verify_passes_at_one() {
    let (code, text) = run_to(
        "verify.json",
        &[
            "verify", "--p", "1", "--delta", "const:2", "--seed", "7", "--trials", "40",
        ],
    );
    assert_eq!(code, 0);
    let rows = rows(&text);
    assert!(rows.len() > 50);
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn output_is_reproducible() {
    let args = [
        "greedy", "--p", "0.5", "--m", "4,8", "--trials", "30", "--seed", "3",
    ];
    let (_, a) = run_to("repeat-a.json", &args);
    let (_, b) = run_to("repeat-b.json", &args);
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let (_, c) = run_to(
        "repeat-c.json",
        &[
            "greedy", "--p", "0.5", "--m", "4,8", "--trials", "30", "--seed", "4",
        ],
    );
    assert_ne!(a, c);
}

#[test]
fn synthesized_table_round_trips() {
    let table = scratch("delta.txt");
    let table_s = table.to_str().unwrap();
    assert_eq!(
        run(&[
            "synthesize",
            "--phi",
            "pow:0.5",
            "--len",
            "6",
            "--out",
            table_s
        ]),
        0
    );
    let spec = format!("table:{table_s}");
    let (code, text) = run_to(
        "from-table.json",
        &["indexing", "--delta", &spec, "--m", "1..32"],
    );
    assert_eq!(code, 0);
    assert!(!rows(&text).is_empty());
}

#[test]
fn exact_mode_runs() {
    let (code, text) = run_to(
        "exact.json",
        &["basis", "--p", "1/2", "--exact", "--trials", "5"],
    );
    assert_eq!(code, 0, "{text}");
}
