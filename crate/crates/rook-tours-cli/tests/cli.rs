//! End-to-end checks of the command-line surface: flags, exit codes, and
//! output shapes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rook-tours"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("rook-tours-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn count_prints_integer() {
    let out = run(&["count", "--rows", "6", "--cols", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1072\n");
}

#[test]
fn infeasible_board_exits_2() {
    let out = run(&["count", "--rows", "3", "--cols", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty(), "machine output must stay clean");
}

#[test]
fn usage_error_exits_1() {
    let out = run(&["count", "--rows", "6"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&[
        "minimize",
        "--rows",
        "4",
        "--cols",
        "4",
        "--objective",
        "zigzags",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["construct", "--recipe", "spiral-even", "--side", "7"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumerate_streams_rct_documents() {
    let out = run(&["enumerate", "--rows", "4", "--cols", "4", "--limit", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("4 4\n").count(), 2);
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn minimize_reports_fixed_schema_and_writes_witness() {
    let rct = temp_path("min44.rct");
    let out = run(&[
        "minimize",
        "--rows",
        "4",
        "--cols",
        "4",
        "--objective",
        "turns",
        "--emit",
        "rct",
        rct.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["dims"]["rows"], 4);
    assert_eq!(doc["objective"], "turns");
    assert_eq!(doc["optimum"], 8);
    for key in [
        "expanded",
        "pruned_parity",
        "pruned_bound",
        "pruned_connectivity",
    ] {
        assert!(doc["nodes"][key].is_u64(), "missing nodes.{key}");
    }
    assert!(doc["elapsed_s"].is_number());
    let witness = std::fs::read_to_string(&rct).unwrap();
    assert_eq!(doc["witness_rct"].as_str().unwrap(), witness);
    rook_tours::parse_rct(&witness).unwrap();
}

#[test]
fn single_threaded_reports_are_reproducible() {
    let args = [
        "minimize",
        "--rows",
        "5",
        "--cols",
        "6",
        "--objective",
        "straights",
        "--threads",
        "1",
    ];
    let mut first: Option<serde_json::Value> = None;
    for _ in 0..2 {
        let out = run(&args);
        assert!(out.status.success());
        let mut doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        doc.as_object_mut().unwrap().remove("elapsed_s");
        match &first {
            None => first = Some(doc),
            Some(prev) => assert_eq!(prev, &doc, "reports differ across runs"),
        }
    }
}

#[test]
fn construct_emits_svg() {
    let svg = temp_path("spiral10.svg");
    let out = run(&[
        "construct",
        "--recipe",
        "spiral-odd",
        "--side",
        "10",
        "--emit",
        "svg",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("10 10\n"));
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert!(doc.contains("straights: 12, turns: 88"));
}

#[test]
fn construct_extend_plus4_from_seed_file() {
    let seed = temp_path("near9.rct");
    let out = run(&["construct", "--recipe", "near-square", "--rows", "9"]);
    assert!(out.status.success());
    std::fs::write(&seed, stdout(&out)).unwrap();
    let out = run(&[
        "construct",
        "--recipe",
        "extend-plus4",
        "--seed",
        seed.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let circuit = rook_tours::parse_rct(&stdout(&out)).unwrap();
    assert_eq!(circuit.dims(), rook_tours::BoardDims::new(13, 14));
    assert_eq!(circuit.stats().straights_total, 14);
}

#[test]
fn check_exit_codes() {
    let good = temp_path("good.rct");
    std::fs::write(&good, "2 3\nF-7\nL-J\n").unwrap();
    let out = run(&["check", good.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["turn_balance"]["ccw"], 4);

    // Unparseable files are usage errors, not invariant failures.
    let bad = temp_path("bad.rct");
    std::fs::write(&bad, "2 2\nF7\nL-\n").unwrap();
    let out = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn render_formats() {
    let file = temp_path("render.rct");
    std::fs::write(&file, "2 2\nF7\nLJ\n").unwrap();
    let out = run(&["render", file.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "┌┐\n└┘\n");
    let out = run(&["render", file.to_str().unwrap(), "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["stats"]["ccw_total"], 4);
    let out = run(&[
        "render",
        file.to_str().unwrap(),
        "--format",
        "svg",
        "--cell-px",
        "20",
    ]);
    assert!(stdout(&out).contains("<svg"));
}

#[test]
fn verify_table_summary_is_clean_at_desk_scale() {
    let out = run(&["verify-table", "--max-cells", "24"]);
    assert!(out.status.success(), "verify-table exited {:?}", out.status);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["summary"]["mismatches"], 0);
    assert_eq!(doc["summary"]["unknowns"], 0);
    assert!(doc["summary"]["special_cases"].as_u64().unwrap() > 0);
}

#[test]
fn thread_count_defaults_from_the_environment() {
    let out = bin()
        .env("ROOK_TOURS_THREADS", "2")
        .args(["count", "--rows", "6", "--cols", "6"])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1072\n");
}

#[test]
fn verify_table_budget_exhaustion_exits_4() {
    let out = run(&["verify-table", "--max-cells", "24", "--budget", "5"]);
    assert_eq!(out.status.code(), Some(4));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["summary"]["unknowns"].as_u64().unwrap() > 0);
}
