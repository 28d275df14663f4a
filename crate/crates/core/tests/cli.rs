use std::fs;

use clap::Parser;
use hodge_shapley::cli::{self, Cli};
use hodge_shapley::io::{parse_document, Document};
use hodge_shapley::{decompose, Coalition, Game, SolverConfig};

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Outcome {
    let argv = std::iter::once("hodge-shapley").chain(args.iter().copied());
    let parsed = Cli::try_parse_from(argv).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(&parsed, &mut out, &mut err);
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

/// Numeric columns of a CSV row whose first column is a quoted coalition.
fn numbers(line: &str) -> Vec<f64> {
    let rest = line.rsplit_once('"').map_or(line, |(_, r)| r);
    rest.split(',').filter(|x| !x.is_empty()).map(|x| x.parse().unwrap()).collect()
}

fn write_file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn shapley_of_bargaining_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir, "d3.json", r#"{"players":3,"values":{"{1,2,3}":1}}"#);
    let o = run(&["shapley", "--input", &path, "--format", "csv"]);
    assert_eq!(o.code, cli::EXIT_OK, "{}", o.err);
    let rows: Vec<&str> = o.out.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let phi: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((phi - 1.0 / 3.0).abs() < 1e-11);
    }
}

#[test]
fn shapley_of_additive_generator() {
    let o = run(&["shapley", "--generate", "additive", "1", "2", "--format", "csv"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(o.out, "player,phi\n1,1\n2,2\n");
}

#[test]
fn malformed_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir, "bad.json", r#"{"players":2,"values":{"{1,,2}":1}}"#);
    let o = run(&["shapley", "--input", &path]);
    assert_eq!(o.code, cli::EXIT_PARSE);
    assert!(o.err.contains("{1,,2}"), "{}", o.err);
}

#[test]
fn syntax_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir, "bad.json", "{\"players\":2,\n\"values\":{\"{1}\":}}");
    let o = run(&["shapley", "--input", &path]);
    assert_eq!(o.code, cli::EXIT_PARSE);
    assert!(o.err.contains("line 2"), "{}", o.err);
}

#[test]
fn nonzero_empty_value_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir, "empty.json", r#"{"players":2,"values":{"{}":0.5,"{1}":1}}"#);
    let o = run(&["shapley", "--input", &path]);
    assert_eq!(o.code, cli::EXIT_CONSTRAINT, "{}", o.err);
}

#[test]
fn out_of_range_coalition_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir, "range.json", r#"{"players":2,"values":{"{3}":1}}"#);
    assert_eq!(run(&["shapley", "--input", &path]).code, cli::EXIT_CONSTRAINT);
}

#[test]
fn decompose_bargaining_two_players() {
    let o = run(&["decompose", "--generate", "bargaining", "2", "--format", "csv"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let lines: Vec<&str> = o.out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], "coalition,v,v1,v2,check");
    let row = |i: usize| numbers(lines[i]);
    let want = [[0.0, 0.0, 0.0], [0.0, 0.25, -0.25], [0.0, -0.25, 0.25], [1.0, 0.5, 0.5]];
    for (k, w) in want.iter().enumerate() {
        let r = row(k + 1);
        for (a, b) in r.iter().zip(w) {
            assert!((a - b).abs() < 1e-10, "row {k}: {r:?}");
        }
        assert!(r[3].abs() < 1e-10);
    }
}

#[test]
fn decompose_zero_game_is_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir, "zero.json", r#"{"players":3,"values":{}}"#);
    let o = run(&["decompose", "--input", &path, "--format", "csv"]);
    assert_eq!(o.code, 0, "{}", o.err);
    for line in o.out.lines().skip(1) {
        assert!(numbers(line).iter().all(|&x| x == 0.0), "{line}");
    }
}

#[test]
fn decompose_iteration_cap_exits_4() {
    let o = run(&["decompose", "--generate", "random", "6", "3", "--max-iterations", "1"]);
    assert_eq!(o.code, cli::EXIT_SOLVER);
    assert!(o.err.contains("player"), "{}", o.err);
}

#[test]
fn machine_decomposition_round_trips() {
    let o = run(&["decompose", "--generate", "bargaining", "3", "--format", "machine"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let Document::Decomposition(parsed) = parse_document(&o.out).unwrap() else {
        panic!("expected a decomposition");
    };
    let direct = decompose(&Game::pure_bargaining(3).unwrap(), &SolverConfig::default()).unwrap();
    for (a, b) in parsed.components.iter().zip(&direct.components) {
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }
    assert_eq!(parsed.source, direct.source);
}

#[test]
fn bargaining_exact_rationals() {
    let o = run(&["bargaining", "--players", "3", "--exact", "--format", "csv"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.contains("\"{1}\",0,1/12,-1/24,-1/24"), "{}", o.out);
    assert!(o.out.contains("\"{2,3}\",0,-1/4,1/8,1/8"), "{}", o.out);
    assert!(o.out.contains("\"{1,2,3}\",1,1/3,1/3,1/3"), "{}", o.out);
}

#[test]
fn simulate_is_reproducible() {
    let args = [
        "simulate", "--generate", "bargaining", "2", "--target", "{1,2}", "--samples", "20000", "--seed", "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, 0, "{}", a.err);
    assert_eq!(a.out, b.out);
    assert!(a.out.contains("0.5"));
}

#[test]
fn simulate_empty_target_is_exactly_zero() {
    let o = run(&[
        "simulate", "--generate", "random", "3", "1", "--target", "{}", "--samples", "100", "--format", "csv",
    ]);
    assert_eq!(o.code, 0, "{}", o.err);
    for line in o.out.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[3], "0");
        assert_eq!(cols[4], "0");
    }
}

#[test]
fn simulate_step_cap_exits_5() {
    let o = run(&[
        "simulate", "--generate", "bargaining", "6", "--target", "{1,2,3,4,5,6}", "--samples", "10", "--max-steps", "2",
    ]);
    assert_eq!(o.code, cli::EXIT_STEP_CAP, "{}", o.err);
}

#[test]
fn exact_matches_components() {
    let o = run(&["exact", "--generate", "bargaining", "3", "--target", "{1}", "--format", "csv"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let first: f64 = o.out.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((first - 1.0 / 12.0).abs() < 1e-10);
}

#[test]
fn verify_bargaining_four_passes() {
    let o = run(&["verify", "--generate", "bargaining", "4"]);
    assert_eq!(o.code, cli::EXIT_OK, "{}{}", o.out, o.err);
    assert!(o.out.contains("all checks passed"));
}

#[test]
fn verify_random_five_passes() {
    let o = run(&["verify", "--generate", "random", "5", "42"]);
    assert_eq!(o.code, cli::EXIT_OK, "{}{}", o.out, o.err);
}

#[test]
fn verify_corrupted_decomposition_fails_efficiency() {
    let o = run(&["decompose", "--generate", "bargaining", "3", "--format", "machine"]);
    let mut doc: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    let cell = &mut doc["components"][0]["values"]["{1}"];
    *cell = serde_json::json!(cell.as_f64().unwrap() + 0.1);
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(&dir, "corrupt.json", &doc.to_string());
    let v = run(&["verify", "--input", &path]);
    assert_eq!(v.code, cli::EXIT_VERIFY, "{}", v.out);
    assert!(v.out.contains("failed"), "{}", v.out);
    let failing = v.out.lines().last().unwrap();
    assert!(failing.contains("A1"), "{failing}");
}

#[test]
fn game_file_round_trip_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let g = common_game();
    let path = write_file(&dir, "g.json", &hodge_shapley::io::render_game_file(&g));
    let o = run(&["shapley", "--input", &path, "--format", "machine"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let parsed: serde_json::Value = serde_json::from_str(&o.out).unwrap();
    let phi = hodge_shapley::shapley_direct(&g);
    for i in 0..3 {
        assert_eq!(parsed["shapley"][(i + 1).to_string()].as_f64(), Some(phi.phi[i]));
    }
}

fn common_game() -> Game {
    Game::new(3, [(Coalition::from_labels([1]), 0.5), (Coalition::from_labels([1, 3]), -2.25)]).unwrap()
}
