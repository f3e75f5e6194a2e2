use std::process::{Command, Output};

use pascalfib::cli::MatrixDoc;
use pascalfib::pascal::{build_left, build_right};
use serde_json::Value;

fn pascalfib(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pascalfib"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn matrix_commands() {
    let o = pascalfib(&["matrix", "right", "2", "pow", "5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "[[3,5],[5,8]]\n");
    assert_eq!(stdout(&pascalfib(&["matrix", "left", "3", "inverse"])), "[[1,0,0],[-1,1,0],[1,-2,1]]\n");
    assert_eq!(stdout(&pascalfib(&["matrix", "left", "3", "pow", "0"])), "[[1,0,0],[0,1,0],[0,0,1]]\n");
    assert_eq!(stdout(&pascalfib(&["matrix", "right", "3", "charpoly"])), "x^3 - 2x^2 - 2x + 1\n");
    assert_eq!(stdout(&pascalfib(&["matrix", "right", "2", "det"])), "-1\n");
    assert_eq!(stdout(&pascalfib(&["matrix", "right", "2", "det", "--mod", "7"])), "6\n");
}

#[test]
fn matrix_json_round_trips() {
    for (kind, n, e) in [("right", 6, "9"), ("left", 5, "-3"), ("right", 12, "40")] {
        let o = pascalfib(&["matrix", kind, &n.to_string(), "pow", e, "--format", "json"]);
        assert_eq!(code(&o), 0);
        let doc: MatrixDoc = serde_json::from_str(&stdout(&o)).unwrap();
        let base = if kind == "left" { build_left(n) } else { build_right(n) }.unwrap();
        assert_eq!(doc.to_exact().unwrap(), base.pow(e.parse().unwrap()).unwrap());
        // entries are strings, never JSON numbers
        let raw: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(raw["entries"][0][0].is_string());
    }
    let o = pascalfib(&["matrix", "right", "4", "pow", "7", "--mod", "13", "--format", "json"]);
    let doc: MatrixDoc = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc.modulus, Some(13));
    assert_eq!(doc.to_mod().unwrap(), build_right(4).unwrap().pow(7).unwrap().to_mod(13).unwrap());
}

#[test]
fn fib_commands() {
    assert_eq!(stdout(&pascalfib(&["fib", "entry-point", "13"])), "7\n");
    assert_eq!(stdout(&pascalfib(&["fib", "period", "5"])), "20\n");
    assert_eq!(stdout(&pascalfib(&["fib", "value", "10"])), "55\n");
    assert_eq!(stdout(&pascalfib(&["fib", "lucas", "5"])), "11\n");
    let big: Value = serde_json::from_str(&stdout(&pascalfib(&["fib", "value", "300", "--format", "json"]))).unwrap();
    assert_eq!(big["value"], "222232244629420445529739893461909967206666939096499764990979600");
    let bw = pascalfib(&["fib", "bloom-wall", "13", "--format", "json"]);
    assert_eq!(code(&bw), 0);
    let bw: Value = serde_json::from_str(&stdout(&bw)).unwrap();
    assert_eq!(bw["entry_point"], 7);
    assert_eq!(bw["pisano_period"], 28);
    assert_eq!(code(&pascalfib(&["fib", "bloom-wall", "15"])), 2);
    assert_eq!(code(&pascalfib(&["fib", "entry-point", "1"])), 2);
}

#[test]
fn order_commands() {
    let o = pascalfib(&["order", "right", "4", "13"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("order: 28\n"));
    let o = pascalfib(&["order", "left", "5", "7"]);
    assert!(stdout(&o).starts_with("order: 7\n"));
    let o = pascalfib(&["order", "left", "1", "7"]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
    assert_eq!(code(&pascalfib(&["order", "right", "4", "12"])), 2);

    let json: Value = serde_json::from_str(&stdout(&pascalfib(&["order", "right", "4", "13", "--format", "json"]))).unwrap();
    assert_eq!(json["order"], 28);
    assert_eq!(json["matrix_kind"], "right");
    assert_eq!(json["theorem_checks"]["p-plus-1"]["verdict"], "pass");
    assert_eq!(json["theorem_checks"]["p-minus-1"]["verdict"], "hypothesis-not-met");
}

#[test]
fn verify_examples_pass() {
    for args in [
        &["verify", "--laws", "mod2", "--n", "2..64"][..],
        &["verify", "--laws", "fib-recurrence", "--n", "2..10", "--e", "1..12"],
        &["verify", "--laws", "eigen-conjecture", "--n", "1..16"],
    ] {
        let o = pascalfib(args);
        assert_eq!(code(&o), 0, "{args:?}");
        let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(report["summary"]["fail"], 0);
        assert!(report["summary"]["pass"].as_u64().unwrap() > 0);
        for check in report["checks"].as_array().unwrap() {
            assert_eq!(check["verdict"], "pass");
        }
    }
}

#[test]
fn verify_is_byte_deterministic() {
    let args = ["verify", "--laws", "border,scalar-power,p-plus-1", "--n", "2..6", "--e", "1..6", "--primes", "3,7,13"];
    let a = pascalfib(&args);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "4"]);
    let b = pascalfib(&threaded);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), 0);
}

#[test]
fn verify_failure_and_fail_fast() {
    let o = pascalfib(&["verify", "--laws", "order-bound", "--n", "2..4", "--primes", "3,5"]);
    assert_eq!(code(&o), 1);
    let full: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(full["summary"]["fail"], 2);
    let failing: Vec<&Value> = full["checks"].as_array().unwrap().iter().filter(|c| c["verdict"] == "fail").collect();
    assert!(failing.iter().all(|c| c["params"]["p"] == 5 && c["witness"].is_object()));

    let o = pascalfib(&["verify", "--laws", "order-bound", "--n", "2..4", "--primes", "3,5", "--fail-fast"]);
    assert_eq!(code(&o), 1);
    let partial: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(partial["summary"]["fail"], 1);
    assert_eq!(partial["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_config_file_and_overrides() {
    let dir = std::env::temp_dir().join(format!("pascalfib-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("campaign.json");
    std::fs::write(
        &path,
        r#"{"laws": ["inverses", "left-closed-form"], "n_range": [1, 4], "e_range": "-2..2", "output_format": "csv"}"#,
    )
    .unwrap();
    let o = pascalfib(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("law,params,verdict,witness\n"));
    assert_eq!(text.lines().count(), 1 + 4 + 4 * 5);

    let o = pascalfib(&["verify", "--config", path.to_str().unwrap(), "--format", "plain", "--n", "2..2"]);
    assert!(stdout(&o).ends_with("left-closed-form,inverses: 6 pass, 0 fail\n"));

    std::fs::write(&path, r#"{"laws": ["inverses"], "n_range": "1..99"}"#).unwrap();
    assert_eq!(code(&pascalfib(&["verify", "--config", path.to_str().unwrap()])), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors() {
    for args in [
        &["verify", "--laws", "no-such-law"][..],
        &["verify", "--laws", "mod2", "--n", "1..65"],
        &["verify", "--laws", "left-order", "--primes", "4"],
        &["verify", "--laws", "mod2", "--threads", "0"],
        &["verify"],
        &["matrix", "left", "0", "show"],
        &["matrix", "middle", "3", "show"],
        &["bogus"],
    ] {
        let o = pascalfib(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn list_laws() {
    let text = stdout(&pascalfib(&["verify", "--list-laws"]));
    assert!(text.lines().any(|l| l == "eigen-conjecture"));
    assert_eq!(text.lines().count(), pascalfib::campaign::Law::ALL.len());
}
