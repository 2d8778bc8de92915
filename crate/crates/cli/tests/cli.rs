use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ap-extremal"));
    c.env_remove("AP_EXTREMAL_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("structured output is JSON")
}

/// A fresh scratch directory per call.
fn scratch() -> PathBuf {
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!(
        "ap-extremal-cli-{}-{}",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::SeqCst)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Solutions of a - b = 2c with all three in `a`, by brute force.
fn diff_oracle(a: &[i64]) -> usize {
    let mut n = 0;
    for &x in a {
        for &y in a {
            for &z in a {
                if x - y == 2 * z {
                    n += 1;
                }
            }
        }
    }
    n
}

#[test]
fn count_staircase_example() {
    let dir = scratch();
    let a = write(&dir, "stair2.txt", "1\n2\n4\n6\n8\n");
    let o = run(&["count", "--a", &a, "--eq", "diff"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("count          5"), "{text}");
    assert!(text.contains("principal      15"), "{text}");
    assert!(text.contains("antisymmetric  10"), "{text}");

    let o = run(&["count", "--a", &a, "--eq", "diff", "--format", "structured"]);
    let doc = json(&o);
    assert_eq!(doc["count"], 5);
    assert_eq!(doc["bounds"][0]["name"], "principal");
    assert_eq!(doc["bounds"][0]["value_num"], "15");
    assert_eq!(doc["bounds"][1]["name"], "antisymmetric");
    assert_eq!(doc["bounds"][1]["value_num"], "10");
}

#[test]
fn count_small_examples() {
    let dir = scratch();
    let empty = write(&dir, "empty.txt", "# nothing here\n");
    let doc = json(&run(&["count", "--a", &empty, "--eq", "diff", "--format", "structured"]));
    assert_eq!(doc["count"], 0);

    let sym = write(&dir, "sym1.txt", "-1\r\n0\r\n1\r\n");
    let doc = json(&run(&["count", "--a", &sym, "--eq", "diff", "--format", "structured"]));
    assert_eq!(doc["count"], 5);
    assert_eq!(doc["bounds"][0]["value_num"], "6");
    assert_eq!(doc["bounds"][0]["slack_num"], "1");
    assert_eq!(doc["bounds"].as_array().unwrap().len(), 1);

    // a + b = 2c over A = {0, 1}, B = {2, 3}, C = A ∪ B: (0,2,1) and (1,3,2)
    let a = write(&dir, "a.txt", "0\n1\n");
    let b = write(&dir, "b.txt", "2\n3\n");
    let doc = json(&run(&["count", "--a", &a, "--b", &b, "--format", "structured"]));
    assert_eq!(doc["count"], 2);
    assert_eq!(doc["sizes"], serde_json::json!([2, 2, 4]));

    let frac = write(&dir, "f.txt", "1/2\n0.5\n3/2\n");
    let doc = json(&run(&["count", "--a", &frac, "--eq", "sum", "--c", &frac, "--format", "structured"]));
    // {1/2, 3/2}: no two elements sum to an element
    assert_eq!(doc["sizes"], serde_json::json!([2, 2, 2]));
    assert_eq!(doc["count"], 0);

    let doc = json(&run(&["count", "--a", &a, "--eq", "lambda", "--lambda", "1/2", "--format", "structured"]));
    // a + b = c/2 over {0,1}: (0,0,0)
    assert_eq!(doc["count"], 1);
}

#[test]
fn input_errors_exit_2() {
    let dir = scratch();
    let bad = write(&dir, "bad.txt", "1\n2x\n");
    let o = run(&["count", "--a", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&run(&["count", "--a", "/nonexistent/set.txt"])), 2);
    assert_eq!(code(&run(&["count"])), 2);
    assert_eq!(code(&run(&["count", "--a", &bad, "--eq", "nonsense"])), 2);
    assert_eq!(code(&run(&["construct", "--family", "staircase", "--m", "3"])), 2);
    assert_eq!(code(&run(&["count", "--a", &bad, "--eq", "lambda"])), 2);
}

#[test]
fn construct_emits_set_files() {
    let o = run(&["construct", "--family", "staircase", "--m", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "1\n2\n3\n4\n6\n8\n10\n12\n14\n16\n");
    let o = run(&["construct", "--family", "interval", "--m", "2"]);
    assert_eq!(stdout(&o), "-2\n-1\n0\n1\n2\n");
}

#[test]
fn construct_then_count_round_trip() {
    for m in (2..=20).step_by(2) {
        let set = stdout(&run(&["construct", "--family", "staircase", "--m", &m.to_string()]));
        let values: Vec<i64> = set.lines().map(|l| l.parse().unwrap()).collect();
        let doc = json(&run_stdin(&["count", "--a", "-", "--eq", "diff", "--format", "structured"], &set));
        assert_eq!(doc["count"], diff_oracle(&values) as u64, "staircase {m}");
        // 15m²/8 - 5m/4
        assert_eq!(doc["count"].as_i64().unwrap() * 8, 15 * m * m - 10 * m);
    }
    for m in 1..=50i64 {
        let set = stdout(&run(&["construct", "--family", "interval", "--m", &m.to_string()]));
        let doc = json(&run_stdin(&["count", "--a", "-", "--eq", "diff", "--format", "structured"], &set));
        assert_eq!(doc["count"].as_i64().unwrap(), (m + 1) * (m + 1) + m * m, "interval {m}");
    }
}

#[test]
fn search_example_and_determinism() {
    let args = ["search", "--objective", "max-diff-antisym", "--n", "3", "--span", "10", "--format", "structured"];
    let one = run(&[&args[..], &["--jobs", "1"]].concat());
    let four = run(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let doc = json(&one);
    assert_eq!(doc["best"], 2);
    assert!(doc["witnesses"]
        .as_array()
        .unwrap()
        .iter()
        .any(|w| w["a"] == serde_json::json!([1, 3, 5])));

    let doc = json(&run(&["search", "--objective", "max-diff", "--n", "3", "--span", "1", "--format", "structured"]));
    assert_eq!(doc["best"], 5);
    assert_eq!(doc["witnesses"][0]["a"], serde_json::json!([-1, 0, 1]));

    let doc = json(&run(&["search", "--objective", "max-t-union", "--n", "2", "--span", "1", "--format", "structured"]));
    assert_eq!(doc["best"], 1);
    assert_eq!(doc["witnesses"][0]["a"], serde_json::json!([0]));
    assert_eq!(doc["witnesses"][0]["b"], serde_json::json!([0]));
}

#[test]
fn search_budget_checkpoint_and_resume() {
    let dir = scratch();
    let ckpt = dir.join("state.json");
    let ckpt = ckpt.to_str().unwrap();
    let base = ["search", "--objective", "max-diff", "--n", "4", "--span", "12", "--format", "structured"];
    let straight = run(&base);
    assert_eq!(code(&straight), 0);

    let o = run(&[&base[..], &["--budget", "1", "--checkpoint", ckpt]].concat());
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(Path::new(ckpt).exists());
    let mut last = o;
    for _ in 0..100 {
        last = run(&[&base[..], &["--budget", "20000", "--checkpoint", ckpt, "--resume"]].concat());
        if code(&last) != 4 {
            break;
        }
    }
    assert_eq!(code(&last), 0);
    assert_eq!(last.stdout, straight.stdout);

    // The environment budget applies when no flag is given.
    let o = bin().args(base).env("AP_EXTREMAL_BUDGET", "1").output().unwrap();
    assert_eq!(code(&o), 4);

    let trunc = write(&dir, "trunc.json", "{\"version\": \"ap-extremal-search/1\", \"spec\"");
    let o = run(&[&base[..], &["--checkpoint", &trunc, "--resume"]].concat());
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = scratch();
    let cfg = write(&dir, "c.toml", "objective = \"max-diff\"\nn = 3\nspan = 1\nformat = \"structured\"\n");
    let doc = json(&run(&["search", "--config", &cfg]));
    assert_eq!(doc["best"], 5);
    let doc = json(&run(&["search", "--config", &cfg, "--objective", "max-diff-antisym", "--span", "10"]));
    assert_eq!(doc["best"], 2);
    let bad = write(&dir, "bad.toml", "n = [1, 2]\n");
    assert_eq!(code(&run(&["search", "--config", &bad, "--objective", "max-diff"])), 2);
}

#[test]
fn verify_claim1_certificate_and_replay() {
    let dir = scratch();
    let cert = dir.join("claim1.json");
    let cert = cert.to_str().unwrap();
    let o = run(&["verify", "--target", "claim1", "--tol", "1/1000000000", "--certificate", cert]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(cert).unwrap()).unwrap();
    assert_eq!(doc["target"], "claim1");
    assert_eq!(doc["threshold"], "3/20");
    assert_eq!(doc["tol"], "1/1000000000");
    assert_eq!(doc["leaf_count"].as_u64().unwrap() as usize, doc["leaves"].as_array().unwrap().len());
    assert_eq!(doc["witness"]["value"], "3/20");

    let o = run(&["verify", "--replay", cert, "--format", "structured"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["target"], "claim1");

    let mut tampered = doc.clone();
    tampered["threshold"] = "1/10".into();
    let bad = write(&dir, "tampered.json", &tampered.to_string());
    assert_eq!(code(&run(&["verify", "--replay", &bad])), 5);
    let garbage = write(&dir, "garbage.json", "not json");
    assert_eq!(code(&run(&["verify", "--replay", &garbage])), 2);
}

#[test]
fn verify_failure_reports_survivors() {
    let o = run(&[
        "verify", "--target", "claim1", "--threshold", "1499/10000", "--budget", "200", "--format", "structured",
    ]);
    assert_eq!(code(&o), 5);
    let doc = json(&o);
    assert!(doc["surviving_count"].as_u64().unwrap() > 0);
    assert!(!doc["surviving"].as_array().unwrap().is_empty());
}

#[test]
fn verify_outputs_identical_across_jobs() {
    for target in ["claim2-u", "claim2-v", "claim1"] {
        let a = run(&["verify", "--target", target, "--format", "structured", "--jobs", "1"]);
        let b = run(&["verify", "--target", target, "--format", "structured", "--jobs", "4"]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{target}");
    }
}

#[test]
fn verify_exact_checks() {
    let o = run(&["verify", "--target", "critical-points", "--format", "structured"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    assert_eq!(doc["points"][0]["point"], serde_json::json!(["3/10", "1/10"]));
    assert_eq!(doc["points"][1]["point"], serde_json::json!(["7/20", "3/20"]));

    for target in ["balancing", "xy-lemma"] {
        let o = run(&["verify", "--target", target, "--trials", "2000", "--seed", "5"]);
        assert_eq!(code(&o), 0, "{target}");
    }

    let o = run(&["verify", "--target", "compression-scan", "--size-cap", "2", "--span", "5", "--format", "structured"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["violation"].is_null());

    for target in ["leqfis-scan", "recasting-scan"] {
        let o = run(&["verify", "--target", target, "--size-cap", "3", "--span", "5", "--format", "structured"]);
        assert_eq!(code(&o), 0, "{target}");
        assert_eq!(json(&o)["complete"], true);
    }
    let o = run(&["verify", "--target", "main-sweep", "--n-max", "4", "--span", "6"]);
    assert_eq!(code(&o), 0);
    let o = run(&["verify", "--target", "principal-sweep", "--n-max", "4", "--span", "6"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn sweep_budget_and_start() {
    let base = ["verify", "--target", "main-sweep", "--n-max", "4", "--span", "6", "--format", "structured"];
    let full = json(&run(&base));
    let o = run(&[&base[..], &["--budget", "10"]].concat());
    assert_eq!(code(&o), 4);
    let first = json(&o);
    assert_eq!(first["cursor"], 10);
    let rest = json(&run(&[&base[..], &["--start", "10"]].concat()));
    assert_eq!(rest["complete"], true);
    assert_eq!(
        first["checked"].as_u64().unwrap() + rest["checked"].as_u64().unwrap(),
        full["checked"].as_u64().unwrap()
    );
}
