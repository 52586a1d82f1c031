use std::fs;
use std::process::{Command, Output};

fn streamsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_streamsub"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_emits_csv_with_fixed_header() {
    let o = streamsub(&["run", "--synthetic", "graph:n=10,p=0.3", "--algo", "sieve,salsa", "--k", "2,3", "--trials", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "algo,k,trial,seed,utility,oracle_calls,peak_stored,passes,opt_estimate_mode,wall_ms,params"
    );
    assert_eq!(lines.count(), 20);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for p in &paths {
        let o = streamsub(&[
            "run", "--synthetic", "points:n=9", "--algo", "sieve,two-pass,greedy", "--k", "2,3", "--trials", "3",
            "--seed", "17", "--out", p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(fs::read(&paths[0]).unwrap(), fs::read(&paths[1]).unwrap());
}

#[test]
fn json_output_is_an_array_of_records() {
    let o = streamsub(&["run", "--synthetic", "graph:n=6,p=0.5", "--format", "json", "--opt-mode", "known"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["opt_estimate_mode"], "known");
}

#[test]
fn gen_then_opt_on_index_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("index.json");
    let o = streamsub(&["gen", "--synthetic", "index:k=3,x=101,i=1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let o = streamsub(&["opt", "--instance", path.to_str().unwrap(), "--k", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 5.0);
}

#[test]
fn edge_list_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    fs::write(&path, "# path\n0 1\n1 2\n").unwrap();
    let o = streamsub(&["opt", "--edge-list", path.to_str().unwrap(), "--k", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["value"].as_f64(), v["witness"][0].as_u64()), (Some(3.0), Some(1)));

    fs::write(&path, "0 1\n1 two\n").unwrap();
    let o = streamsub(&["opt", "--edge-list", path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));
}

#[test]
fn verify_passes_on_ratio_suite() {
    let o = streamsub(&[
        "verify", "--synthetic", "graph:n=9,p=0.3", "--algo", "sieve,salsa,two-pass,p-pass:3,greedy", "--k", "2,3",
        "--trials", "2", "--instances", "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn audit_reports_clean_objective() {
    let o = streamsub(&["audit", "--synthetic", "recsys:n=8", "--samples", "500"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["violations"], 0);
}

#[test]
fn usage_and_data_errors_exit_one() {
    assert_eq!(streamsub(&["run", "--bogus"]).status.code(), Some(1));
    assert_eq!(streamsub(&["run", "--synthetic", "graph:n=4,p=0.5", "--algo", "nope"]).status.code(), Some(1));
    assert_eq!(streamsub(&["run", "--instance", "/nonexistent.json"]).status.code(), Some(1));
    // Known mode without a reachable optimum.
    let o = streamsub(&["run", "--synthetic", "graph:n=40,p=0.2", "--k", "12", "--opt-mode", "known"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(streamsub(&["--help"]).status.code(), Some(0));
}
