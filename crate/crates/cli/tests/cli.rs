use std::path::PathBuf;
use std::process::{Command, Output};

use hk4_cli::checks::CheckId;
use hk4_cli::report::run_checks;
use hk4_cli::{Expectations, Report};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hk4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hk4")).args(args).output().expect("binary runs")
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(hk4(&["classify", "--a", "1"]).status.code(), Some(0));
    assert_eq!(hk4(&["classify", "--a", "2"]).status.code(), Some(0));
    assert_eq!(hk4(&["classify", "--a", "0"]).status.code(), Some(2));
    assert_eq!(hk4(&["classify"]).status.code(), Some(2));
    assert_eq!(hk4(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(hk4(&["verify", "all"]).status.code(), Some(0));
    assert_eq!(hk4(&["--help"]).status.code(), Some(0));
}

#[test]
fn classify_text_block() {
    let out = stdout(&hk4(&["classify", "--a", "1"]));
    assert!(out.contains("A_X = 25/32, gamma = 0"));
    assert!(out.contains("q(l,m) = 1, q(m) = 0, form EVEN, c_X = 3, P_RR(T) = binom(T/2 + 3, 2)"));
    assert!(out.contains("A_X = 8/9"));
    assert!(out.contains("31/72 is not an integer"));
    let out = stdout(&hk4(&["classify", "--a", "1", "--decimal"]));
    assert!(out.contains("25/32 (~0.781250, approx)"));
}

#[test]
fn json_is_deterministic_and_round_trips() {
    let a = stdout(&hk4(&["verify", "all", "--json", "-", "--jobs", "1"]));
    let b = stdout(&hk4(&["verify", "all", "--json", "-", "--jobs", "4"]));
    assert_eq!(a, b);
    let r = Report::from_json(&a).unwrap();
    assert_eq!(r.to_json(), a);
    let full = stdout(&hk4(&["report", "--json", "-"]));
    let r = Report::from_json(&full).unwrap();
    assert_eq!(r.to_json(), full);
    assert_eq!(r.classifications.len(), 8);
}

#[test]
fn order_independent() {
    let exp = Expectations::bundled();
    let (base, _) = run_checks(CheckId::ALL, &exp, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let mut ids = CheckId::ALL.to_vec();
        ids.shuffle(&mut rng);
        let (r, _) = run_checks(&ids, &exp, 3).unwrap();
        assert_eq!(r, base);
        assert_eq!(r.to_json(), base.to_json());
    }
}

#[test]
fn json_file_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("segre.json");
    let o = hk4(&["verify", "segre", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let r = Report::from_json(&text).unwrap();
    assert_eq!(r.checks["segre"].values["determinant"], "70785");
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn scenarios() {
    let o = hk4(&["scenario", &scenario("k3n2.json"), "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    let sc = r.scenario.unwrap();
    assert_eq!(sc["a"], 1);
    assert_eq!(sc["matched"][0]["p_rr_binomial"], "binom(T/2 + 3, 2)");
    assert_eq!(r.checks.len(), CheckId::ALL.len() + 1);

    let o = hk4(&["scenario", &scenario("kummer.json"), "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let sc = Report::from_json(&stdout(&o)).unwrap().scenario.unwrap();
    assert_eq!(sc["a"], 3);
    assert_eq!(sc["matched"][0]["c_x"], "9");
    assert_eq!(sc["matched"][0]["p_rr_binomial"], "3*binom(T/2 + 2, 2)");

    let o = hk4(&["scenario", &scenario("og10.json"), "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let sc = Report::from_json(&stdout(&o)).unwrap().scenario.unwrap();
    assert_eq!(sc["a"], 1);
    assert_eq!(sc["rr_forms"][0]["p_rr_binomial"], "binom(T/2 + 6, 5)");
}

#[test]
fn scenario_errors() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.display().to_string()
    };
    let not_isotropic = write("a.json", r#"{"n": 2, "gram": [[0,1],[1,0]], "l": [1,1], "m": [0,1], "c_X": 3}"#);
    assert_eq!(hk4(&["scenario", &not_isotropic]).status.code(), Some(3));
    let degenerate = write("b.json", r#"{"n": 2, "gram": [[0,1],[1,0]], "l": [1,0], "m": [1,0], "c_X": 3}"#);
    assert_eq!(hk4(&["scenario", &degenerate]).status.code(), Some(3));
    let schema = write("c.json", r#"{"n": 2, "gram": [[0,1],[1,0]], "l": [1,0]}"#);
    assert_eq!(hk4(&["scenario", &schema]).status.code(), Some(2));
    let asym = write("d.json", r#"{"n": 2, "gram": [[0,1],[2,0]], "l": [1,0], "m": [0,1], "c_X": 3}"#);
    assert_eq!(hk4(&["scenario", &asym]).status.code(), Some(2));
    assert_eq!(hk4(&["scenario", "/nonexistent/x.json"]).status.code(), Some(2));
    // a consistent lattice whose a matches no classifier solution
    let empty = write("e.json", r#"{"n": 2, "gram": [[0,1],[1,0]], "l": [1,0], "m": [0,1], "a": 2}"#);
    assert_eq!(hk4(&["scenario", &empty]).status.code(), Some(1));
}

#[test]
fn betti_data_override() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("betti.json");
    std::fs::write(&p, r#"[{"b2": 8, "b3": 12, "source": "test"}]"#).unwrap();
    let o = hk4(&["classify", "--a", "3", "--betti-data", p.to_str().unwrap(), "--json", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let opts = &v["solutions"][0]["betti_options"];
    assert_eq!(opts.as_array().unwrap().len(), 1);
    assert_eq!(opts[0]["b2"], 8);
    std::fs::write(&p, "not json").unwrap();
    assert_eq!(hk4(&["classify", "--a", "3", "--betti-data", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn ledger_dump() {
    let o = hk4(&["ledger"]);
    assert_eq!(o.status.code(), Some(0));
    let md = stdout(&o);
    assert!(md.contains("| 1 | 1 | 2 | 6 | Kodaira |"));
    assert!(md.contains("| 2 | 2 | 8 | 21 | Kawamata-Viehweg |"));
    assert!(md.contains("Mukai vector (2, 1H, 1), self-pairing -2"));
    let o = hk4(&["ledger", "--json", "-"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["segre"]["determinant"], 70785);
    assert_eq!(v["koszul"]["quadrics_lower_bound"], 8);
}

#[test]
fn divergence_exits_one() {
    let mut exp = Expectations::bundled();
    exp.checks.insert("segre".into(), serde_json::json!({"determinant": "1"}));
    let (r, _) = run_checks(&[CheckId::Segre], &exp, 1).unwrap();
    assert!(!r.all_passed());
    assert_eq!(r.checks["segre"].diffs, vec!["determinant: expected \"1\", got \"70785\""]);
}
