use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_residual"))
        .args(args)
        .env_remove("RESIDUAL_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn run_with_cache(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_residual"))
        .args(args)
        .env("RESIDUAL_CACHE_DIR", dir)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn enumerate_b2_unequal_json() {
    let o = run(&[
        "enumerate",
        "--type",
        "B2",
        "--params",
        "long=1,short=2",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["type"], "B2");
    assert_eq!(v["params"]["short"], "2/1");
    let orbits = v["orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), 5);
    for key in [
        "dim",
        "i",
        "o",
        "center",
        "direction_basis",
        "orbit_size",
        "parabolic_type",
        "witness_chain_dims",
    ] {
        assert!(orbits[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn enumerate_a1_at_zero_is_one_orbit() {
    let v = json(&run(&["enumerate", "--type", "A1", "--params", "all=0"]));
    assert_eq!(v["orbits"].as_array().unwrap().len(), 1);
}

#[test]
fn unknown_type_names_valid_types() {
    let o = run(&["enumerate", "--type", "Q9"]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("A1-A8") && err.contains("G2"), "{err}");
}

#[test]
fn config_errors_exit_one() {
    assert_eq!(
        code(&run(&["enumerate", "--type", "B2", "--params", "long=1"])),
        1
    );
    assert_eq!(code(&run(&["enumerate", "--type", "B2"])), 1);
    assert_eq!(
        code(&run(&["enumerate", "--type", "B2", "--params", "all=0.5"])),
        1
    );
    assert_eq!(
        code(&run(&[
            "verify", "--type", "A2", "--params", "all=1", "--checks", "T9"
        ])),
        1
    );
    assert_eq!(code(&run(&["no-such-command"])), 1);
    assert_eq!(code(&run(&["plancherel", "--q", "-1"])), 1);
}

#[test]
fn flat_cap_exits_two() {
    let o = run(&[
        "enumerate",
        "--type",
        "B3",
        "--params",
        "all=1",
        "--max-flats",
        "10",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_g2_passes() {
    let o = run(&["verify", "--type", "G2", "--params", "long=1,short=1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_subset_with_oracle() {
    let o = run(&[
        "verify", "--type", "A2", "--params", "all=1", "--checks", "T2", "--oracle",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["checks"].as_array().unwrap().len(), 1);
    assert_eq!(v["oracle"]["identical"], true);
    assert_eq!(v["oracle"]["oracle_flats"], 13);
}

#[test]
fn scan_b2_is_piecewise_constant() {
    let o = run(&["scan", "--type", "B2", "--ratios", "1/4,1/2,1,2,4"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let totals: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["total"].as_u64().unwrap())
        .collect();
    assert_eq!(totals, vec![5, 4, 4, 5, 5]);
}

#[test]
fn dynkin_a2() {
    let o = run(&["dynkin", "--type", "A2", "--format", "text"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.contains("diagram (2,2)"), "{s}");
    assert!(s.contains("counts (1,3)"), "{s}");
    let dot = run(&["dynkin", "--type", "G2", "--format", "dot"]);
    assert!(String::from_utf8_lossy(&dot.stdout).starts_with("graph \"G2\""));
}

#[test]
fn plancherel_q2_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("density.csv");
    let o = run(&["plancherel", "--q", "2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let mass = v["point_masses"][0]["mass"].as_f64().unwrap();
    assert!((mass - 1.0 / 3.0).abs() < 1e-10);
    assert_eq!(v["point_masses"][0]["t"], "q^-1");
    assert!((v["total"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 1025);

    let dec = json(&run(&["plancherel", "--q", "0.5"]));
    assert_eq!(dec["q"], "1/2");
}

#[test]
fn diff_oracle_b3() {
    let o = run(&[
        "diff-oracle",
        "--type",
        "B3",
        "--params",
        "long=1,short=1/3",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["identical"], true);
}

#[test]
fn output_identical_across_threads_and_runs() {
    let args = |t: &'static str| {
        vec![
            "--threads",
            t,
            "enumerate",
            "--type",
            "C3",
            "--params",
            "long=1,short=1/2",
        ]
    };
    let a = run(&args("1")).stdout;
    let b = run(&args("4")).stdout;
    let c = run(&args("4")).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
    assert_eq!(b, c);
}

#[test]
fn cache_hit_matches_cold_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "enumerate",
        "--type",
        "B3",
        "--params",
        "long=1,short=2",
        "--format",
        "csv",
    ];
    let cold = run(&args).stdout;
    let first = run_with_cache(&args, dir.path());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let hit = run_with_cache(&args, dir.path());
    assert_eq!(code(&hit), 0);
    assert_eq!(cold, first.stdout);
    assert_eq!(cold, hit.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.json");
    let o = run(&[
        "enumerate",
        "--type",
        "A2",
        "--params",
        "all=1",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    assert_eq!(v["orbits"].as_array().unwrap().len(), 3);
}
