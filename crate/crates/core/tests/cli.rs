use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpll-growth")).args(args).current_dir(dir).output().expect("spawn")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = bin(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn gen_then_solve() {
    let d = tempfile::tempdir().unwrap();
    ok(&["gen", "-n", "30", "-a", "6", "-s", "4", "-o", "i.cnf"], d.path());
    assert!(fs::read_to_string(d.path().join("i.cnf")).unwrap().starts_with("p cnf 30 180"));
    let r = json(&ok(&["solve", "-i", "i.cnf", "--heuristic", "UC", "-s", "2"], d.path()));
    assert_eq!(r["n_vars"], 30);
    assert_eq!(r["heuristic"], "UC");
    assert_eq!(r["cloud"].as_array().unwrap().len() as u64, r["q_splits"].as_u64().unwrap());
    let again = json(&ok(&["solve", "-i", "i.cnf", "--heuristic", "UC", "-s", "2"], d.path()));
    assert_eq!(r, again);
}

#[test]
fn oracle_with_dump() {
    let d = tempfile::tempdir().unwrap();
    let r = json(&ok(&["oracle", "--example", "3", "--dump", "op.csv"], d.path()));
    assert_eq!(r["t_star"], 2);
    assert_eq!(r["b_star"], "12/5");
    let dump = fs::read_to_string(d.path().join("op.csv")).unwrap();
    assert!(dump.starts_with("row,col,numerator,denominator\n"));
    assert_eq!(dump.lines().count() as u64, r["nnz"].as_u64().unwrap() + 1);
    assert!(dump.lines().all(|l| l.split(',').count() == 4));
}

#[test]
fn ensemble_flags_override_config() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("e.kv"), "schema_version = 1\nalpha0 = 9\nn_values = 20, 30, 40\ntrials_per_n = 3\nbase_seed = 5\n").unwrap();
    let cfg = ok(&["ensemble", "-c", "e.kv", "--trials-per-n", "20", "--print-config"], d.path());
    assert!(cfg.contains("trials_per_n = 20") && cfg.contains("alpha0 = 9"));
    let r = json(&ok(&["ensemble", "-c", "e.kv", "--trials-per-n", "20", "--csv", "r.csv", "--output-path", "r.jsonl"], d.path()));
    assert!(r["estimate"]["omega"].as_f64().unwrap() > 0.0);
    assert_eq!(fs::read_to_string(d.path().join("r.csv")).unwrap().lines().count(), 61);
    assert_eq!(fs::read_to_string(d.path().join("r.jsonl")).unwrap().lines().count(), 60);
    let short = json(&ok(&["ensemble", "-c", "e.kv"], d.path()));
    assert!(short["estimate"]["error"].as_str().unwrap().contains("trials"));
}

#[test]
fn errors_exit_nonzero() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("bad.cnf"), "p cnf 2 1\n1 3 0\n").unwrap();
    for args in [
        &["solve", "-i", "bad.cnf"][..],
        &["solve"],
        &["ensemble", "--n-values", "30,20"],
        &["oracle", "--example", "9"],
        &["pde", "--heuristic", "SC1"],
        &["report", "nonsense"],
    ] {
        let out = bin(args, d.path());
        assert!(!out.status.success(), "{args:?} succeeded");
        assert!(!out.stderr.is_empty());
    }
    fs::write(d.path().join("v2.kv"), "schema_version = 2\n").unwrap();
    let out = bin(&["ensemble", "-c", "v2.kv"], d.path());
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema_version"));
}

#[test]
fn analytic_subcommands_write_documented_headers() {
    let d = tempfile::tempdir().unwrap();
    let r = json(&ok(&["ode", "--alpha0", "3.5", "--find-g", "--trajectory", "t.csv", "--line-csv", "l.csv"], d.path()));
    assert!(r["g"]["p_g"].as_f64().is_some());
    let head = |f: &str| fs::read_to_string(d.path().join(f)).unwrap().lines().next().unwrap().to_string();
    assert_eq!(head("t.csv"), "t,c2,c3,p,alpha,rho1");
    assert_eq!(head("l.csv"), "p,alpha_c");
    let r = json(&ok(&["pde", "--alpha0", "10", "--series", "s.csv"], d.path()));
    assert!((r["halt"]["omega_bits"].as_f64().unwrap() - 0.0323).abs() < 0.0015);
    assert_eq!(head("s.csv"), "t,omega_nats,omega_bits,c2,c3,p,alpha,rho_split");
    ok(&["annealed", "-n", "12", "--curve", "m.csv"], d.path());
    assert_eq!(head("m.csv"), "T,total_mass,mean_c2,mean_c3");
}

#[test]
fn reports() {
    let d = tempfile::tempdir().unwrap();
    let files = ok(&["report", "cloud", "--alpha0", "7", "-n", "60", "--out-dir", "out"], d.path());
    assert_eq!(files.lines().count(), 1);
    let files = ok(&["report", "table1", "--alpha0", "10,20", "--out-dir", "out"], d.path());
    let table = fs::read_to_string(d.path().join(files.trim())).unwrap();
    assert!(table.starts_with("alpha0,omega_exp,omega_exp_err,omega_the,asymptote"));
    assert_eq!(table.lines().count(), 3);
}
