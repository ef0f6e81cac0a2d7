use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn boundfloq(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boundfloq"))
        .args(args)
        .current_dir(cwd)
        .env_remove("BOUNDFLOQ_OUT")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

const SMALL_QSL: &str = "omega0 = 0.1\ntau = 100.0\n[grid]\neta = [0.05, 0.2]\n";

#[test]
fn list_is_stable_and_names_the_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let a = boundfloq(&["list"], dir.path());
    let b = boundfloq(&["list"], dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for name in ["fig2-qsl", "fig5-fbs", "fig9-nhssh", "bound-state", "gap-closings"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from\n{text}");
    }
}

#[test]
fn empty_config_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.toml", "\n  \n");
    let o = boundfloq(&["run", "bound-state", "--config", &cfg], dir.path());
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(stderr(&o).contains("empty"));
    let broken = write(dir.path(), "broken.toml", "eta = [0.1,");
    assert_eq!(code(&boundfloq(&["run", "bound-state", "--config", &broken], dir.path())), 2);
}

#[test]
fn validation_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "typo.toml", "omega_0 = 0.1\n");
    let o = boundfloq(&["run", "bound-state", "--config", &cfg], dir.path());
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("omega_0"));

    let cfg = write(dir.path(), "unit.toml", "units.reference = \"omega0\"\n");
    let o = boundfloq(&["run", "bound-state", "--config", &cfg], dir.path());
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("units.reference"));

    let cfg = write(dir.path(), "grid.toml", "grid.eta = [0.2, 0.1]\n");
    assert_eq!(code(&boundfloq(&["run", "bound-state", "--config", &cfg], dir.path())), 3);

    let o = boundfloq(&["run", "fig10"], dir.path());
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("fig10"));
}

#[test]
fn numerical_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    // ω₀h = 0.6 is beyond what the amplitude solver accepts
    let cfg = write(dir.path(), "coarse.toml", "step = 0.6\n");
    let o = boundfloq(&["run", "amplitude", "--config", &cfg], dir.path());
    assert_eq!(code(&o), 4, "{}", stderr(&o));
    assert!(stderr(&o).contains("amplitude solve"));
}

#[test]
fn qsl_table_has_the_column_contract_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "qsl.toml", SMALL_QSL);
    let mut csvs = Vec::new();
    for (i, workers) in ["1", "2"].iter().enumerate() {
        let out = dir.path().join(format!("out{i}"));
        let o = boundfloq(
            &["run", "fig2-qsl", "--config", &cfg, "--out", out.to_str().unwrap(), "--workers", workers],
            dir.path(),
        );
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        csvs.push(fs::read(out.join("fig2-qsl/qsl.csv")).unwrap());
        assert!(out.join("fig2-qsl/plot.py").exists());
    }
    assert_eq!(csvs[0], csvs[1]);
    let text = String::from_utf8(csvs.remove(0)).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("eta,non_markovianity,qsl_ratio"));
    let etas: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(etas, ["0.05", "0.2"]);

    let summary: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("out0/fig2-qsl/summary.json")).unwrap()).unwrap();
    // defaults are recorded next to the overrides
    assert_eq!(summary["config"]["tau"], 100.0);
    assert_eq!(summary["config"]["step"], 0.05);
    assert_eq!(summary["config"]["units.reference"], "omega_c");
}

#[test]
fn default_output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_boundfloq"))
        .args(["run", "bound-state", "--no-plot"])
        .current_dir(dir.path())
        .env("BOUNDFLOQ_OUT", &target)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(target.join("bound-state/bound_state.csv").exists());
    assert!(!target.join("bound-state/plot.py").exists());
}

#[test]
fn sweep_flags_failing_points_and_keeps_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "b.toml", "grid.eta = [0.05, 0.2]\n");
    let mut tables = Vec::new();
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("w{workers}"));
        let o = boundfloq(
            &[
                "sweep", "bound-state", "--axis", "omega0=0.1,-0.1,0.15", "--config", &cfg, "--out",
                out.to_str().unwrap(), "--workers", workers,
            ],
            dir.path(),
        );
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let d = out.join("bound-state-sweep-omega0");
        tables.push((fs::read(d.join("sweep.csv")).unwrap(), fs::read(d.join("bound_state.csv")).unwrap()));
    }
    assert_eq!(tables[0], tables[1]);
    let sweep = String::from_utf8(tables[0].0.clone()).unwrap();
    let rows: Vec<&str> = sweep.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("0.1,ok,"));
    assert!(rows[1].starts_with("-0.1,failed,"));
    assert!(rows[1].contains("omega0"));
    assert!(rows[2].starts_with("0.15,ok,"));
}

#[test]
fn one_point_sweep_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&boundfloq(&["run", "bound-state", "--out", out], dir.path())), 0);
    assert_eq!(code(&boundfloq(&["sweep", "bound-state", "--axis", "omega0=0.1", "--out", out], dir.path())), 0);
    let run = fs::read_to_string(dir.path().join("bound-state/bound_state.csv")).unwrap();
    let swept = fs::read_to_string(dir.path().join("bound-state-sweep-omega0/bound_state.csv")).unwrap();
    let run_lines: Vec<&str> = run.lines().collect();
    let swept_lines: Vec<&str> = swept.lines().collect();
    assert_eq!(run_lines.len(), swept_lines.len());
    assert_eq!(swept_lines[0], format!("omega0,{}", run_lines[0]));
    for (a, b) in run_lines.iter().zip(&swept_lines).skip(1) {
        assert_eq!(*b, format!("0.1,{a}"));
    }
}

#[test]
fn sweep_rejects_bad_axes_and_zero_workers() {
    let dir = tempfile::tempdir().unwrap();
    let o = boundfloq(&["sweep", "bound-state", "--axis", "omega1=0.1:0.2:2"], dir.path());
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("omega1"));
    assert_eq!(code(&boundfloq(&["sweep", "bound-state", "--axis", "grid.eta=0.1:0.2:2"], dir.path())), 3);
    assert_eq!(code(&boundfloq(&["sweep", "bound-state", "--axis", "omega0=0.1:0.2"], dir.path())), 2);
    assert_eq!(code(&boundfloq(&["sweep", "bound-state", "--axis", "omega0=0.1", "--workers", "0"], dir.path())), 3);
}
