use std::path::Path;
use std::process::{Command, Output};

use newtpot::galerkin::MonotonicityReport;
use newtpot::scaling::{BallReport, SweepConfig, SmallRadiusReport};

fn newtpot(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newtpot")).current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn disc_spectrum_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let o = newtpot(dir.path(), &["disc-spectrum", "--a", "0.1", "--kmax", "3", "--jmax", "3", "--out", "spec.csv"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("spec.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,j,mu,lambda,int_normalized"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    // 17 significant digits
    let mu = rows[0].split(',').nth(2).unwrap();
    assert_eq!(mu.split('e').next().unwrap().replace('.', "").trim_start_matches('-').len(), 17);
    assert!(mu.parse::<f64>().is_ok());
}

#[test]
fn psi_samples_cover_the_interval() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&newtpot(dir.path(), &["psi-samples", "--a-log", "-20", "--xmax", "12", "--points", "1200"]));
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',').map(|v| v.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 1200);
    assert_eq!(rows[0], (0.0, 1.0));
    assert_eq!(rows[1199].0, 12.0);
    // Ψ_a changes sign between 0 and the first zero of J₀ for small a
    assert!(rows.iter().any(|r| r.1 < 0.0 && r.0 < 2.404));
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    for args in [
        &["disc-spectrum", "--a", "1.5"][..],
        &["disc-spectrum", "--a", "0.1", "--bogus"],
        &["disc-spectrum", "--a", "-0.1"],
        &["psi-samples", "--a-log", "-3", "--points", "1"],
        &["domain-spectrum", "--domain", r#"{"shape":"disc","center":[0,0],"radius":1,"extra":2}"#],
        &["domain-spectrum", "--domain", "missing.json"],
        &["ball-spectrum", "--a", "0.1", "--lmax", "300", "--jmax", "1"],
        &[
            "monotonicity",
            "--inner",
            r#"{"shape":"disc","center":[0,0],"radius":1}"#,
            "--outer",
            r#"{"shape":"disc","center":[0,0],"radius":0.5}"#,
        ],
    ] {
        let o = newtpot(p, args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
    let o = Command::new(env!("CARGO_BIN_EXE_newtpot"))
        .env("NEWTPOT_THREADS", "0")
        .args(["disc-spectrum", "--a", "0.1"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_config_matches_flags_and_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::create_dir(p.join("jobs")).unwrap();
    std::fs::write(
        p.join("jobs/disc.json"),
        r#"{"command":"disc-spectrum","params":{"a":0.2,"kmax":2,"jmax":2},"out":"disc.csv"}"#,
    )
    .unwrap();
    assert!(newtpot(p, &["run", "--config", "jobs/disc.json"]).status.success());
    let from_config = std::fs::read(p.join("jobs/disc.csv")).unwrap();
    let from_flags = newtpot(p, &["disc-spectrum", "--a", "0.2", "--kmax", "2", "--jmax", "2"]).stdout;
    assert_eq!(from_config, from_flags);

    std::fs::write(p.join("bad.json"), r#"{"command":"disc-spectrum","params":{"a":0.2},"verbose":true}"#).unwrap();
    assert_eq!(newtpot(p, &["run", "--config", "bad.json"]).status.code(), Some(2));
    std::fs::write(p.join("bad2.json"), r#"{"command":"sweep","params":{"sweep":"nope.json","colour":1}}"#).unwrap();
    assert_eq!(newtpot(p, &["run", "--config", "bad2.json"]).status.code(), Some(2));
}

#[test]
fn json_reports_reparse() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let mono = stdout(&newtpot(
        p,
        &[
            "monotonicity",
            "--inner",
            r#"{"shape":"polygon","vertices":[[-0.5,-0.5],[0.5,-0.5],[0.5,0.5],[-0.5,0.5]]}"#,
            "--outer",
            r#"{"shape":"disc","center":[0,0],"radius":0.75}"#,
            "--modes",
            "8",
            "--cells",
            "200",
        ],
    ));
    let rep: MonotonicityReport<f64> = serde_json::from_str(&mono).unwrap();
    assert_eq!(rep.modes.len(), 8);
    assert!(rep.all_pass);
    assert_eq!(serde_json::to_string_pretty(&rep).unwrap() + "\n", mono);

    let sweep = r#"{"family":{"kind":"disc"},"a_values":[0.05,0.007,0.0003,6e-6,2e-9],"count":3,"backend":"closed_form_disc"}"#;
    let t1 = stdout(&newtpot(p, &["sweep", "--sweep", sweep, "--report", "small-radius"]));
    let rep: SmallRadiusReport<f64> = serde_json::from_str(&t1).unwrap();
    assert!(rep.all_pass);
    assert_eq!(serde_json::to_string_pretty(&rep).unwrap() + "\n", t1);

    let ball = r#"{"family":{"kind":"ball"},"a_values":[1.0,0.5,0.1,0.02],"count":2,"backend":"closed_form_ball"}"#;
    let p2 = stdout(&newtpot(p, &["sweep", "--sweep", ball, "--report", "ball"]));
    let rep: BallReport<f64> = serde_json::from_str(&p2).unwrap();
    assert!(rep.all_pass);

    let rows = stdout(&newtpot(p, &["sweep", "--sweep", sweep]));
    assert!(rows.starts_with("a,n,quantity,value,fit_residual\n"));
    assert_eq!(rows.lines().count(), 1 + 5 * 3 * 3);
    let full = stdout(&newtpot(p, &["sweep", "--sweep", sweep, "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&full).unwrap();
    let cfg: SweepConfig<f64> = serde_json::from_value(v["config"].clone()).unwrap();
    assert_eq!(cfg.count, 3);

    let o = newtpot(p, &["sweep", "--sweep", sweep, "--report", "small-radius", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_documents_columns() {
    let dir = tempfile::tempdir().unwrap();
    let help = stdout(&newtpot(dir.path(), &["--help"]));
    for cols in ["k,j,mu,lambda,int_normalized", "a,n,quantity,value,fit_residual", "x,psi", "NEWTPOT_THREADS"] {
        assert!(help.contains(cols), "{cols}");
    }
}
