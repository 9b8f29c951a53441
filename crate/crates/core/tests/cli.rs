use std::path::Path;
use std::process::{Command, Output};

use xi_audit::report::AuditReport;
use xi_audit::zeros::ZeroCache;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xi-audit"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn zeros_table_and_cache_reuse() {
    let dir = tempfile::tempdir().unwrap();
    let first = run(dir.path(), &["zeros", "--t-max", "30"]);
    assert_eq!(code(&first), 0);
    let text = String::from_utf8(first.stdout.clone()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,gamma,abs_err");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,14.1347251417347,"));

    let cache_path = dir.path().join("zeros.csv");
    let cached = ZeroCache::load(&cache_path).unwrap();
    assert_eq!(cached.zeros.len(), 3);
    let stamp = std::fs::metadata(&cache_path).unwrap().modified().unwrap();

    let second = run(dir.path(), &["zeros", "--t-max", "30"]);
    assert_eq!(code(&second), 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::metadata(&cache_path).unwrap().modified().unwrap(), stamp);

    // a smaller request is served from the same cache
    let third = run(dir.path(), &["zeros", "--t-max", "22"]);
    assert_eq!(String::from_utf8(third.stdout).unwrap().lines().count(), 3);
}

#[test]
fn zeros_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["zeros", "--t-max", "26", "--format", "json", "--out", "z.json"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("z.json")).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(v[0]["n"], 1);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["zeros", "--t-max", "-1"][..],
        &["zeros", "--tol", "0"],
        &["zeros", "--t-max", "abc"],
        &["audit", "eq7"],
        &["audit", "eq5", "--format", "xml"],
        &["audit", "carlson", "--m", "0"],
        &["zeros", "--threads", "0"],
        &["plot", "xi-critical", "--t", "5:5"],
        &["plot", "xi-critical", "--t", "9:2"],
        &["plot", "xi-critical", "--t", "nonsense"],
        &["frobnicate"],
        &[],
    ] {
        assert_eq!(code(&run(dir.path(), args)), 2, "{args:?}");
    }
    assert_eq!(code(&run(dir.path(), &["--help"])), 0);
    assert_eq!(code(&run(dir.path(), &["--version"])), 0);
}

#[test]
fn config_file_is_flat_and_strict() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("ok.conf"), "# small run\nt_max = 26\nformat = json\n").unwrap();
    let o = run(dir.path(), &["zeros", "--config", "ok.conf"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);

    // the flag wins over the file
    let o = run(dir.path(), &["zeros", "--config", "ok.conf", "--t-max", "22"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);

    std::fs::write(dir.path().join("bad.conf"), "t_max = 26\nspeed = 11\n").unwrap();
    assert_eq!(code(&run(dir.path(), &["zeros", "--config", "bad.conf"])), 2);
    assert_eq!(code(&run(dir.path(), &["zeros", "--config", "missing.conf"])), 2);
}

#[test]
fn corrupt_cache_exits_3_and_survives() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(dir.path(), &["zeros", "--t-max", "30"])), 0);
    let path = dir.path().join("zeros.csv");
    let good = std::fs::read_to_string(&path).unwrap();
    let broken = good.replacen("21.0220396387714", "21.0220396387715", 1);
    assert_ne!(good, broken);
    std::fs::write(&path, &broken).unwrap();
    let o = run(dir.path(), &["zeros", "--t-max", "30"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), broken);

    std::fs::write(&path, "no header\n").unwrap();
    assert_eq!(code(&run(dir.path(), &["audit", "eq5"])), 3);
}

#[test]
fn coincidence_perturbation_fails_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(dir.path(), &["audit", "coincidence"]);
    assert_eq!(code(&ok), 0);
    let r: Vec<AuditReport> = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(r[0].verdict.as_str(), "COINCIDE");

    let bad = run(dir.path(), &["audit", "coincidence", "--perturb", "0.01"]);
    assert_eq!(code(&bad), 1);
    let r: Vec<AuditReport> = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(r[0].verdict.as_str(), "DISTINCT");
    assert_eq!(r[0].params["perturb"], "0.01");
}

#[test]
fn eq5_report_states_both_hypotheses() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["audit", "eq5", "--t-max", "30"]);
    assert_eq!(code(&o), 0);
    let r: Vec<AuditReport> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r[0].name, "eq5_norm_integral");
    assert_eq!(r[0].verdict.as_str(), "CONSISTENT_UP_TO_CONSTANT");
    let c: f64 = r[0].params["common_constant"].parse().unwrap();
    assert!((c - 4.0).abs() < 1e-9);
    assert_eq!(r[0].params["hypothesis_1_8_holds"], "false");
    assert_eq!(r[0].params["hypothesis_1_2_holds"], "true");
    assert_eq!(r[1].name, "coupling_spectrum");
    assert_eq!(r[1].measured.len(), 3);
}

#[test]
fn audit_output_is_thread_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let one = run(dir.path(), &["audit", "hadamard", "--n-zeros", "200", "--threads", "1"]);
    let four = run(dir.path(), &["audit", "hadamard", "--n-zeros", "200", "--threads", "4"]);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn csv_reports_and_markdown_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["audit", "carlson", "--format", "csv", "--out", "c.csv"]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert!(csv.starts_with("name,verdict,"));
    assert!(csv.contains("carlson_sharpness_sin,PASS"));

    assert_eq!(code(&run(dir.path(), &["audit", "eq9", "--out", "e.json"])), 0);
    let md = run(dir.path(), &["report", "e.json"]);
    assert_eq!(code(&md), 0);
    let text = String::from_utf8(md.stdout).unwrap();
    assert!(text.contains("| eq9_log_linear | NOT_APPLICABLE |"));
    assert!(text.ends_with("1 reports: 1 NOT_APPLICABLE\n"));

    std::fs::write(dir.path().join("junk.json"), "{\"name\": 3}").unwrap();
    assert_eq!(code(&run(dir.path(), &["report", "junk.json"])), 2);
}

#[test]
fn summary_lines_have_no_colour_outside_a_terminal() {
    let dir = tempfile::tempdir().unwrap();
    for no_color in [None, Some("1")] {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_xi-audit"));
        cmd.current_dir(dir.path()).args(["audit", "eq9"]);
        if let Some(v) = no_color {
            cmd.env("NO_COLOR", v);
        } else {
            cmd.env_remove("NO_COLOR");
        }
        let o = cmd.output().unwrap();
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains("eq9_log_linear") && !err.contains('\x1b'));
    }
}

/// Counts sign changes of the plotted curve relative to the dashed zero line.
fn crossings(svg: &str) -> usize {
    let zero_y: f64 = svg
        .lines()
        .find(|l| l.contains("stroke-dasharray"))
        .and_then(|l| l.split("y1=\"").nth(1))
        .and_then(|s| s.split('"').next())
        .and_then(|s| s.parse().ok())
        .expect("zero line");
    let points = svg
        .lines()
        .find(|l| l.starts_with("<polyline"))
        .and_then(|l| l.split("points=\"").nth(1))
        .and_then(|s| s.split('"').next())
        .expect("polyline");
    let ys: Vec<f64> = points
        .split(' ')
        .map(|p| p.split(',').nth(1).unwrap().parse::<f64>().unwrap() - zero_y)
        .filter(|d| *d != 0.0)
        .collect();
    ys.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
}

#[test]
fn plots_are_deterministic_svg() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), &["plot", "xi-critical", "--t", "0:30"]);
    let b = run(dir.path(), &["plot", "xi-critical", "--t", "0:30"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    assert_eq!(crossings(&svg), 3);

    for target in ["eq5-ratio", "product-convergence", "residuals"] {
        let out = format!("{target}.svg");
        let o = run(dir.path(), &["plot", target, "--n-zeros", "200", "--out", &out]);
        assert_eq!(code(&o), 0, "{target}");
        let svg = std::fs::read_to_string(dir.path().join(&out)).unwrap();
        assert!(svg.contains("<polyline"), "{target}");
    }
}
