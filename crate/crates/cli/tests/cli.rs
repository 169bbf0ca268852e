//! End-to-end runs of the `arena-sde` binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_arena-sde"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn regime_reports_for_both_noise_levels() {
    let dir = tempfile::tempdir().unwrap();
    let noisy = write_config(dir.path(), "noisy.txt", "sigma1 = 1.5\nsigma2 = 1.3\n");
    let o = run(&["--config", &noisy, "regime", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["regime"]["tag"], "PreyExtinction");
    assert!((v["regime"]["phi"].as_f64().unwrap() - 2.7056).abs() < 1e-4);
    assert_eq!(v["novikov"]["satisfied"], false);

    let o = run(&["regime", "--json"]);
    let v = json(&o);
    assert_eq!(v["regime"]["tag"], "PredatorExtinction");
    assert!((v["regime"]["phi"].as_f64().unwrap() - 1.2611).abs() < 1e-4);
    assert!((v["prey_stationary"]["shape"].as_f64().unwrap() - 7.0).abs() < 1e-12);

    let text = stdout(&run(&["regime"]));
    assert!(text.starts_with("regime:               PredatorExtinction"));
}

#[test]
fn boundary_parameters_are_unclassified() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "edge.txt", "a1 = 0.125\nsigma1 = 0.5\n");
    let v = json(&run(&["--config", &cfg, "regime", "--json"]));
    assert_eq!(v["regime"]["tag"], "Unclassified");
}

#[test]
fn json_config_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"sigma1": 1.5, "sigma2": 1.3}"#);
    let v = json(&run(&["--config", &cfg, "regime", "--json"]));
    assert_eq!(v["params"]["sigma1"], 1.5);
}

#[test]
fn config_errors_point_at_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.txt",
        "sigma1 = 0.5\nsigma2 = 0.3\nbeta 5\n",
    );
    let o = run(&["--config", &cfg, "regime"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.txt",
        "horizon = 2\nn_paths = 1\nseed_base = 17\n",
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&["--config", &cfg, "--out", out.to_str().unwrap(), "simulate"]);
        assert!(o.status.success());
    }
    let read = |d: &Path| std::fs::read(d.join("bundle_path0000.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn figure2_preset_writes_every_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "f.txt",
        "horizon = 1\nn_paths = 2\nstride = 100\n",
    );
    let out = dir.path().join("fig");
    let o = run(&[
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "simulate",
        "--figure2",
    ]);
    assert!(o.status.success());
    let mut names: Vec<String> = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "figure2_deterministic_path0000.csv",
            "figure2_sigma_0.5_0.3_path0000.csv",
            "figure2_sigma_0.5_0.3_path0001.csv",
            "figure2_sigma_1.5_1.3_path0000.csv",
            "figure2_sigma_1.5_1.3_path0001.csv",
        ]
    );
}

/// Classical fourth-order Runge-Kutta for the noiseless system.
fn rk4(x0: f64, y0: f64, t_end: f64, h: f64) -> Vec<(f64, f64, f64)> {
    let (a1, b1, c1, a2, b2, c2, beta) = (1.0, 0.1, 6.0, 2.0, 0.5, 0.9, 5.0);
    let f = |x: f64, y: f64| {
        (
            x * (a1 - b1 * x) - c1 * x * y / (beta + y),
            y * (-a2 - b2 * y) + c2 * x * y / (beta + y),
        )
    };
    let n = (t_end / h).round() as usize;
    let (mut x, mut y) = (x0, y0);
    let mut out = vec![(0.0, x, y)];
    for i in 1..=n {
        let k1 = f(x, y);
        let k2 = f(x + 0.5 * h * k1.0, y + 0.5 * h * k1.1);
        let k3 = f(x + 0.5 * h * k2.0, y + 0.5 * h * k2.1);
        let k4 = f(x + h * k3.0, y + h * k3.1);
        x += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        y += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        out.push((i as f64 * h, x, y));
    }
    out
}

#[test]
fn noiseless_run_matches_ode() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "det.txt",
        "sigma1 = 0\nsigma2 = 0\nhorizon = 5\ndt = 1e-4\nstride = 1000\n",
    );
    let out = dir.path().join("det");
    let o = run(&["--config", &cfg, "--out", out.to_str().unwrap(), "simulate"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out.join("bundle_path0000.csv")).unwrap();
    let reference = rk4(2.0, 1.5, 5.0, 1e-4);
    let mut rows = 0;
    for line in text.lines().skip(2) {
        let cols: Vec<f64> = line
            .split(',')
            .take(3)
            .map(|c| c.parse().unwrap())
            .collect();
        let idx = (cols[0] / 1e-4).round() as usize;
        let (_, x, y) = reference[idx];
        assert!(
            (cols[1] - x).abs() <= 1e-3 * x,
            "t={}: X {} vs {x}",
            cols[0],
            cols[1]
        );
        assert!(
            (cols[2] - y).abs() <= 1e-3 * y,
            "t={}: Y {} vs {y}",
            cols[0],
            cols[2]
        );
        rows += 1;
    }
    assert_eq!(rows, 51);
}

fn bounds_csv(args: &[&str]) -> Vec<Vec<String>> {
    let o = run(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let body = text
        .strip_prefix("# schema: arena-sde/bounds/v1\n")
        .expect("schema line");
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn trivial_moment_and_out_of_domain_rows() {
    let rows = bounds_csv(&["bounds", "--t", "1", "--moment", "0,0", "--moment", "1,1"]);
    // quantity,p,q,z1,z2,t,lower,upper,err_lo,err_hi,regime_tag,validity_warning,
    // k2_variant,mc_estimate,mc_std_err,mc_verdict
    let zero = &rows[0];
    assert_eq!(
        (zero[0].as_str(), zero[6].as_str(), zero[7].as_str()),
        ("moment", "1.0", "1.0")
    );
    let joint = &rows[1];
    assert_eq!(joint[7], "");
    assert!(joint[11].contains("out-of-domain"), "{joint:?}");
    assert_eq!(joint[12], "as-printed");
}

#[test]
fn validate_mc_adds_a_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "mc.txt", "mc_paths = 2000\n");
    let rows = bounds_csv(&[
        "--config",
        &cfg,
        "--k2-variant",
        "corrected",
        "bounds",
        "--t",
        "1",
        "--moment",
        "1,0",
        "--validate-mc",
    ]);
    for row in &rows {
        assert!(!row[13].is_empty(), "{row:?}");
        assert_eq!(row[15], "inside", "{row:?}");
        assert_eq!(row[12], "corrected");
    }
}

#[test]
fn injected_fault_fails_validation() {
    let o = run(&["validate", "--quick", "--inject-fault", "flip-envelope"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["passed"], false);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 9);
    assert_eq!(checks[0]["name"], "envelope-containment");
    assert_eq!(checks[0]["passed"], false);
    assert!(String::from_utf8_lossy(&o.stderr).contains("envelope-containment"));
}
