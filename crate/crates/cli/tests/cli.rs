use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_complex::Complex64;
use qpfb::*;
use serde_json::Value;
use tempfile::TempDir;

fn qpfb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpfb"))
        .args(args)
        .output()
        .unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn signal_csv(points: &[f64], f: impl Fn(f64) -> Complex64) -> String {
    let mut body = String::from("s,re,im\n");
    for &x in points {
        let v = f(x);
        body += &format!("{x:.16e},{:.16e},{:.16e}\n", v.re, v.im);
    }
    body
}

/// Rows of a `x,re,im` CSV.
fn read_samples(path: &Path) -> Vec<(f64, Complex64)> {
    let mut reader = csv::Reader::from_path(path).unwrap();
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            let f = |i: usize| r[i].parse::<f64>().unwrap();
            (f(0), Complex64::new(f(1), f(2)))
        })
        .collect()
}

fn read_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(|r| r.unwrap())
        .collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn zero_signal_gives_zero_output() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "zero.csv",
        &signal_csv(&[0.0, 1.0, 2.0, 3.0], |_| Complex64::new(0.0, 0.0)),
    );
    let out = dir.path().join("out.csv");
    let run = qpfb(&["transform", "--input", s(&input), "--out", s(&out)]);
    assert!(run.status.success(), "{}", stderr(&run));
    let rows = read_samples(&out);
    assert_eq!(rows.len(), 121);
    assert!(rows.iter().all(|(_, v)| v.norm() == 0.0));
}

#[test]
fn gaussian_csv_matches_library_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let grid = RadialGrid::uniform(0.0, 12.0, 241).unwrap();
    let h = TestSignal::gaussian(0.5);
    let input = write(&dir, "g.csv", &signal_csv(grid.points(), |x| h.eval(x)));
    let out = dir.path().join("out.csv");
    let run = qpfb(&[
        "transform",
        "--input",
        s(&input),
        "--param",
        "a=0,b=1,c=0,d=0,e=0,gamma=0",
        "--out",
        s(&out),
    ]);
    assert!(run.status.success(), "{}", stderr(&run));

    // the library sees exactly what the CLI parsed
    let parsed: Vec<Complex64> = grid
        .points()
        .iter()
        .map(|&x| {
            let v = h.eval(x);
            let round = |y: f64| format!("{y:.16e}").parse::<f64>().unwrap();
            Complex64::new(round(v.re), round(v.im))
        })
        .collect();
    let signal = Signal::new(grid, parsed).unwrap();
    let p = QpfbParams::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
    let rule = build_rule(p.order(), 12.0, 64, 16).unwrap();
    let want = forward(
        &p,
        &signal,
        &RadialGrid::uniform(0.0, 12.0, 121).unwrap(),
        &rule,
    )
    .unwrap();

    let got = read_samples(&out);
    for ((t, v), (&tw, w)) in got
        .iter()
        .zip(want.grid().points().iter().zip(want.values()))
    {
        assert_eq!(*t, tw);
        assert_eq!(v, w);
    }
    // and the transform of the Gaussian is (1/i) e^{-t²/2}
    for (t, v) in got {
        assert!((v - Complex64::new(0.0, -(-0.5 * t * t).exp())).norm() < 1e-6);
    }
}

#[test]
fn metadata_records_params_resolution_and_prefactor() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "c.json",
        r#"{"signal": {"kind": "gaussian", "alpha": 0.5}}"#,
    );
    let out = dir.path().join("out.csv");
    let run = qpfb(&[
        "transform",
        "--config",
        s(&config),
        "--param",
        "b=2,gamma=0.5",
        "--out",
        s(&out),
    ]);
    assert!(run.status.success(), "{}", stderr(&run));
    let meta = json(&dir.path().join("out.csv.json"));
    assert_eq!(meta["command"], "transform");
    assert_eq!(meta["params"]["b"].as_f64(), Some(2.0));
    assert_eq!(meta["params"]["gamma"].as_f64(), Some(0.5));
    assert_eq!(meta["params"]["a"].as_f64(), Some(0.5));
    assert_eq!(meta["resolution"]["panels"], 64);
    assert_eq!(meta["resolution"]["nodes_per_panel"], 16);
    let p = QpfbParams::new(0.5, 2.0, -0.3, 0.2, 0.1, 0.5).unwrap();
    assert_eq!(meta["prefactor"]["re"].as_f64(), Some(p.prefactor().re));
    assert_eq!(meta["prefactor"]["im"].as_f64(), Some(p.prefactor().im));
}

#[test]
fn named_signal_matches_library() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "c.json",
        r#"{"signal": {"kind": "power-gaussian", "k": 1, "alpha": 1.0},
            "output_grid": {"start": 0.0, "end": 6.0, "count": 13}}"#,
    );
    let out = dir.path().join("out.csv");
    let run = qpfb(&["transform", "--config", s(&config), "--out", s(&out)]);
    assert!(run.status.success(), "{}", stderr(&run));
    let p = QpfbParams::new(0.5, 1.0, -0.3, 0.2, 0.1, 0.0).unwrap();
    let rule = build_rule(p.order(), 12.0, 64, 16).unwrap();
    let grid = RadialGrid::uniform(0.0, 6.0, 13).unwrap();
    let want = forward(&p, &TestSignal::power_gaussian(1, 1.0), &grid, &rule).unwrap();
    let got: Vec<Complex64> = read_samples(&out).into_iter().map(|(_, v)| v).collect();
    assert_eq!(got, want.values());
}

#[test]
fn inverse_undoes_transform() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "c.json",
        r#"{"signal": {"kind": "gaussian", "alpha": 0.5},
            "params": {"a": 0.5, "b": 1.0, "c": -0.3, "d": 0.0, "e": 0.1, "gamma": 0.5},
            "output_grid": {"start": 0.0, "end": 12.0, "count": 481}}"#,
    );
    let spectrum = dir.path().join("spectrum.csv");
    let run = qpfb(&["transform", "--config", s(&config), "--out", s(&spectrum)]);
    assert!(run.status.success(), "{}", stderr(&run));
    let back = dir.path().join("back.csv");
    let run = qpfb(&[
        "inverse",
        "--config",
        s(&config),
        "--input",
        s(&spectrum),
        "--out",
        s(&back),
    ]);
    assert!(run.status.success(), "{}", stderr(&run));
    assert_eq!(
        json(&dir.path().join("back.csv.json"))["command"],
        "inverse"
    );
    let h = TestSignal::gaussian(0.5);
    let worst = read_samples(&back)
        .into_iter()
        .map(|(x, v)| (v - h.eval(x)).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-5, "{worst}");
}

#[test]
fn malformed_rows_name_the_line() {
    let dir = TempDir::new().unwrap();
    for (body, line) in [
        ("s,re,im\n0,1,0\n0.5,abc,0\n", "line 3"),
        ("s,re,im\n0,1,0\n0.5,1,0\n1.0,1\n", "line 4"),
        ("s,re,im\n0,1,0\n0.5,1,0\n0.25,1,0\n", "line 4"),
        ("x,y\n0,1\n", "line 1"),
    ] {
        let input = write(&dir, "bad.csv", body);
        let run = qpfb(&["transform", "--input", s(&input)]);
        assert_eq!(run.status.code(), Some(2));
        assert!(stderr(&run).contains(line), "{}", stderr(&run));
    }
}

#[test]
fn invalid_parameters_exit_2_with_constraint() {
    let run = qpfb(&["verify", "parseval", "--param", "gamma=-1"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("gamma > -1/2"), "{}", stderr(&run));

    let run = qpfb(&["transform", "--param", "b=0"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("b must be nonzero"));

    let run = qpfb(&["verify", "parseval", "--param", "f=1"]);
    assert_eq!(run.status.code(), Some(2));
    let run = qpfb(&["verify", "nonsense"]);
    assert_eq!(run.status.code(), Some(2));
    let run = qpfb(&["transform"]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("no input"));
}

#[test]
fn config_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let unknown = write(&dir, "u.json", r#"{"truncaton": 4}"#);
    let run = qpfb(&["verify", "parseval", "--config", s(&unknown)]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("truncaton"));

    let broken = write(&dir, "b.json", "{\n\"truncation\": ,\n}");
    let run = qpfb(&["verify", "parseval", "--config", s(&broken)]);
    assert_eq!(run.status.code(), Some(2));
    assert!(stderr(&run).contains("line 2"));

    let run = qpfb(&["verify", "parseval", "--panels", "0"]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn flags_override_file_override_defaults() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "c.json",
        r#"{"truncation": 8.0, "panels": 40, "params": {"gamma": 0.5, "a": 0.25},
            "signal": {"kind": "gaussian", "alpha": 1.0}}"#,
    );
    let out = dir.path().join("out.csv");
    let run = qpfb(&[
        "transform",
        "--config",
        s(&config),
        "--truncation",
        "6",
        "--param",
        "a=0",
        "--out",
        s(&out),
    ]);
    assert!(run.status.success(), "{}", stderr(&run));
    let meta = json(&dir.path().join("out.csv.json"));
    assert_eq!(meta["resolution"]["radius"].as_f64(), Some(6.0));
    assert_eq!(meta["resolution"]["panels"], 40);
    assert_eq!(meta["resolution"]["nodes_per_panel"], 16);
    assert_eq!(meta["params"]["a"].as_f64(), Some(0.0));
    assert_eq!(meta["params"]["gamma"].as_f64(), Some(0.5));
    assert_eq!(meta["params"]["c"].as_f64(), Some(-0.3));
    // output grid follows the resolved truncation
    assert_eq!(meta["output_grid"]["end"].as_f64(), Some(6.0));
}

#[test]
fn help_documents_precedence() {
    let run = qpfb(&["verify", "--help"]);
    assert!(run.status.success());
    let text = String::from_utf8_lossy(&run.stdout);
    assert!(text.contains("A flag always wins over the file"));
    assert!(text.contains("--truncation"));
}

#[test]
fn verify_parseval_default_passes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let run = qpfb(&["verify", "parseval", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
    let report = json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn verify_all_reports_every_check() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let run = qpfb(&["verify", "all", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
    let report = json(&out);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 12);
    let mut names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    for c in checks {
        for key in ["lhs", "rhs", "tolerance", "relation", "pass"] {
            assert!(!c[key].is_null(), "{key} missing in {c}");
        }
        let res = c["resolution"].as_array().unwrap();
        assert!(!res.is_empty() && res.iter().all(|r| r["panels"].as_u64().unwrap() > 0));
    }
    for suite in [
        "parseval.",
        "roundtrip.",
        "translation.",
        "young.",
        "donoho-stark.",
    ] {
        assert!(names.iter().any(|n| n.starts_with(suite)), "{suite}");
    }
    names.dedup();
    assert_eq!(names.len(), checks.len());
    assert!(stderr(&run).contains("passed"));
}

#[test]
fn failing_check_exits_1() {
    // two panels cannot resolve the kernel, so Plancherel fails
    let run = qpfb(&["verify", "parseval", "--panels", "2", "--nodes", "4"]);
    assert_eq!(run.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(report["pass"], false);
    assert!(stderr(&run).contains("FAIL"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "c.json",
        r#"{"signal": {"kind": "gaussian", "alpha": 0.5}, "sweep": {"m_radii": [1, 2], "n_radii": [1, 3]}}"#,
    );
    let mut previous: Option<(Vec<u8>, Vec<u8>, Vec<u8>)> = None;
    for round in 0..2 {
        let t = dir.path().join(format!("t{round}.csv"));
        let w = dir.path().join(format!("w{round}.csv"));
        assert!(qpfb(&["transform", "--config", s(&config), "--out", s(&t)])
            .status
            .success());
        assert!(qpfb(&["sweep", "--config", s(&config), "--out", s(&w)])
            .status
            .success());
        let now = (
            fs::read(&t).unwrap(),
            fs::read(dir.path().join(format!("t{round}.csv.json"))).unwrap(),
            fs::read(&w).unwrap(),
        );
        if let Some(prev) = &previous {
            assert_eq!(prev, &now);
        }
        previous = Some(now);
    }
}

#[test]
fn single_instance_sweep_equals_library() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "c.json",
        r#"{"params": {"a": 0.2, "b": 1.5, "c": 0.0, "d": -0.1, "e": 0.0, "gamma": 0.5},
            "sweep": {"m_sets": [[[0.0, 1.0], [2.0, 3.0]]], "n_radii": [2.5],
                      "signal": {"kind": "gaussian", "alpha": 1.0}}}"#,
    );
    let out = dir.path().join("w.csv");
    let run = qpfb(&["sweep", "--config", s(&config), "--out", s(&out)]);
    assert!(run.status.success(), "{}", stderr(&run));
    let rows = read_rows(&out);
    assert_eq!(rows.len(), 1);
    let row = &rows[0];

    let p = QpfbParams::new(0.2, 1.5, 0.0, -0.1, 0.0, 0.5).unwrap();
    let rules = RulePair::symmetric(build_rule(p.order(), 12.0, 64, 16).unwrap());
    let m = MeasurableSet::new(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap();
    let n = MeasurableSet::interval(0.0, 2.5).unwrap();
    let r = donoho_stark_check(&p, &TestSignal::gaussian(1.0), &m, &n, &rules).unwrap();
    let f = |i: usize| row[i].parse::<f64>().unwrap();
    assert_eq!(&row[6], "[0,1];[2,3]");
    assert_eq!(&row[7], "[0,2.5]");
    for (i, want) in [
        r.eps_m,
        r.eps_n,
        r.measure_m,
        r.measure_n,
        r.lebesgue_m,
        r.lebesgue_n,
        r.bound,
        r.observed,
        r.slack(),
    ]
    .into_iter()
    .enumerate()
    {
        assert_eq!(f(8 + i), want, "column {}", 8 + i);
    }
    assert_eq!(&row[17], r.vacuous.to_string().as_str());
    assert_eq!(&row[18], r.pass.to_string().as_str());
}

#[test]
fn nested_m_sweep_has_nonincreasing_eps_m() {
    let dir = TempDir::new().unwrap();
    let config = write(
        &dir,
        "c.json",
        r#"{"sweep": {"m_radii": [0.5, 1.0, 1.5, 2.0, 3.0, 4.0], "n_radii": [2.0]}}"#,
    );
    let out = dir.path().join("w.csv");
    assert!(qpfb(&["sweep", "--config", s(&config), "--out", s(&out)])
        .status
        .success());
    let eps: Vec<f64> = read_rows(&out)
        .iter()
        .map(|r| r[8].parse().unwrap())
        .collect();
    assert_eq!(eps.len(), 6);
    assert!(eps.windows(2).all(|w| w[1] <= w[0]), "{eps:?}");
}

#[test]
fn default_ten_by_ten_sweep_passes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("w.csv");
    let run = qpfb(&["sweep", "--out", s(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
    let rows = read_rows(&out);
    assert_eq!(rows.len(), 100);
    for r in rows.iter().filter(|r| &r[17] == "false") {
        assert_eq!(&r[18], "true");
        assert!(r[16].parse::<f64>().unwrap() >= -1e-8);
    }
    // rows follow the plan: M outer, N inner
    assert_eq!(&rows[0][6], "[0,0.5]");
    assert_eq!(&rows[1][7], "[0,1]");
    assert_eq!(&rows[10][6], "[0,1]");
}
