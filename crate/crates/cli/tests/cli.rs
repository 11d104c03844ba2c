use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn ergolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergolab"))
        .args(args)
        .env_remove("ERGOLAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn is_empty_dir(p: &Path) -> bool {
    !p.exists() || std::fs::read_dir(p).unwrap().next().is_none()
}

#[test]
fn run_writes_csv_json_and_spec_echo() {
    let dir = tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = ergolab(&[
        "run",
        "--model",
        "anderson_ring",
        "--dim",
        "32",
        "--param",
        "lambda=2.0",
        "--seed",
        "11",
        "--realizations",
        "4",
        "--out",
        out,
        "--quiet",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for f in [
        "anderson_ring_32_11.csv",
        "anderson_ring_32_11.json",
        "anderson_ring_32_11.spec.json",
    ] {
        assert!(dir.path().join(f).is_file(), "missing {f}");
    }
    let csv = std::fs::read_to_string(dir.path().join("anderson_ring_32_11.csv")).unwrap();
    assert!(csv.starts_with("# master_seed: 11\n"));
    assert!(csv.contains("\ndiagnostic,bin_left,bin_right,count\n"));
    let rows = csv
        .lines()
        .filter(|l| l.starts_with("omega_position,"))
        .count();
    assert_eq!(rows, 50);
}

#[test]
fn spec_echo_reproduces_the_csv() {
    let a = tempdir().unwrap();
    let b = tempdir().unwrap();
    let o = ergolab(&[
        "run",
        "--model",
        "goe",
        "--dim",
        "24",
        "--seed",
        "5",
        "--realizations",
        "6",
        "--diagnostics",
        "omega_position,r_stats,dos",
        "--out",
        a.path().to_str().unwrap(),
        "-q",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let echo = a.path().join("goe_24_5.spec.json");
    let o = ergolab(&[
        "run",
        "--spec",
        echo.to_str().unwrap(),
        "--out",
        b.path().to_str().unwrap(),
        "-q",
        "--workers",
        "3",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let first = std::fs::read(a.path().join("goe_24_5.csv")).unwrap();
    let second = std::fs::read(b.path().join("goe_24_5.csv")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn flags_and_spec_file_resolve_identically() {
    let dir = tempdir().unwrap();
    let spec = dir.path().join("s.json");
    std::fs::write(
        &spec,
        r#"{"model": {"variant": "aubry_andre", "params": {"dim": 21, "lambda": 1.5},
            "disorder": {"seed": 9}}, "realizations": 3, "histogram": {"bins": 20}}"#,
    )
    .unwrap();
    let from_file = ergolab(&["run", "--spec", spec.to_str().unwrap(), "--dry-run"]);
    let from_flags = ergolab(&[
        "run",
        "--model",
        "aubry_andre",
        "--dim",
        "21",
        "--param",
        "lambda=1.5",
        "--seed",
        "9",
        "--realizations",
        "3",
        "--bins",
        "20",
        "--dry-run",
    ]);
    assert_eq!(code(&from_file), 0, "{}", stderr(&from_file));
    assert_eq!(code(&from_flags), 0, "{}", stderr(&from_flags));
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn flags_override_spec_file_fields() {
    let dir = tempdir().unwrap();
    let spec = dir.path().join("s.json");
    std::fs::write(
        &spec,
        r#"{"model": {"variant": "goe", "params": {"dim": 8}}, "realizations": 3}"#,
    )
    .unwrap();
    let o = ergolab(&[
        "run",
        "--spec",
        spec.to_str().unwrap(),
        "--realizations",
        "7",
        "--seed",
        "4",
        "--dry-run",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["realizations"], 7);
    assert_eq!(v["model"]["disorder"]["seed"], 4);
    assert_eq!(v["model"]["params"]["dim"], 8);
}

#[test]
fn invalid_specs_exit_2_and_write_nothing() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();
    let cases: &[&[&str]] = &[
        &[
            "run",
            "--model",
            "goe",
            "--dim",
            "16",
            "--diagnostics",
            "omega_momentum",
            "--out",
            out_s,
        ],
        &[
            "run", "--model", "goe", "--dim", "16", "--param", "lamda=1", "--out", out_s,
        ],
        &[
            "run",
            "--model",
            "not_a_model",
            "--dim",
            "16",
            "--out",
            out_s,
        ],
        &[
            "run",
            "--model",
            "goe",
            "--dim",
            "16",
            "--realizations",
            "0",
            "--out",
            out_s,
        ],
        &[
            "run",
            "--model",
            "goe",
            "--dim",
            "16",
            "--sector",
            "per_parity",
            "--out",
            out_s,
        ],
        &[
            "run", "--model", "tfim", "--sites", "1", "--param", "h=1", "--out", out_s,
        ],
        &[
            "run", "--model", "goe", "--dim", "16", "--bins", "0", "--out", out_s,
        ],
        &[
            "run",
            "--model",
            "goe",
            "--dim",
            "16",
            "--workers",
            "0",
            "--out",
            out_s,
        ],
        &[
            "run", "--model", "goe", "--dim", "16", "--wat", "--out", out_s,
        ],
        &["run", "--out", out_s],
    ];
    for args in cases {
        let o = ergolab(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
        assert!(is_empty_dir(&out), "{args:?} wrote output");
    }
}

#[test]
fn malformed_spec_file_reports_position() {
    let dir = tempdir().unwrap();
    let spec = dir.path().join("s.json");
    std::fs::write(&spec, "{\n  \"model\": {\"variant\": \"goe\",\n}").unwrap();
    let o = ergolab(&["run", "--spec", spec.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn keep_sectors_with_unknown_label_lists_the_real_ones() {
    let o = ergolab(&[
        "run",
        "--model",
        "syk",
        "--sites",
        "8",
        "--sector",
        "per_parity",
        "--keep-sectors",
        "odd",
        "--dry-run",
    ]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("even") || err.contains('+'), "{err}");
}

#[test]
fn reference_surmise_grid() {
    let o = ergolab(&[
        "reference",
        "--kind",
        "surmise",
        "--beta",
        "1",
        "--grid",
        "0:1:3",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,pdf");
    assert_eq!(lines.len(), 4);
    let last: Vec<f64> = lines[3].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(last[0], 1.0);
    assert!((last[1] - 0.8660).abs() < 1e-4);
}

#[test]
fn reference_densities_integrate_to_one() {
    for args in [
        &["reference", "--kind", "semicircle"][..],
        &["reference", "--kind", "kesten_mckay", "--d", "3"][..],
        &["reference", "--kind", "poisson_r"][..],
    ] {
        let o = ergolab(args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let pts: Vec<(f64, f64)> = String::from_utf8(o.stdout)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| {
                let (x, p) = l.split_once(',').unwrap();
                (x.parse().unwrap(), p.parse().unwrap())
            })
            .collect();
        assert_eq!(pts.len(), 1001);
        let mass: f64 = pts
            .windows(2)
            .map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0))
            .sum();
        assert!((mass - 1.0).abs() < 2e-3, "{args:?}: {mass}");
    }
}

#[test]
fn reference_rejects_bad_inputs() {
    for args in [
        &["reference", "--kind", "kesten_mckay", "--d", "2"][..],
        &["reference", "--kind", "surmise", "--beta", "3"][..],
        &["reference", "--kind", "surmise", "--grid", "1:0:5"][..],
        &["reference", "--kind", "gaussian"][..],
    ] {
        assert_eq!(code(&ergolab(args)), 2, "{args:?}");
    }
}

#[test]
fn reference_writes_to_file() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("semi.csv");
    let o = ergolab(&[
        "reference",
        "--kind",
        "semicircle",
        "--grid=-2:2:5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(o.stdout.is_empty());
}

fn write_sweep(dir: &Path, sweep: &str) -> String {
    let path = dir.join("sweep.json");
    let body = format!(
        r#"{{"base": {{"model": {{"variant": "anderson_ring", "params": {{"dim": 24, "lambda": 0.5}},
             "disorder": {{"seed": 2}}}}, "realizations": 3}}, "sweep": {sweep}}}"#
    );
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn sweep_runs_each_value_and_summarizes() {
    let dir = tempdir().unwrap();
    let spec = write_sweep(
        dir.path(),
        r#"{"parameter": "model.params.lambda", "values": [0.5, 4.0]}"#,
    );
    let out = dir.path().join("out");
    let o = ergolab(&[
        "sweep",
        "--spec",
        &spec,
        "--out",
        out.to_str().unwrap(),
        "-q",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(out.join("lambda_0.5/anderson_ring_24_2.csv").is_file());
    assert!(out.join("lambda_4.0/anderson_ring_24_2.json").is_file());
    let summary = std::fs::read_to_string(out.join("sweep_summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "parameter,value,mean_omega,mean_r");
    assert_eq!(lines.len(), 3);
    let omega: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    // Stronger disorder localizes the eigenvectors.
    assert!(omega[1] < omega[0], "{omega:?}");
}

#[test]
fn sweep_rejects_empty_multi_axis_and_invalid_points() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("out");
    for sweep in [
        r#"{"parameter": "model.params.lambda", "values": []}"#,
        r#"[{"parameter": "model.params.lambda", "values": [1]}, {"parameter": "model.params.dim", "values": [8]}]"#,
        r#"{"parameter": "model.params.lambda", "values": [[1, 2]]}"#,
        r#"{"parameter": "model.params.dim", "values": [16, 1]}"#,
        r#"{"parameter": "model.params.lambda", "values": [1], "other": 2}"#,
    ] {
        let spec = write_sweep(dir.path(), sweep);
        let o = ergolab(&["sweep", "--spec", &spec, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{sweep}: {}", stderr(&o));
        assert!(is_empty_dir(&out), "{sweep} wrote output");
    }
}

#[test]
fn graph_exports_edge_list() {
    let o = ergolab(&[
        "graph",
        "--model",
        "free_ring",
        "--dim",
        "5",
        "--boundary",
        "periodic",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    let o = ergolab(&[
        "graph",
        "--model",
        "free_ring",
        "--dim",
        "5",
        "--threshold=-1",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn help_documents_exit_codes() {
    let o = ergolab(&["run", "--help"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("Exit codes"));
    assert!(text.contains("ERGOLAB_WORKERS"));
}
