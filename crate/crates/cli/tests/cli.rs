use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_qspline");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("QSPLINE_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fit_writes_csv_with_schema() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fit", "--function", "sin", "--knots", "4", "--mode", "exact", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("fit_sin_K4_seed42.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,y_target,y_estimate");
    assert_eq!(lines.len(), 5);
    for row in &lines[1..] {
        let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 3);
        assert!((cols[1] - cols[2]).abs() < 1e-6);
    }
    assert!(stdout(&o).contains("NRMSE"));
    assert!(!dir.path().join("fit_sin_K4_seed42.svg").exists());
}

#[test]
fn svg_is_written_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fit", "--function", "relu", "--knots", "8", "--svg", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.path().join("fit_relu_K8_seed42.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
    assert_eq!(svg.matches("<circle").count(), 8 + 1);
}

#[test]
fn replay_config_reproduces_the_csv() {
    let first = tempfile::tempdir().unwrap();
    let o = run(&["fit", "--function", "elu", "--knots", "8", "--seed", "11", "--restarts", "3", "--out", path(first.path())]);
    assert_eq!(o.status.code(), Some(0));
    let cfg = first.path().join("fit_elu_K8_seed11.cfg");
    let second = tempfile::tempdir().unwrap();
    let o = run(&["fit", "--config", path(&cfg), "--out", path(second.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let a = std::fs::read(first.path().join("fit_elu_K8_seed11.csv")).unwrap();
    let b = std::fs::read(second.path().join("fit_elu_K8_seed11.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn flags_override_config_and_env_is_a_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "function=sin\nknots=4\nseed=5\n").unwrap();
    let o = run(&["fit", "--config", path(&cfg), "--seed", "6", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("fit_sin_K4_seed6.csv").exists());

    let o = Command::new(BIN)
        .args(["fit", "--function", "sin", "--knots", "4", "--out", path(dir.path())])
        .env("QSPLINE_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("fit_sin_K4_seed77.csv").exists());
}

#[test]
fn invalid_arguments_exit_1() {
    for args in [
        vec!["fit", "--function", "tanh", "--knots", "4"],
        vec!["fit", "--function", "sin", "--knots", "12"],
        vec!["fit", "--function", "sin", "--knots", "128"],
        vec!["fit", "--knots", "4"],
        vec!["fit", "--function", "sin", "--degree", "2"],
        vec!["fit", "--function", "sin", "--mode", "fast"],
        vec!["decompose"],
        vec!["no-such-command"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = run(&["fit", "--function", "sin", "--knots", "4", "--out", path(&blocker.join("sub"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn non_converged_fit_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fit", "--function", "sigmoid", "--knots", "16", "--max-iterations", "2", "--restarts", "1", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(dir.path().join("fit_sigmoid_K16_seed42.csv").exists());
}

#[test]
fn decompose_block_and_function() {
    let o = run(&["decompose", "--block", "0.5", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("I: 0.6\nX: 0.25\nZ: -0.1\nRy(3π): 0.25\n"), "{text}");

    let o = run(&["decompose", "--block", "0", "0"]);
    assert!(stdout(&o).starts_with("I: 1\nterms: 1\n"));

    let o = run(&["decompose", "--function", "sigmoid", "--knots", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let err: f64 = text.lines().last().unwrap().rsplit(' ').next().unwrap().parse().unwrap();
    assert!(err < 1e-12);
}

#[test]
fn classical_only_bench_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["bench", "--classical-only", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header = text.lines().next().unwrap();
    for col in ["Model", "Knots", "Elu", "Relu", "Sigmoid", "Sin"] {
        assert!(header.contains(col));
    }
    assert!(text.contains("0.4874   0.5240   0.1589        —"));
    assert!(text.contains("Classical oracle"));
    let summary = std::fs::read_to_string(dir.path().join("bench_K16_seed42.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
    for kind in ["elu", "relu", "sigmoid", "sin"] {
        assert!(dir.path().join(format!("fit_{kind}_K16_seed42.csv")).exists());
    }
}

#[test]
fn sigmoid_k16_seed7_is_accurate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["fit", "--function", "sigmoid", "--knots", "16", "--mode", "exact", "--restarts", "5", "--seed", "7", "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().find(|l| l.starts_with("NRMSE:")).unwrap().to_string();
    let nrmse: f64 = line.trim_start_matches("NRMSE:").trim().parse().unwrap();
    assert!(nrmse <= 0.03, "{nrmse}");
}
