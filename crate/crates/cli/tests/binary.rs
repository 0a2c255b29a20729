use std::path::PathBuf;
use std::process::{Command, Output};

fn mce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mce")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("mce-binary-{}-{name}", std::process::id()))
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["table", "--which", "gbm"][..],
        &["table", "--which", "cubic", "--n-min", "3"],
        &["diagnose", "--kind", "intro", "--model", "ginzburg"],
        &["diagnose", "--kind", "moments", "--model", "heston"],
        &["convergence", "--n-min", "16", "--n-max", "32"],
        &["table", "--which", "cubic", "--param", "a=1"],
        &["validate-model", "--param", "nonsense=1"],
    ] {
        let out = mce(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn invariant_violations_exit_with_one() {
    let out = mce(&["validate-model", "--model", "gbm", "--param", "a=2", "--param", "L=1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains(",false"));
}

#[test]
fn config_file_with_flag_override_and_out_file() {
    let cfg = scratch("divergence.cfg");
    let csv = scratch("divergence.csv");
    std::fs::write(&cfg, "# blow-up demo\nmodel = cubic\nsigma_bar = 0\nx0 = 10\nsteps = 10, 20\nthreshold = 1e50\n")
        .unwrap();
    let out = mce(&[
        "diagnose",
        "--kind",
        "divergence",
        "--config",
        cfg.to_str().unwrap(),
        "--param",
        "x0=0.1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    let _ = std::fs::remove_file(&cfg);
    let _ = std::fs::remove_file(&csv);
    assert!(text.starts_with("# mce "));
    assert!(text.contains("# config: x0=0.1\n"));
    assert!(text.contains("# seed: 0\n# scale: desk\n"));
    assert!(!text.contains("config: out="));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "model,x0,N,T,threshold,steps_to_exceed");
    assert_eq!(rows.len(), 3);
    assert!(rows[1].ends_with(",none") && rows[2].ends_with(",none"));
}

#[test]
fn worker_count_from_environment_does_not_change_output() {
    let args = ["table", "--which", "ginzburg", "--n-max", "16", "--seeds", "2"];
    let run = |workers: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_mce")).args(args).env("MCE_WORKERS", workers).output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn synthetic_error_file_gives_one_third() {
    let path = scratch("errors.csv");
    let mut text = String::from("N,abs_error\n");
    for k in 2..8 {
        let n = (1u64 << k) as f64;
        text.push_str(&format!("{n},{}\n", 0.7 * n.powi(3).powf(-1.0 / 3.0)));
    }
    std::fs::write(&path, text).unwrap();
    let out = mce(&["convergence", "--errors-file", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    let csv = String::from_utf8(out.stdout).unwrap();
    let slope: f64 = csv
        .lines()
        .find(|l| l.starts_with("# fit:"))
        .and_then(|l| l.split_whitespace().find_map(|t| t.strip_prefix("slope=")))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope + 1.0 / 3.0).abs() < 1e-12);
    assert!(csv.contains("N,effort,abs_error,line_1_6,line_1_3,line_1_2\n"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 7);
}
