use std::path::Path;
use std::process::{Command, Output};

fn labeldp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_labeldp")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const CONFIG: &str = r#"
task = "reg-central-bounded"
n_grid = [256, 512, 1024, 2048]
eps_grid = [1.0]
trials = 3
master_seed = 9

[distribution]
family = "smooth"
dim = 1
"#;

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("sweep.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(config: &str, out: &Path, extra: &[&str]) -> String {
    let mut args = vec!["run", "--config", config, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = labeldp(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out.join("records.csv")).unwrap()
}

#[test]
fn run_is_reproducible_and_thread_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let a = run(&config, &dir.path().join("a"), &["--threads", "1"]);
    let b = run(&config, &dir.path().join("b"), &["--threads", "1"]);
    let c = run(&config, &dir.path().join("c"), &["--threads", "2"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_eq!(a.lines().count(), 1 + 12);
    for name in ["fits.txt", "sweep_reg-central-bounded_N_eps1.dat"] {
        let x = std::fs::read(dir.path().join("a").join(name)).unwrap();
        let y = std::fs::read(dir.path().join("c").join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let d = run(&config, &dir.path().join("d"), &["--seed", "10"]);
    assert_ne!(a, d);
}

#[test]
fn fit_reads_a_records_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), CONFIG);
    let out = dir.path().join("out");
    run(&config, &out, &[]);
    let csv = out.join("records.csv");
    let o = labeldp(&["fit", "--in", csv.to_str().unwrap(), "--abscissa", "N", "--aggregator", "mean", "--beta", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("points = 4"), "{text}");
    assert!(text.contains("aggregator = mean"));
    assert!(text.contains("theoretical_exponent = -0.666"), "{text}");
    let slope: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("slope = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(slope < 0.0, "{slope}");
}

#[test]
fn audits_report_pass_and_fail() {
    let o = labeldp(&["audit", "--mechanism", "kbit", "--K", "5", "--eps", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("PASS\n"));
    let o = labeldp(&["audit", "--mechanism", "rr", "--K", "4", "--eps", "1", "--claim", "0.9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).ends_with("FAIL\n"));
    let o = labeldp(&["audit-cdp", "--samples", "5", "--cubes", "2", "--eps", "1", "--flips", "2", "--datasets", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = labeldp(&["audit-cdp", "--samples", "4", "--cubes", "1", "--eps", "1", "--datasets", "5", "--claim", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn configuration_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), &format!("{CONFIG}colour = \"red\"\n"));
    let o = labeldp(&["run", "--config", &bad, "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));
    assert_eq!(labeldp(&["run", "--config", "/nonexistent.toml", "--out", "x"]).status.code(), Some(1));
    assert_eq!(labeldp(&["audit", "--mechanism", "kbit", "--K", "1", "--eps", "1"]).status.code(), Some(1));
    assert_eq!(labeldp(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(labeldp(&["--help"]).status.code(), Some(0));
}
