use std::path::PathBuf;
use std::process::{Command, Output};

struct Run(Command);

fn cli() -> Run {
    Run(Command::new(env!("CARGO_BIN_EXE_wehrl-lab")))
}

impl Run {
    fn args<I: IntoIterator<Item = S>, S: AsRef<std::ffi::OsStr>>(mut self, args: I) -> Self {
        self.0.args(args);
        self
    }

    fn arg(mut self, arg: impl AsRef<std::ffi::OsStr>) -> Self {
        self.0.arg(arg);
        self
    }

    fn env(mut self, key: &str, value: &str) -> Self {
        self.0.env(key, value);
        self
    }

    /// Runs and checks the exit status.
    fn code(mut self, expected: i32) -> Output {
        let out = self.0.output().unwrap();
        assert_eq!(
            out.status.code(),
            Some(expected),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        out
    }
}

/// File in the target temp directory with the given contents.
fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn lines(out: &[u8]) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn coherent_entropy_report() {
    let out = cli()
        .args(["verify", "wehrl", "--space", "sphere", "--j", "4", "--coherent-su2", "1,0,0,0"])
        .code(0)
        .stdout;
    let records = lines(&out);
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["record"], "header");
    let report = &records[1];
    assert!((report["lhs"].as_f64().unwrap() - 0.8).abs() < 1e-15);
    assert_eq!(report["pass"], true);
    assert_eq!(report["verdict"], "equality");
}

#[test]
fn contractivity_from_a_coefficient_file() {
    let file = temp_file("kernel.json", "[[0.6, 0.0], [0.0, 0.8]]\n");
    cli()
        .args(["verify", "contractivity", "--space", "sphere", "--j", "1", "--p", "2", "--q", "4", "--coeffs"])
        .arg(&file)
        .code(0);
}

#[test]
fn local_bound_is_attained_by_the_superlevel_set() {
    let out = cli()
        .args(["verify", "local", "--space", "plane", "--alpha", "3.14159", "--p", "2"])
        .args(["--coherent", "0,0", "--budget", "1.0", "--G", "power:1"])
        .code(0)
        .stdout;
    let report = &lines(&out)[1];
    assert!(report["margin"].as_f64().unwrap().abs() < 1e-3);
    assert_eq!(report["region"]["kind"], "superlevel");
}

#[test]
fn sweeps_are_byte_identical_across_runs_and_thread_counts() {
    let args = ["verify", "global", "--space", "hyperbolic", "--alpha", "2", "--seed", "11", "--count", "3", "--G", "power:2"];
    let a = cli().args(args).env("WEHRL_LAB_THREADS", "1").code(0).stdout;
    let b = cli().args(args).env("WEHRL_LAB_THREADS", "3").code(0).stdout;
    assert_eq!(a, b);
    let records = lines(&a);
    assert_eq!(records[0]["seed"], 11);
    assert_eq!(records.len(), 4);
}

#[test]
fn failing_check_exits_with_two() {
    // Far too coarse a rule for the entropy integrand.
    cli()
        .args(["verify", "wehrl", "--space", "sphere", "--j", "3", "--coherent-su2", "0.6,0,0.48,0.64"])
        .args(["--radial-order", "3", "--angular-order", "4"])
        .code(2);
}

#[test]
fn malformed_coefficient_file_names_the_line() {
    let file = temp_file("malformed.json", "[[1, 0],\n [2, 0],\n [oops]]");
    let out = cli()
        .args(["verify", "wehrl", "--space", "sphere", "--j", "2", "--coeffs"])
        .arg(&file)
        .code(1)
        .stderr;
    let msg = String::from_utf8_lossy(&out);
    assert!(msg.contains(":3:"), "{msg}");
}

#[test]
fn configuration_errors_exit_with_one() {
    cli().args(["verify", "wehrl", "--space", "sphere", "--j", "2"]).code(1);
    cli().args(["verify", "wehrl", "--space", "plane", "--alpha", "1", "--coherent", "0,0"]).code(1);
    cli()
        .args(["verify", "contractivity", "--space", "sphere", "--j", "2", "--p", "4", "--q", "2", "--seed", "1"])
        .code(1);
    cli()
        .args(["verify", "wehrl", "--space", "sphere", "--j", "2", "--seed", "1"])
        .env("WEHRL_LAB_THREADS", "many")
        .code(1);
}

#[test]
fn distribution_of_the_zero_function_is_an_error() {
    let file = temp_file("zero.json", "[[0, 0]]");
    cli().args(["distribution", "--space", "sphere", "--j", "2", "--coeffs"]).arg(&file).code(1);
}

#[test]
fn distribution_csv_follows_the_coherent_curve() {
    let out = cli()
        .args(["distribution", "--space", "hyperbolic", "--alpha", "2", "--p", "1", "--coherent", "0.2,0.1", "--points", "25"])
        .code(0)
        .stdout;
    let text = String::from_utf8_lossy(&out);
    let mut rows = text.lines();
    assert!(rows.next().unwrap().starts_with("# {"));
    assert_eq!(rows.next().unwrap(), "f,t,mu,mu0");
    let mut n = 0;
    for row in rows {
        let v: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        // mu0 = exp(-p t / alpha) - 1
        let mu0 = (-v[1] / 2.0).exp() - 1.0;
        assert!((v[3] - mu0).abs() < 1e-12);
        assert!(v[2] >= 1e-3);
        assert!((v[2] - mu0).abs() < 2e-3, "{row}");
        n += 1;
    }
    assert_eq!(n, 25);
}

#[test]
fn compare_ode_records_pass_for_a_sweep() {
    let out = cli()
        .args(["compare-ode", "--space", "plane", "--alpha", "1", "--seed", "5", "--count", "2", "--pairs", "5"])
        .code(0)
        .stdout;
    let records = lines(&out);
    assert_eq!(records.len(), 11);
    for r in &records[1..] {
        assert!(r["t1"].as_f64().unwrap() < r["t2"].as_f64().unwrap());
        assert!(r["mu_t2"].as_f64().unwrap() >= 1e-3);
        assert_eq!(r["pass"], true);
    }
}
