use std::path::Path;
use std::process::{Command, Output};

fn rbsm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbsm"))
        .args(args)
        .current_dir(dir)
        .env_remove("GSRC_DIR")
        .output()
        .expect("spawn rbsm")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {}\nstdout:\n{}\nstderr:\n{}",
        out.status,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn run_writes_requested_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbsm(
        &["run", "--circuit", "n10", "--synthetic", "--out-csv", "r.csv", "--out-svg", "r.svg", "--out-pl", "r.pl"],
        dir.path(),
    );
    ok(&out);
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(csv.lines().count() == 2, "{csv}");
    assert!(csv.contains("n10"));
    assert!(dir.path().join("r.timing.csv").exists());
    assert!(std::fs::read_to_string(dir.path().join("r.svg")).unwrap().starts_with("<svg"));
    assert!(std::fs::read_to_string(dir.path().join("r.pl")).unwrap().contains("b0"));
}

#[test]
fn legalize_and_render_a_global_placement() {
    let dir = tempfile::tempdir().unwrap();
    let synth = ["--circuit", "n30", "--synthetic"];
    let mut args = vec!["run"];
    args.extend(synth);
    args.extend(["--no-legalize", "--out-pl", "global.pl"]);
    ok(&rbsm(&args, dir.path()));

    let mut args = vec!["legalize"];
    args.extend(synth);
    args.extend(["--input", "global.pl", "--out-pl", "legal.pl", "--out-svg", "legal.svg"]);
    let out = rbsm(&args, dir.path());
    ok(&out);
    assert!(String::from_utf8_lossy(&out.stdout).contains("legal true"));

    let mut args = vec!["render"];
    args.extend(synth);
    args.extend(["--input", "legal.pl", "--out-svg", "again.svg"]);
    ok(&rbsm(&args, dir.path()));
    let svg = std::fs::read_to_string(dir.path().join("again.svg")).unwrap();
    assert!(svg.contains("</svg>"));
    // a legal placement has no block tinted as overlapping
    assert!(!svg.contains("#fc9272"));
}

#[test]
fn bench_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbsm(
        &["bench", "--synthetic", "--circuits", "n10", "--methods", "rbsm,gd", "--seeds", "2", "--out-csv", "b.csv"],
        dir.path(),
    );
    ok(&out);
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2, "{csv}");
    let summary = std::fs::read_to_string(dir.path().join("b.summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2, "{summary}");
}

#[test]
fn missing_benchmark_files_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbsm(&["run", "--circuit", "n10", "--bench-dir", "nowhere"], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("n10.blocks"), "{err}");
}

#[test]
fn circuit_is_required() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbsm(&["run"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--circuit"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.toml"), "iter_max = 5\nbogus = 1\n").unwrap();
    let out = rbsm(&["run", "--circuit", "n10", "--synthetic", "--config", "c.toml"], dir.path());
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}
