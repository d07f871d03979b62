//! End-to-end tests of the installed binary: exit codes, file outputs,
//! option precedence, and reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

static DIR_SEQ: AtomicUsize = AtomicUsize::new(0);

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "qitime-{tag}-{}-{}",
        std::process::id(),
        DIR_SEQ.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qitime"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {path:?}: {e}"))
}

fn csv_rows(path: &Path) -> usize {
    read(path).lines().count() - 1
}

#[test]
fn sweep_writes_csv_and_svg() {
    let dir = scratch_dir("outputs");
    let out = run(&[
        "sweep", "--N", "2,4", "--tau-max", "2", "--dtau", "0.5", "--shots", "8",
        "--runs", "1", "--plot", "--out", dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = read(&dir.join("sweep.csv"));
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("tau,ideal,"), "header: {header}");
    assert!(header.contains("distance_exact_N2") && header.contains("distance_exact_N4"));
    assert_eq!(lines.count(), 5, "grid 0..2 step 0.5");

    let svg = read(&dir.join("sweep.svg"));
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));

    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("tau_bar"), "summary table printed");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = |dir: &Path| {
        vec![
            "sweep".to_string(),
            "--preset".into(), "toy-paper".into(),
            "--noise-p1".into(), "0.005".into(),
            "--noise-p2".into(), "0.01".into(),
            "--seed".into(), "5".into(),
            "--tau-max".into(), "1".into(),
            "--out".into(), dir.to_str().unwrap().into(),
        ]
    };
    let d1 = scratch_dir("repro-a");
    let d2 = scratch_dir("repro-b");
    let o1 = run(&args(&d1).iter().map(String::as_str).collect::<Vec<_>>());
    let o2 = run(&args(&d2).iter().map(String::as_str).collect::<Vec<_>>());
    assert!(o1.status.success() && o2.status.success());
    assert_eq!(
        std::fs::read(d1.join("sweep.csv")).unwrap(),
        std::fs::read(d2.join("sweep.csv")).unwrap(),
        "same seed, same bytes"
    );
    std::fs::remove_dir_all(&d1).ok();
    std::fs::remove_dir_all(&d2).ok();
}

#[test]
fn flags_override_config_file_overrides_preset() {
    let dir = scratch_dir("precedence");
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "tau_max = 2.0  # shrinks the preset grid\n").unwrap();

    // Preset alone reaches tau = 4 (41 rows); the file cuts that to 21.
    let d1 = dir.join("file");
    let out = run(&[
        "sweep", "--preset", "toy-paper", "--config", cfg.to_str().unwrap(),
        "--out", d1.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(csv_rows(&d1.join("sweep.csv")), 21);

    // A flag beats the file.
    let d2 = dir.join("flag");
    let out = run(&[
        "sweep", "--preset", "toy-paper", "--config", cfg.to_str().unwrap(),
        "--tau-max", "1", "--out", d2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(csv_rows(&d2.join("sweep.csv")), 11);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn rejected_configurations_exit_two() {
    let cases: &[&[&str]] = &[
        &["sweep", "--model", "bogus"],
        &["sweep", "--model", "toy", "--N", "4"],
        &["sweep", "--model", "toy", "--state", "01"],
        &["sweep", "--noise-p1", "0.01"],
        &["sweep", "--model", "file"],
        &["sweep", "--model", "file", "--hamiltonian", "/nonexistent/terms.txt"],
        &["sweep", "--state", "banana"],
        &["sweep", "--dtau", "0"],
        &["sweep", "--tau-min", "3", "--tau-max", "1"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args: {args:?}");
        assert!(!out.stderr.is_empty(), "args: {args:?} should explain the rejection");
    }

    let dir = scratch_dir("badcfg");
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    std::fs::remove_dir_all(&dir).ok();
}

/// At tau = 2 the order-2 coefficients obey I0(2) = I1(2) + I2(2), so the
/// truncation polynomial annihilates any eigenvector at energy 1/2. A state
/// with 1e-7 weight elsewhere survives validation but post-selects with
/// probability ~5e-17, far below the simulator floor.
#[test]
fn annihilated_state_exits_three_but_still_writes_the_row() {
    let dir = scratch_dir("postsel");
    let terms = dir.join("terms.txt");
    std::fs::write(&terms, "0.75 I\n0.25 Z\n").unwrap();
    let out = run(&[
        "sweep", "--model", "file", "--hamiltonian", terms.to_str().unwrap(),
        "--state", "0.0000001,1", "--N", "2", "--tau-min", "2", "--tau-max", "2",
        "--dtau", "1", "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("post-selection"));

    let csv = read(&dir.join("sweep.csv"));
    assert!(csv.lines().count() == 2, "the failed point is still recorded");
    assert!(csv.contains(",failed"), "csv: {csv}");
    assert!(csv.contains("NaN"), "distances are not fabricated on failure");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bounds_reports_query_counts() {
    let out = run(&["bounds", "--N", "2,4,6,8,10"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("tau_bar"), "header present");
    let row = |n: &str| -> Vec<String> {
        stdout
            .lines()
            .map(|l| l.split_whitespace().map(str::to_string).collect::<Vec<_>>())
            .find(|t| t.first().map(String::as_str) == Some(n))
            .unwrap_or_else(|| panic!("no row for N = {n}"))
    };
    let r10 = row("10");
    assert_eq!((r10[2].as_str(), r10[3].as_str()), ("110", "111"));
    let r6 = row("6");
    assert_eq!((r6[2].as_str(), r6[3].as_str()), ("42", "43"));
}
