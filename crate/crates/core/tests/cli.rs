mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use satd_miner::cli::{parse_args, run, CSV_EXPORT, HTML_EXPORT};
use satd_miner::synth::build_repo;

fn repo(name: &str, root: &Path) -> PathBuf {
    let dir = root.join(name);
    std::fs::create_dir_all(&dir).unwrap();
    build_repo(&common::load(name), &dir).unwrap();
    dir
}

fn args(root: &Path, repos: &[&Path], extra: &[&str]) -> Vec<String> {
    let csv = root.join("repos.csv");
    let body: String = repos.iter().map(|p| format!("{}\n", p.display())).collect();
    std::fs::write(&csv, body).unwrap();
    let mut argv: Vec<String> = ["satd-miner", "-r"].map(String::from).to_vec();
    argv.push(csv.display().to_string());
    argv.extend(["-d".into(), root.join("satd.db").display().to_string()]);
    argv.extend(["-o".into(), root.join("out").display().to_string()]);
    argv.extend(["--workdir".into(), root.join("clones").display().to_string()]);
    argv.extend(extra.iter().map(|s| s.to_string()));
    argv
}

fn run_capture(argv: &[String]) -> (i32, String) {
    let config = parse_args(argv).unwrap();
    let mut status = Vec::new();
    let summary = run(&config, &mut status).unwrap();
    (summary.exit_code(), String::from_utf8(status).unwrap())
}

fn completion_lines(status: &str) -> Vec<&str> {
    status.lines().filter(|l| l.starts_with("Completed analyzing")).collect()
}

#[test]
fn two_repositories_complete() {
    let root = tempfile::tempdir().unwrap();
    let a = repo("added_1", root.path());
    let b = repo("tomcat_lifecycle", root.path());
    let (code, status) = run_capture(&args(root.path(), &[&a, &b], &["--parallel", "2"]));
    assert_eq!(code, 0, "{status}");
    let done = completion_lines(&status);
    assert_eq!(done.len(), 2, "{status}");
    assert!(done[1].starts_with("Completed analyzing 3 diffs in "), "{}", done[1]);
    assert!(done.iter().all(|l| l.contains("ms/diff, 0 errors) - ")));
    assert!(status.contains("Mining SATD (100.0%)"));

    let csv = std::fs::read_to_string(root.path().join("out").join(CSV_EXPORT)).unwrap();
    assert_eq!(csv.matches("\r\n").count(), 1 + 1 + 3);
    assert!(root.path().join("out").join(HTML_EXPORT).exists());
}

#[test]
fn one_unreachable_repository_fails_the_run() {
    let root = tempfile::tempdir().unwrap();
    let a = repo("added_1", root.path());
    let b = repo("removed_1", root.path());
    let missing = root.path().join("missing");
    let (code, status) = run_capture(&args(root.path(), &[&a, &missing, &b], &[]));
    assert_ne!(code, 0);
    assert_eq!(completion_lines(&status).len(), 2, "{status}");
    assert_eq!(status.lines().filter(|l| l.starts_with("Failed analyzing")).count(), 1);
}

#[test]
fn merge_orphan_reports_one_error() {
    let root = tempfile::tempdir().unwrap();
    let m = repo("merge_orphan", root.path());
    let (code, status) = run_capture(&args(root.path(), &[&m], &[]));
    assert_eq!(code, 0);
    let done = completion_lines(&status);
    assert!(done[0].contains(", 1 errors) - "), "{}", done[0]);
    assert!(!status.contains("OrphanOperation"));

    let (_, verbose) = run_capture(&args(root.path(), &[&m], &["--show-errors"]));
    assert_eq!(verbose.lines().filter(|l| l.contains("OrphanOperation")).count(), 1, "{verbose}");
}

#[test]
fn repeated_runs_export_identical_csv() {
    let root = tempfile::tempdir().unwrap();
    let a = repo("change_expansion", root.path());
    let b = repo("tomcat_lifecycle", root.path());
    let mut exports = Vec::new();
    for i in 0..2 {
        let run_root = root.path().join(format!("run{i}"));
        std::fs::create_dir_all(&run_root).unwrap();
        let (code, _) = run_capture(&args(&run_root, &[&a, &b], &["--parallel", "2"]));
        assert_eq!(code, 0);
        exports.push(std::fs::read(run_root.join("out").join(CSV_EXPORT)).unwrap());
    }
    assert_eq!(exports[0], exports[1]);
}

#[test]
fn classifier_and_pattern_options() {
    let root = tempfile::tempdir().unwrap();
    let a = repo("removed_1", root.path());
    let patterns = root.path().join("patterns.txt");
    std::fs::write(&patterns, "copy-pasting\n").unwrap();
    let (code, _) = run_capture(&args(root.path(), &[&a], &["--patterns", &patterns.display().to_string()]));
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(root.path().join("out").join(CSV_EXPORT)).unwrap();
    assert!(csv.contains("SATD_REMOVED"));

    let (code, _) = run_capture(&args(root.path(), &[&a], &["--classifier-cmd", "while read l; do echo 0; done"]));
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(root.path().join("out").join(CSV_EXPORT)).unwrap();
    assert_eq!(csv.matches("\r\n").count(), 1, "an all-negative classifier mines nothing");
}

#[test]
fn binary_help_and_streams() {
    let bin = env!("CARGO_BIN_EXE_satd-miner");
    let help = Command::new(bin).arg("-h").output().unwrap();
    assert!(help.status.success());
    let text = String::from_utf8_lossy(&help.stdout);
    for flag in ["-r", "-d", "--diff-algorithm", "--threshold", "--show-errors", "--patterns", "--classifier-cmd"] {
        assert!(text.contains(flag), "{flag} missing from help");
    }

    let bad = Command::new(bin).args(["-r", "x.csv", "--threshold", "1.5"]).output().unwrap();
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("threshold must be in [0,1]"));

    let root = tempfile::tempdir().unwrap();
    let a = repo("added_1", root.path());
    let argv = args(root.path(), &[&a], &[]);
    let out = Command::new(bin).args(&argv[1..]).output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "dataset rows never reach stdout");
    assert!(String::from_utf8_lossy(&out.stderr).contains("Completed analyzing 2 diffs"));
}
