mod common;

use satd_miner::synth::Mismatch;
use satd_miner::tracker::{MiningErrorKind, Resolution};

fn check_scenario(name: &str) {
    let dir = tempfile::tempdir().unwrap();
    let run = common::run_named(name, dir.path());
    let mismatches: Vec<String> = run
        .report
        .mismatches
        .iter()
        .map(|m| match m {
            Mismatch::Missing(t) => format!("missing {} {:?}", t.resolution, t.text),
            Mismatch::Unexpected(t) => format!("unexpected {} {:?}", t.resolution, t.text),
        })
        .collect();
    assert!(mismatches.is_empty(), "{name}: {mismatches:#?}");
    assert!(run.outcome.errors.is_empty(), "{name}: {:?}", run.outcome.errors);
}

#[test]
fn scenario_added() {
    check_scenario("added_1");
}

#[test]
fn scenario_removed() {
    check_scenario("removed_1");
}

#[test]
fn scenario_reflowed_comment_is_one_change() {
    check_scenario("false_add_remove");
}

#[test]
fn scenario_spelling_fix() {
    check_scenario("change_positive");
}

#[test]
fn scenario_unrelated_replacement_reads_as_change() {
    check_scenario("change_negative");
}

#[test]
fn scenario_partial_removal() {
    check_scenario("change_removal");
}

#[test]
fn scenario_expansion() {
    check_scenario("change_expansion");
}

#[test]
fn scenario_abbreviation() {
    check_scenario("change_abbreviation");
}

#[test]
fn scenario_generalization() {
    check_scenario("change_generalization");
}

#[test]
fn scenario_specialization() {
    check_scenario("change_specialization");
}

#[test]
fn scenario_no_overlap_removal() {
    check_scenario("remove_entirelydifferent");
}

#[test]
fn tomcat_lifecycle_shares_one_instance() {
    let dir = tempfile::tempdir().unwrap();
    let run = common::run_named("tomcat_lifecycle", dir.path());
    assert!(run.report.is_perfect(), "{:?}", run.report.mismatches);
    let ops = &run.outcome.operations;
    let resolutions: Vec<Resolution> = ops.iter().map(|o| o.resolution).collect();
    assert_eq!(
        resolutions,
        [Resolution::SatdAdded, Resolution::FilePathChanged, Resolution::FileRemoved]
    );
    assert!(ops.iter().all(|o| o.instance_id == ops[0].instance_id));
    assert!(ops[2].new_occurrence.is_none());
    let shas: Vec<&str> = ops.iter().map(|o| o.child_commit.sha.as_str()).collect();
    assert_eq!(shas, run.built.step_commits.iter().map(String::as_str).collect::<Vec<_>>());
}

#[test]
fn merge_introduced_debt_reports_one_orphan() {
    let dir = tempfile::tempdir().unwrap();
    let run = common::run_named("merge_orphan", dir.path());
    assert!(run.report.is_perfect(), "{:?}", run.report.mismatches);
    let orphans: Vec<_> = run
        .outcome
        .errors
        .iter()
        .filter(|e| e.kind == MiningErrorKind::OrphanOperation)
        .collect();
    assert_eq!(orphans.len(), 1, "{:?}", run.outcome.errors);
    assert_eq!(run.outcome.errors.len(), 1);
}
