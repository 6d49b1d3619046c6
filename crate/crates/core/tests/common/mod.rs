#![allow(dead_code)]
pub mod oracle;

use std::path::{Path, PathBuf};

use satd_miner::synth::{run_script, HistoryScript, ScenarioRun};
use satd_miner::tracker::MinerConfig;

pub const SCENARIOS: [&str; 11] = [
    "added_1",
    "removed_1",
    "false_add_remove",
    "change_positive",
    "change_negative",
    "change_removal",
    "change_expansion",
    "change_abbreviation",
    "change_generalization",
    "change_specialization",
    "remove_entirelydifferent",
];

pub fn corpus_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(format!("{name}.script"))
}

pub fn load(name: &str) -> HistoryScript {
    let text = std::fs::read_to_string(corpus_path(name)).unwrap();
    HistoryScript::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn run_named(name: &str, dir: &Path) -> ScenarioRun {
    run_script(&load(name), dir, &MinerConfig::default()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

use std::collections::{BTreeMap, HashSet};

use satd_miner::tracker::{MiningErrorKind, MiningOutcome, Resolution};

/// Checks `ADDED (CHANGED|CLASS_OR_METHOD_CHANGED|FILE_PATH_CHANGED|MOVED_FILE)* (REMOVED|FILE_REMOVED)?`.
pub fn lifecycle_ok(seq: &[Resolution]) -> bool {
    let Some((first, rest)) = seq.split_first() else {
        return false;
    };
    if *first != Resolution::SatdAdded {
        return false;
    }
    let middle = match rest.split_last() {
        Some((last, m)) if last.is_terminal() => m,
        _ => rest,
    };
    middle.iter().all(|r| {
        matches!(
            r,
            Resolution::SatdChanged
                | Resolution::ClassOrMethodChanged
                | Resolution::FilePathChanged
                | Resolution::SatdMovedFile
        )
    })
}

/// Instances whose operation sequence breaks the lifecycle grammar,
/// ignoring instances named by an orphan error.
pub fn lifecycle_violations(outcome: &MiningOutcome) -> Vec<(u64, Vec<Resolution>)> {
    let orphans: HashSet<u64> = outcome
        .errors
        .iter()
        .filter(|e| e.kind == MiningErrorKind::OrphanOperation)
        .filter_map(|e| e.instance_id)
        .collect();
    let mut by_instance: BTreeMap<u64, Vec<Resolution>> = BTreeMap::new();
    for op in &outcome.operations {
        by_instance.entry(op.instance_id).or_default().push(op.resolution);
    }
    by_instance
        .into_iter()
        .filter(|(id, seq)| !orphans.contains(id) && !lifecycle_ok(seq))
        .collect()
}
