use std::path::Path;
use std::sync::Arc;

use log::{debug, warn};

use super::{
    map_instances_aligned, resolve_cross_file_moves, resolve_file_events, resolve_pair, Ledger, MiningError,
    MiningErrorKind, ResolvedOp, SatdOccurrence, SatdOperation, Snapshot,
};
use crate::classify::{ClassifierHandle, PatternClassifier};
use crate::diff::{changed_files, diff_lines, DiffAlgorithm, FileChange, FileChangeKind, DEFAULT_RENAME_THRESHOLD};
use crate::git_walk::{commit_pairs, open_repo, resolve_terminal, CommitMeta, CommitPair, RepoSource, RepositoryHandle};
use crate::Result;

/// Default upper bound (exclusive) on the normalized distance between the
/// two sides of an `SATD_CHANGED`. At 1.0 only an edit to or from empty
/// text is vetoed, so any rewrite inside a shared hunk counts as a change.
pub const DEFAULT_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct MinerConfig {
    pub threshold: f64,
    pub algorithm: DiffAlgorithm,
    /// Percent similarity for rename detection.
    pub rename_threshold: u16,
    pub classifier: ClassifierHandle,
}

impl Default for MinerConfig {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            algorithm: DiffAlgorithm::Myers,
            rename_threshold: DEFAULT_RENAME_THRESHOLD,
            classifier: Arc::new(PatternClassifier::default()),
        }
    }
}

/// Incremental tracker: feed it commit pairs oldest first.
#[derive(Debug)]
pub struct Tracker {
    config: MinerConfig,
    ledger: Ledger,
    operations: Vec<SatdOperation>,
    errors: Vec<MiningError>,
}

impl Tracker {
    pub fn new(config: MinerConfig) -> Self {
        Self::with_ledger(config, Ledger::new())
    }

    pub fn with_ledger(config: MinerConfig, ledger: Ledger) -> Self {
        Self {
            config,
            ledger,
            operations: Vec::new(),
            errors: Vec::new(),
        }
    }

    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }

    pub fn operations(&self) -> &[SatdOperation] {
        &self.operations
    }

    pub fn errors(&self) -> &[MiningError] {
        &self.errors
    }

    pub fn into_parts(self) -> (Vec<SatdOperation>, Vec<MiningError>) {
        (self.operations, self.errors)
    }

    fn error(&mut self, kind: MiningErrorKind, commit: &str, instance_id: Option<u64>, detail: String) {
        warn!("{detail}");
        self.errors.push(MiningError {
            kind,
            detail,
            commit: commit.to_string(),
            instance_id,
        });
    }

    pub fn record_warnings(&mut self, commit: &str, warnings: &[String]) {
        for w in warnings {
            self.error(MiningErrorKind::DecodeWarning, commit, None, w.clone());
        }
    }

    /// Resolves one commit pair and returns the operations it produced.
    pub fn process_pair(&mut self, pair: &CommitPair, changes: &[FileChange]) -> &[SatdOperation] {
        let first_new = self.operations.len();
        let commit = pair.child.sha.clone();
        let mut resolved: Vec<ResolvedOp> = Vec::new();
        let mut carried: Vec<(SatdOccurrence, SatdOccurrence)> = Vec::new();

        for change in changes {
            let (old, old_errors) = self.take_snapshot(change.old_path.as_deref(), change.old_text.as_deref());
            let (new, new_errors) = self.take_snapshot(change.new_path.as_deref(), change.new_text.as_deref());
            for e in old_errors.into_iter().chain(new_errors) {
                self.error(MiningErrorKind::ClassifierFailure, &commit, None, e);
            }
            if change.kind == FileChangeKind::Removed {
                resolved.extend(resolve_file_events(change.kind, &old.satd, &[], &[]));
                continue;
            }
            let script = diff_lines(
                change.old_text.as_deref().unwrap_or(""),
                change.new_text.as_deref().unwrap_or(""),
                self.config.algorithm,
            );
            let mapping = map_instances_aligned(&old.satd, &new.satd, &script);
            if change.kind == FileChangeKind::Renamed {
                resolved.extend(resolve_file_events(change.kind, &old.satd, &new.satd, &mapping.matched));
            } else {
                carried.extend(
                    mapping
                        .matched
                        .iter()
                        .map(|&(o, n)| (old.satd[o].clone(), new.satd[n].clone())),
                );
            }
            let unmapped_old: Vec<_> = mapping.unmapped_old.iter().map(|&i| old.satd[i].clone()).collect();
            let unmapped_new: Vec<_> = mapping.unmapped_new.iter().map(|&i| new.satd[i].clone()).collect();
            resolved.extend(resolve_pair(
                &unmapped_old,
                &unmapped_new,
                &new.plain,
                &script,
                self.config.threshold,
            ));
        }
        let resolved = resolve_cross_file_moves(resolved);

        // Look every id up before touching the ledger, since a rename and an
        // addition in one pair may reuse a path.
        let mut carried_ids = Vec::with_capacity(carried.len());
        for (old, new) in carried {
            let id = match self.ledger.lookup(&old) {
                Some(id) => id,
                None => {
                    let id = self.ledger.fresh_instance_id();
                    debug!("untracked SATD {:?} in {}; assigning {id}", old.text(), old.path());
                    self.ledger.mark_unborn(id);
                    id
                }
            };
            carried_ids.push((new, id));
        }
        let mut op_ids = Vec::with_capacity(resolved.len());
        for op in &resolved {
            let id = match &op.old {
                None => self.ledger.fresh_instance_id(),
                Some(old) => match self.ledger.lookup(old) {
                    Some(id) => {
                        if self.ledger.take_unborn(id) {
                            self.orphan(&commit, op, id);
                        }
                        id
                    }
                    None => {
                        let id = self.ledger.fresh_instance_id();
                        self.orphan(&commit, op, id);
                        id
                    }
                },
            };
            if op.unresolved {
                let side = op.new.as_ref().or(op.old.as_ref()).expect("op has a side");
                let detail = format!(
                    "no edit touches {:?} in {}; reporting {} as a fallback",
                    side.text(),
                    side.path(),
                    op.resolution
                );
                self.error(MiningErrorKind::OrphanOperation, &commit, Some(id), detail);
            }
            op_ids.push(id);
        }

        for change in changes {
            for path in [&change.old_path, &change.new_path].into_iter().flatten() {
                self.ledger.forget_path(path);
            }
        }
        for (new, id) in &carried_ids {
            self.ledger.insert(new, *id);
        }
        for (op, &id) in resolved.iter().zip(&op_ids) {
            if let (Some(new), false) = (&op.new, op.resolution.is_terminal()) {
                self.ledger.insert(new, id);
            }
        }

        for (op, id) in resolved.into_iter().zip(op_ids) {
            let satd_id = self.ledger.next_satd_id();
            self.operations.push(SatdOperation {
                satd_id,
                instance_id: id,
                resolution: op.resolution,
                parent_commit: pair.parent.clone(),
                child_commit: pair.child.clone(),
                old_occurrence: op.old,
                new_occurrence: op.new,
            });
        }
        &self.operations[first_new..]
    }

    fn orphan(&mut self, commit: &str, op: &ResolvedOp, id: u64) {
        let old = op.old.as_ref().expect("orphans have an old side");
        let detail = format!(
            "{} on instance {id} whose addition was never observed: {:?} in {}",
            op.resolution,
            old.text(),
            old.path()
        );
        self.error(MiningErrorKind::OrphanOperation, commit, Some(id), detail);
    }

    fn take_snapshot(&self, path: Option<&str>, text: Option<&str>) -> (Snapshot, Vec<String>) {
        match (path, text) {
            (Some(path), Some(text)) => {
                let mut snap = Snapshot::take(path, text, self.config.classifier.as_ref());
                let errors = std::mem::take(&mut snap.errors);
                (snap, errors)
            }
            _ => (Snapshot::default(), Vec::new()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Progress {
    pub done: usize,
    pub total: usize,
    /// Child commit of the pair being processed.
    pub commit: String,
}

impl Progress {
    pub fn percent(&self) -> f64 {
        if self.total == 0 {
            100.0
        } else {
            100.0 * self.done as f64 / self.total as f64
        }
    }
}

#[derive(Debug, Clone)]
pub struct MiningOutcome {
    pub project_name: String,
    pub project_url: String,
    pub terminal: CommitMeta,
    /// Every commit referenced by a pair, oldest first.
    pub commits: Vec<CommitMeta>,
    pub operations: Vec<SatdOperation>,
    pub errors: Vec<MiningError>,
    /// Number of commit pairs diffed.
    pub diffs: usize,
}

/// Opens (or clones) the repository and mines it up to its terminal commit.
pub fn mine_repository(source: &RepoSource, workdir: &Path, config: &MinerConfig) -> Result<MiningOutcome> {
    let handle = open_repo(source, workdir)?;
    let terminal = resolve_terminal(&handle, source.terminal_sha())?;
    mine_handle(&handle, &terminal, config, Ledger::new(), &mut |_| {})
}

pub fn mine_handle(
    handle: &RepositoryHandle,
    terminal: &CommitMeta,
    config: &MinerConfig,
    ledger: Ledger,
    progress: &mut dyn FnMut(&Progress),
) -> Result<MiningOutcome> {
    let pairs = commit_pairs(handle, terminal)?;
    let mut tracker = Tracker::with_ledger(config.clone(), ledger);
    let mut commits: Vec<CommitMeta> = Vec::new();
    let mut seen = std::collections::HashSet::new();

    for (done, pair) in pairs.iter().enumerate() {
        progress(&Progress {
            done,
            total: pairs.len(),
            commit: pair.child.sha.clone(),
        });
        for meta in pair.parent.iter().chain(std::iter::once(&pair.child)) {
            if seen.insert(meta.sha.clone()) {
                commits.push(meta.clone());
            }
        }
        let changed = changed_files(handle, pair, config.rename_threshold)?;
        tracker.record_warnings(&pair.child.sha, &changed.warnings);
        tracker.process_pair(pair, &changed.changes);
    }
    progress(&Progress {
        done: pairs.len(),
        total: pairs.len(),
        commit: terminal.sha.clone(),
    });

    let (operations, errors) = tracker.into_parts();
    Ok(MiningOutcome {
        project_name: handle.name().to_string(),
        project_url: handle.url().to_string(),
        terminal: terminal.clone(),
        commits,
        operations,
        errors,
        diffs: pairs.len(),
    })
}
