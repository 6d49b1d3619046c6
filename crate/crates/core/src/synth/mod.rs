//! Scripted Git fixtures with known ground truth, and scoring of mined
//! operations against that truth.

mod random;
mod script;

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use git2::{FileMode, Oid, Repository, Signature, Time};

pub use random::{random_script, GeneratorConfig};
pub use script::{Action, HistoryScript, Step, StepKind};

use crate::classify::{ClassifierHandle, PatternClassifier, PatternSet};
use crate::git_walk::{open_repo, resolve_terminal, RepoSource};
use crate::tracker::{mine_handle, Ledger, MinerConfig, MiningOutcome, Resolution, SatdOperation};
use crate::{Error, Result};

/// Seconds since the epoch of the first scripted commit.
pub const BASE_TIME: i64 = 1_577_836_800;
const SIDE_FILE: &str = "side.txt";

/// An operation the script says should be mined.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthOp {
    pub resolution: Resolution,
    /// Full sha of the commit that should carry the operation.
    pub commit: String,
    pub text: String,
}

impl TruthOp {
    pub fn of(op: &SatdOperation) -> Self {
        Self {
            resolution: op.resolution,
            commit: op.child_commit.sha.clone(),
            text: op.text().to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BuiltRepo {
    pub path: PathBuf,
    /// One sha per step, in order. For merge steps, the merge commit.
    pub step_commits: Vec<String>,
    pub truth: Vec<TruthOp>,
}

impl HistoryScript {
    /// The built-in patterns plus the script's own.
    pub fn classifier(&self) -> ClassifierHandle {
        let set = self
            .patterns
            .iter()
            .fold(PatternSet::built_in(), |set, p| set.with_pattern(p));
        Arc::new(PatternClassifier::new(set))
    }
}

fn apply(files: &mut BTreeMap<String, String>, action: &Action, step: usize) -> Result<()> {
    let missing = |path: &str| Error::Script {
        line: 0,
        message: format!("step {step}: no file {path:?}"),
    };
    match action {
        Action::WriteFile { path, content } => {
            files.insert(path.clone(), content.clone());
        }
        Action::EditLines {
            path,
            start,
            count,
            lines,
        } => {
            let text = files.get_mut(path).ok_or_else(|| missing(path))?;
            let mut current: Vec<String> = text.lines().map(str::to_string).collect();
            let begin = start - 1;
            if begin + count > current.len() {
                return Err(Error::Script {
                    line: 0,
                    message: format!("step {step}: edit of {path} past its {} lines", current.len()),
                });
            }
            current.splice(begin..begin + count, lines.iter().cloned());
            *text = current.iter().map(|l| format!("{l}\n")).collect();
        }
        Action::RenameFile { from, to } => {
            let content = files.remove(from).ok_or_else(|| missing(from))?;
            files.insert(to.clone(), content);
        }
        Action::DeleteFile { path } => {
            files.remove(path).ok_or_else(|| missing(path))?;
        }
    }
    Ok(())
}

/// Writes `files` as a nested tree.
fn write_tree(repo: &Repository, files: &BTreeMap<String, String>) -> Result<Oid> {
    let mut dirs: BTreeMap<&str, BTreeMap<String, String>> = BTreeMap::new();
    let mut builder = repo.treebuilder(None)?;
    for (path, content) in files {
        match path.split_once('/') {
            Some((dir, rest)) => {
                dirs.entry(dir).or_default().insert(rest.to_string(), content.clone());
            }
            None => {
                let blob = repo.blob(content.as_bytes())?;
                builder.insert(path, blob, FileMode::Blob.into())?;
            }
        }
    }
    for (dir, inner) in dirs {
        let sub = write_tree(repo, &inner)?;
        builder.insert(dir, sub, FileMode::Tree.into())?;
    }
    Ok(builder.write()?)
}

/// Materializes the script as a repository at `dir` on branch `main`,
/// one commit per step with strictly increasing timestamps.
pub fn build_repo(script: &HistoryScript, dir: &Path) -> Result<BuiltRepo> {
    if script.steps.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let repo = Repository::init(dir)?;
    repo.set_head("refs/heads/main")?;

    let mut files: BTreeMap<String, String> = BTreeMap::new();
    let mut head: Option<Oid> = None;
    let mut clock = 0i64;
    let mut tick = || {
        clock += 1;
        Time::new(BASE_TIME + clock * 60, 0)
    };
    let mut step_commits = Vec::new();
    let mut truth = Vec::new();

    for (i, step) in script.steps.iter().enumerate() {
        let mut parents: Vec<Oid> = head.into_iter().collect();
        if step.kind == StepKind::Merge {
            let base = head.ok_or_else(|| Error::Script {
                line: 0,
                message: "a merge step needs an earlier commit".into(),
            })?;
            let mut side_files = files.clone();
            let side_text = format!("side change {}\n", i + 1);
            side_files.insert(SIDE_FILE.into(), side_text.clone());
            let sig = Signature::new("Side Author", "side@example.com", &tick())?;
            let tree = repo.find_tree(write_tree(&repo, &side_files)?)?;
            let side = repo.commit(None, &sig, &sig, "side branch", &tree, &[&repo.find_commit(base)?])?;
            parents.push(side);
            files.insert(SIDE_FILE.into(), side_text);
        }
        for action in &step.actions {
            apply(&mut files, action, i + 1)?;
        }
        let sig = Signature::new("Synth Author", "synth@example.com", &tick())?;
        let tree = repo.find_tree(write_tree(&repo, &files)?)?;
        let parent_commits = parents
            .iter()
            .map(|p| repo.find_commit(*p))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let parent_refs: Vec<&git2::Commit<'_>> = parent_commits.iter().collect();
        let oid = repo.commit(Some("refs/heads/main"), &sig, &sig, &step.message, &tree, &parent_refs)?;
        head = Some(oid);
        let sha = oid.to_string();
        truth.extend(step.expected.iter().map(|(resolution, text)| TruthOp {
            resolution: *resolution,
            commit: sha.clone(),
            text: text.clone(),
        }));
        step_commits.push(sha);
    }
    Ok(BuiltRepo {
        path: dir.to_path_buf(),
        step_commits,
        truth,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Tally {
    pub mined: usize,
    pub truth: usize,
    pub matched: usize,
}

impl Tally {
    /// Matched over mined; 1.0 when nothing was mined.
    pub fn precision(&self) -> f64 {
        if self.mined == 0 {
            1.0
        } else {
            self.matched as f64 / self.mined as f64
        }
    }

    /// Matched over expected; 1.0 when nothing was expected.
    pub fn recall(&self) -> f64 {
        if self.truth == 0 {
            1.0
        } else {
            self.matched as f64 / self.truth as f64
        }
    }

    pub fn add(&mut self, other: &Tally) {
        self.mined += other.mined;
        self.truth += other.truth;
        self.matched += other.matched;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    Missing(TruthOp),
    Unexpected(TruthOp),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreReport {
    pub per_resolution: BTreeMap<Resolution, Tally>,
    pub overall: Tally,
    pub mismatches: Vec<Mismatch>,
}

impl ScoreReport {
    pub fn tally(&self, resolution: Resolution) -> Tally {
        self.per_resolution.get(&resolution).copied().unwrap_or_default()
    }

    pub fn is_perfect(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn merge(&mut self, other: &ScoreReport) {
        for (res, t) in &other.per_resolution {
            self.per_resolution.entry(*res).or_default().add(t);
        }
        self.overall.add(&other.overall);
        self.mismatches.extend(other.mismatches.iter().cloned());
    }
}

/// Multiset match on (resolution, child commit, text).
pub fn score(mined: &[SatdOperation], truth: &[TruthOp]) -> ScoreReport {
    let mut expected: HashMap<&TruthOp, usize> = HashMap::new();
    for t in truth {
        *expected.entry(t).or_default() += 1;
    }
    let mut report = ScoreReport::default();
    let mut unexpected = Vec::new();
    for op in mined {
        let got = TruthOp::of(op);
        let tally = report.per_resolution.entry(got.resolution).or_default();
        tally.mined += 1;
        match expected.get_mut(&got) {
            Some(n) if *n > 0 => {
                *n -= 1;
                tally.matched += 1;
            }
            _ => unexpected.push(got),
        }
    }
    for t in truth {
        report.per_resolution.entry(t.resolution).or_default().truth += 1;
    }
    let mut missing: Vec<TruthOp> = expected
        .into_iter()
        .flat_map(|(t, n)| std::iter::repeat_n(t.clone(), n))
        .collect();
    missing.sort();
    unexpected.sort();
    report.mismatches = missing
        .into_iter()
        .map(Mismatch::Missing)
        .chain(unexpected.into_iter().map(Mismatch::Unexpected))
        .collect();
    report.overall = report.per_resolution.values().fold(Tally::default(), |mut acc, t| {
        acc.add(t);
        acc
    });
    report
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub built: BuiltRepo,
    pub outcome: MiningOutcome,
    pub report: ScoreReport,
}

/// Builds the script at `dir`, mines it with the script's classifier, and
/// scores the result.
pub fn run_script(script: &HistoryScript, dir: &Path, config: &MinerConfig) -> Result<ScenarioRun> {
    let built = build_repo(script, dir)?;
    let config = MinerConfig {
        classifier: script.classifier(),
        ..config.clone()
    };
    let source = RepoSource::new(dir.to_string_lossy().into_owned());
    let handle = open_repo(&source, dir)?;
    let terminal = resolve_terminal(&handle, None)?;
    let outcome = mine_handle(&handle, &terminal, &config, Ledger::new(), &mut |_| {})?;
    let report = score(&outcome.operations, &built.truth);
    Ok(ScenarioRun { built, outcome, report })
}
