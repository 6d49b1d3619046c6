//! Multi-repository mining runs: argument parsing, the repositories CSV,
//! and the run loop with progress reporting.
//!
//! Status output (progress, completion and failure lines) goes to the
//! writer passed to [`run`]; dataset rows only ever go to the export files.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Mutex};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use log::warn;

use crate::classify::{load_patterns, register_external, ClassifierHandle, PatternClassifier};
use crate::diff::DiffAlgorithm;
use crate::git_walk::{open_repo, resolve_terminal, Credentials, RepoSource};
use crate::store::{init_store, store_target, ProjectInfo, Store};
use crate::tracker::{mine_handle, Ledger, MinerConfig, MiningError, MiningOutcome, DEFAULT_THRESHOLD};
use crate::{Error, Result};

/// Overrides `-u` when set.
pub const USERNAME_ENV: &str = "SATD_GIT_USERNAME";
/// Overrides `-p` when set.
pub const PASSWORD_ENV: &str = "SATD_GIT_PASSWORD";

pub const CSV_EXPORT: &str = "satd_operations.csv";
pub const HTML_EXPORT: &str = "satd_operations.html";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Myers,
    Histogram,
}

impl From<AlgorithmArg> for DiffAlgorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Myers => DiffAlgorithm::Myers,
            AlgorithmArg::Histogram => DiffAlgorithm::Histogram,
        }
    }
}

fn parse_threshold(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err("threshold must be in [0,1]".into())
    }
}

/// Mines self-admitted technical debt from the Git histories listed in a
/// repositories CSV.
#[derive(Debug, Clone, Parser)]
#[command(name = "satd-miner", version)]
pub struct RunConfig {
    /// CSV of repositories: url_or_path[,terminal_sha[,branch]] per line
    #[arg(short = 'r', long = "repos")]
    pub repos_csv: PathBuf,

    /// SQLite database file, or a .properties file naming one
    #[arg(short = 'd', long = "database", default_value = "satd.db")]
    pub store_config: PathBuf,

    #[arg(long, value_enum, default_value_t = AlgorithmArg::Myers)]
    pub diff_algorithm: AlgorithmArg,

    /// Normalized Levenshtein distance below which an edited comment counts as changed
    #[arg(long, value_parser = parse_threshold, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,

    /// Print every mining error instead of only the count
    #[arg(long)]
    pub show_errors: bool,

    /// File of SATD patterns, one per line
    #[arg(long = "patterns")]
    pub patterns_file: Option<PathBuf>,

    /// Shell command used as the SATD classifier instead of the patterns
    #[arg(long = "classifier-cmd")]
    pub external_classifier: Option<String>,

    /// Directory remote repositories are cloned into
    #[arg(long, default_value = "repos")]
    pub workdir: PathBuf,

    /// Directory the CSV and HTML exports are written to
    #[arg(short = 'o', long = "output-dir", default_value = ".")]
    pub output_dir: PathBuf,

    /// Repositories mined concurrently
    #[arg(long = "parallel", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub parallel_repos: u16,

    /// Git username for private remotes
    #[arg(short = 'u', long)]
    pub username: Option<String>,

    /// Git password or token for private remotes
    #[arg(short = 'p', long)]
    pub password: Option<String>,
}

pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    RunConfig::try_parse_from(argv)
}

impl RunConfig {
    /// Flag credentials with the environment taking precedence.
    pub fn credentials(&self) -> Option<Credentials> {
        let username = std::env::var(USERNAME_ENV).ok().or_else(|| self.username.clone())?;
        let secret = std::env::var(PASSWORD_ENV)
            .ok()
            .or_else(|| self.password.clone())
            .unwrap_or_default();
        Some(Credentials { username, secret })
    }

    pub fn classifier(&self) -> Result<ClassifierHandle> {
        match &self.external_classifier {
            Some(cmd) => register_external(cmd),
            None => Ok(PatternClassifier::handle(load_patterns(self.patterns_file.as_deref())?)),
        }
    }

    pub fn miner_config(&self) -> Result<MinerConfig> {
        Ok(MinerConfig {
            threshold: self.threshold,
            algorithm: self.diff_algorithm.into(),
            classifier: self.classifier()?,
            ..MinerConfig::default()
        })
    }
}

/// One source per non-blank line of `url_or_path[,terminal_sha[,branch]]`.
pub fn read_repos_csv(path: &Path) -> Result<Vec<RepoSource>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut sources = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let url = fields.next().unwrap_or_default();
        let mut source = RepoSource::new(url);
        if let Some(sha) = fields.next().filter(|s| !s.is_empty()) {
            source = source
                .with_terminal(sha)
                .map_err(|e| Error::Config(format!("{}:{}: {e}", path.display(), n + 1)))?;
        }
        if let Some(branch) = fields.next().filter(|s| !s.is_empty()) {
            source = source.with_branch(Some(branch.to_string()));
        }
        sources.push(source);
    }
    if sources.is_empty() {
        return Err(Error::Config(format!("{} lists no repositories", path.display())));
    }
    Ok(sources)
}

#[derive(Debug)]
pub struct RepoReport {
    pub project: String,
    pub diffs: usize,
    pub elapsed_ms: u128,
    pub operations: usize,
    pub errors: Vec<MiningError>,
}

#[derive(Debug, Default)]
pub struct RunSummary {
    pub completed: Vec<RepoReport>,
    /// Repository and the error that stopped it.
    pub failed: Vec<(String, String)>,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.failed.is_empty())
    }
}

fn with_commas(n: u128) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

pub fn completion_line(diffs: usize, elapsed_ms: u128, errors: usize, repo: &str) -> String {
    let per = if diffs == 0 { 0.0 } else { elapsed_ms as f64 / diffs as f64 };
    format!(
        "Completed analyzing {diffs} diffs in {}ms ({per:.2}ms/diff, {errors} errors) - {repo}",
        with_commas(elapsed_ms)
    )
}

type Status<'a> = Mutex<&'a mut (dyn Write + Send)>;

fn status_line(status: &Status<'_>, line: &str) {
    let mut out = status.lock().unwrap_or_else(|e| e.into_inner());
    let _ = writeln!(out, "{line}");
}

fn mine_one(source: &RepoSource, config: &RunConfig, miner: &MinerConfig, status: &Status<'_>) -> Result<(MiningOutcome, u128)> {
    let started = Instant::now();
    let handle = open_repo(source, &config.workdir)?;
    let terminal = resolve_terminal(&handle, source.terminal_sha())?;
    let name = handle.name().to_string();
    let mut last_decile = None;
    let outcome = mine_handle(&handle, &terminal, miner, Ledger::new(), &mut |p| {
        let decile = (p.percent() / 10.0) as u32;
        if last_decile != Some(decile) {
            last_decile = Some(decile);
            let short = &p.commit[..p.commit.len().min(7)];
            status_line(status, &format!("Mining SATD ({:.1}%) at {short} - {name}", p.percent()));
        }
    })?;
    Ok((outcome, started.elapsed().as_millis()))
}

/// Mines every listed repository, persisting and exporting after each.
///
/// Store and classifier setup failures abort the run. A repository that
/// fails is reported and skipped; results are written in input order so
/// repeated runs assign the same ids.
pub fn run(config: &RunConfig, status: &mut (dyn Write + Send)) -> Result<RunSummary> {
    let sources = read_repos_csv(&config.repos_csv)?;
    let credentials = config.credentials();
    let sources: Vec<RepoSource> = sources
        .into_iter()
        .map(|s| s.with_credentials(credentials.clone()))
        .collect();
    let mut store = init_store(&store_target(&config.store_config)?)?;
    let miner = config.miner_config()?;
    std::fs::create_dir_all(&config.output_dir).map_err(|e| Error::io(&config.output_dir, e))?;

    let status: Status<'_> = Mutex::new(status);
    let next = AtomicUsize::new(0);
    let workers = usize::from(config.parallel_repos).min(sources.len()).max(1);
    let mut summary = RunSummary::default();

    std::thread::scope(|scope| -> Result<()> {
        let (tx, rx) = mpsc::channel();
        for _ in 0..workers {
            let tx = tx.clone();
            let (sources, next, miner, status) = (&sources, &next, &miner, &status);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(source) = sources.get(i) else { break };
                let result = mine_one(source, config, miner, status);
                if tx.send((i, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        let mut expected = 0;
        for (i, result) in rx {
            pending.insert(i, result);
            while let Some(result) = pending.remove(&expected) {
                let repo = sources[expected].project_name();
                expected += 1;
                match result.and_then(|(outcome, ms)| persist(&mut store, config, outcome, ms)) {
                    Ok(report) => {
                        if config.show_errors {
                            for e in &report.errors {
                                status_line(&status, &e.to_string());
                            }
                        }
                        status_line(
                            &status,
                            &completion_line(report.diffs, report.elapsed_ms, report.errors.len(), &report.project),
                        );
                        summary.completed.push(report);
                    }
                    Err(e) => {
                        warn!("{repo}: {e}");
                        status_line(&status, &format!("Failed analyzing {repo}: {e}"));
                        summary.failed.push((repo, e.to_string()));
                    }
                }
            }
        }
        Ok(())
    })?;
    Ok(summary)
}

fn persist(store: &mut Store, config: &RunConfig, outcome: MiningOutcome, elapsed_ms: u128) -> Result<RepoReport> {
    let project = ProjectInfo {
        name: outcome.project_name.clone(),
        url: outcome.project_url.clone(),
    };
    store.write_operations(&project, &outcome.commits, &outcome.operations)?;
    store.export_csv(&config.output_dir.join(CSV_EXPORT))?;
    store.export_html(&config.output_dir.join(HTML_EXPORT))?;
    Ok(RepoReport {
        project: outcome.project_name,
        diffs: outcome.diffs,
        elapsed_ms,
        operations: outcome.operations.len(),
        errors: outcome.errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_invocation_uses_defaults() {
        let c = parse_args(["satd-miner", "-d", "mySQL.properties", "-r", "repos.csv"]).unwrap();
        assert_eq!(c.repos_csv, PathBuf::from("repos.csv"));
        assert_eq!(c.store_config, PathBuf::from("mySQL.properties"));
        assert_eq!(c.diff_algorithm, AlgorithmArg::Myers);
        assert_eq!(c.threshold, DEFAULT_THRESHOLD);
        assert!(!c.show_errors);
        assert_eq!(c.parallel_repos, 1);
    }

    #[test]
    fn argument_errors() {
        let err = parse_args(["satd-miner", "-r", "x.csv", "--threshold", "1.5"]).unwrap_err();
        assert!(err.to_string().contains("threshold must be in [0,1]"));
        assert!(parse_args(["satd-miner"]).is_err());
        assert!(parse_args(["satd-miner", "-r", "x", "--bogus"]).is_err());
        assert!(parse_args(["satd-miner", "-r", "x", "--parallel", "0"]).is_err());
        let help = parse_args(["satd-miner", "-h"]).unwrap_err();
        assert_eq!(help.kind(), clap::error::ErrorKind::DisplayHelp);
        assert_eq!(help.exit_code(), 0);
    }

    #[test]
    fn completion_format() {
        assert_eq!(
            completion_line(78, 26_103, 0, "apache/tomcat"),
            "Completed analyzing 78 diffs in 26,103ms (334.65ms/diff, 0 errors) - apache/tomcat"
        );
        assert_eq!(with_commas(1_234_567), "1,234,567");
        assert_eq!(with_commas(999), "999");
        assert!(completion_line(0, 5, 1, "r").contains("(0.00ms/diff, 1 errors)"));
    }

    #[test]
    fn repos_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("repos.csv");
        let sha = "a457153".to_string() + &"0".repeat(33);
        std::fs::write(&path, format!("https://github.com/apache/tomcat,{sha}\n\nhttps://example.com/r.git\n/tmp/x,,dev\n")).unwrap();
        let sources = read_repos_csv(&path).unwrap();
        assert_eq!(sources.len(), 3);
        assert_eq!(sources[0].terminal_sha(), Some(sha.as_str()));
        assert_eq!(sources[1].terminal_sha(), None);
        assert_eq!(sources[2].branch.as_deref(), Some("dev"));

        std::fs::write(&path, "r,abc\n").unwrap();
        assert!(matches!(read_repos_csv(&path), Err(Error::Config(m)) if m.contains(":1:")));
        std::fs::write(&path, "\n\n").unwrap();
        assert!(read_repos_csv(&path).is_err());
    }
}
