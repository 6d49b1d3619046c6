//! Repository access: open or clone, resolve the terminal commit, and walk
//! the first-parent chain into single-parent commit pairs.

use std::fmt;
use std::path::{Path, PathBuf};

use git2::build::RepoBuilder;
use git2::{Commit, Cred, ErrorClass, ErrorCode, FetchOptions, Oid, RemoteCallbacks, Repository};
use log::{debug, info};

use crate::{Error, Result};

/// Username and secret (password or token) for private remotes.
#[derive(Clone, PartialEq, Eq)]
pub struct Credentials {
    pub username: String,
    pub secret: String,
}

impl fmt::Debug for Credentials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Credentials")
            .field("username", &self.username)
            .field("secret", &"<redacted>")
            .finish()
    }
}

/// One repository to mine, as listed in the repositories CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepoSource {
    pub url_or_path: String,
    pub credentials: Option<Credentials>,
    terminal_sha: Option<String>,
    /// Branch to mine instead of the default branch head.
    pub branch: Option<String>,
}

impl RepoSource {
    pub fn new(url_or_path: impl Into<String>) -> Self {
        Self {
            url_or_path: url_or_path.into(),
            credentials: None,
            terminal_sha: None,
            branch: None,
        }
    }

    /// Pins the mining range to end at `sha`, which must be 40 lowercase hex characters.
    pub fn with_terminal(mut self, sha: impl Into<String>) -> Result<Self> {
        let sha = sha.into();
        if !is_full_sha(&sha) {
            return Err(Error::InvalidSha(sha));
        }
        self.terminal_sha = Some(sha);
        Ok(self)
    }

    pub fn with_credentials(mut self, credentials: Option<Credentials>) -> Self {
        self.credentials = credentials;
        self
    }

    pub fn with_branch(mut self, branch: Option<String>) -> Self {
        self.branch = branch;
        self
    }

    pub fn terminal_sha(&self) -> Option<&str> {
        self.terminal_sha.as_deref()
    }

    /// Short display name, `owner/name` for URLs and the last two path
    /// components for local paths.
    pub fn project_name(&self) -> String {
        project_name(&self.url_or_path)
    }
}

pub fn is_full_sha(s: &str) -> bool {
    s.len() == 40 && s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
}

fn project_name(url: &str) -> String {
    let trimmed = url.trim_end_matches('/');
    let trimmed = trimmed.strip_suffix(".git").unwrap_or(trimmed);
    let parts: Vec<&str> = trimmed
        .split(['/', ':', '\\'])
        .filter(|p| !p.is_empty())
        .collect();
    match parts.as_slice() {
        [] => url.to_string(),
        [one] => (*one).to_string(),
        [.., owner, name] => format!("{owner}/{name}"),
    }
}

/// Identity and authorship metadata of one commit. Times are UTC seconds.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommitMeta {
    pub sha: String,
    pub author_name: String,
    pub author_time: i64,
    pub committer_name: String,
    pub committer_time: i64,
}

impl CommitMeta {
    pub fn from_commit(commit: &Commit<'_>) -> Self {
        let author = commit.author();
        let committer = commit.committer();
        Self {
            sha: commit.id().to_string(),
            author_name: String::from_utf8_lossy(author.name_bytes()).into_owned(),
            author_time: author.when().seconds(),
            committer_name: String::from_utf8_lossy(committer.name_bytes()).into_owned(),
            committer_time: committer.when().seconds(),
        }
    }

    pub fn short_sha(&self) -> &str {
        &self.sha[..self.sha.len().min(7)]
    }
}

/// A child commit and its only parent. The root commit is paired with an
/// empty-tree pseudo-parent (`parent == None`) so its comments count as added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitPair {
    pub parent: Option<CommitMeta>,
    pub child: CommitMeta,
}

/// An opened repository plus the name it is reported under.
pub struct RepositoryHandle {
    repo: Repository,
    name: String,
    url: String,
    branch: Option<String>,
}

impl fmt::Debug for RepositoryHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RepositoryHandle")
            .field("name", &self.name)
            .field("url", &self.url)
            .field("path", &self.repo.path())
            .finish()
    }
}

impl RepositoryHandle {
    pub fn git(&self) -> &Repository {
        &self.repo
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn url(&self) -> &str {
        &self.url
    }

    pub fn root(&self) -> &Path {
        self.repo.workdir().unwrap_or_else(|| self.repo.path())
    }
}

/// Opens a local clone, or clones `source` into `workdir`. An existing clone
/// whose `origin` matches the URL is reused.
pub fn open_repo(source: &RepoSource, workdir: &Path) -> Result<RepositoryHandle> {
    let location = source.url_or_path.trim();
    let handle = |repo| RepositoryHandle {
        repo,
        name: source.project_name(),
        url: location.to_string(),
        branch: source.branch.clone(),
    };

    let local = Path::new(location);
    if local.exists() {
        let repo = Repository::open(local).map_err(|e| match e.code() {
            ErrorCode::NotFound => Error::UnreachableRepository(location.to_string()),
            _ => Error::Git(e),
        })?;
        debug!("opened local repository {}", local.display());
        return Ok(handle(repo));
    }

    if !looks_like_remote(location) {
        return Err(Error::UnreachableRepository(location.to_string()));
    }

    let target = workdir.join(clone_dir_name(location));
    if target.exists() {
        let repo = Repository::open(&target)?;
        let origin = repo
            .find_remote("origin")
            .ok()
            .and_then(|r| r.url().ok().map(str::to_owned));
        if origin.as_deref() == Some(location) {
            debug!("reusing clone at {}", target.display());
            return Ok(handle(repo));
        }
        return Err(Error::Config(format!(
            "{} already holds a clone of {}",
            target.display(),
            origin.unwrap_or_else(|| "an unknown origin".into())
        )));
    }

    info!("cloning {location} into {}", target.display());
    std::fs::create_dir_all(workdir).map_err(|e| Error::io(workdir, e))?;
    let mut callbacks = RemoteCallbacks::new();
    if let Some(creds) = source.credentials.clone() {
        let mut attempts = 0;
        callbacks.credentials(move |_url, _user, _allowed| {
            attempts += 1;
            if attempts > 1 {
                return Err(git2::Error::from_str("credentials rejected"));
            }
            Cred::userpass_plaintext(&creds.username, &creds.secret)
        });
    }
    let mut fetch = FetchOptions::new();
    fetch.remote_callbacks(callbacks);
    let repo = RepoBuilder::new()
        .fetch_options(fetch)
        .clone(location, &target)
        .map_err(|e| classify_clone_error(location, e))?;
    Ok(handle(repo))
}

fn looks_like_remote(location: &str) -> bool {
    location.contains("://") || location.starts_with("git@")
}

fn clone_dir_name(url: &str) -> PathBuf {
    let name: String = project_name(url)
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect();
    PathBuf::from(name)
}

fn classify_clone_error(url: &str, e: git2::Error) -> Error {
    if e.code() == ErrorCode::Auth || e.message().contains("credentials rejected") {
        Error::AuthenticationFailed(url.to_string())
    } else if matches!(e.class(), ErrorClass::Net | ErrorClass::Http | ErrorClass::Ssh)
        || e.code() == ErrorCode::NotFound
    {
        Error::UnreachableRepository(format!("{url}: {}", e.message()))
    } else {
        Error::Git(e)
    }
}

/// Returns the commit named by `terminal_sha`, else the head of the chosen
/// branch, else the repository's HEAD.
pub fn resolve_terminal(repo: &RepositoryHandle, terminal_sha: Option<&str>) -> Result<CommitMeta> {
    Ok(CommitMeta::from_commit(&terminal_commit(repo, terminal_sha)?))
}

fn terminal_commit<'r>(repo: &'r RepositoryHandle, terminal_sha: Option<&str>) -> Result<Commit<'r>> {
    let git = &repo.repo;
    if let Some(sha) = terminal_sha {
        let oid = Oid::from_str(sha).map_err(|_| Error::CommitNotFound(sha.to_string()))?;
        return git
            .find_commit(oid)
            .map_err(|_| Error::CommitNotFound(sha.to_string()));
    }
    if let Some(branch) = &repo.branch {
        let candidates = [
            format!("refs/heads/{branch}"),
            format!("refs/remotes/origin/{branch}"),
        ];
        for name in &candidates {
            if let Ok(reference) = git.find_reference(name) {
                return Ok(reference.peel_to_commit()?);
            }
        }
        return Err(Error::CommitNotFound(format!("branch {branch}")));
    }
    let head = git
        .head()
        .map_err(|_| Error::CommitNotFound("HEAD".to_string()))?;
    Ok(head.peel_to_commit()?)
}

/// Walks first parents from `terminal` back to the root and returns the
/// single-parent pairs, oldest first. Merge commits produce no pair.
pub fn commit_pairs(repo: &RepositoryHandle, terminal: &CommitMeta) -> Result<Vec<CommitPair>> {
    let git = &repo.repo;
    let oid = Oid::from_str(&terminal.sha).map_err(|_| Error::CommitNotFound(terminal.sha.clone()))?;
    let mut chain = Vec::new();
    let mut current = git.find_commit(oid)?;
    loop {
        let next = if current.parent_count() > 0 {
            Some(current.parent(0)?)
        } else {
            None
        };
        chain.push(current);
        match next {
            Some(parent) => current = parent,
            None => break,
        }
    }
    chain.reverse();

    let mut pairs = Vec::with_capacity(chain.len());
    for commit in &chain {
        match commit.parent_count() {
            0 => pairs.push(CommitPair {
                parent: None,
                child: CommitMeta::from_commit(commit),
            }),
            1 => pairs.push(CommitPair {
                parent: Some(CommitMeta::from_commit(&commit.parent(0)?)),
                child: CommitMeta::from_commit(commit),
            }),
            n => debug!("skipping merge commit {} with {n} parents", commit.id()),
        }
    }
    Ok(pairs)
}
