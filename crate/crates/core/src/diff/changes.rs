use git2::{Delta, DiffFindOptions, Oid, Repository};
use log::warn;

use crate::git_walk::{CommitPair, RepositoryHandle};
use crate::{Error, Result};

/// Git's default rename similarity, in percent.
pub const DEFAULT_RENAME_THRESHOLD: u16 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FileChangeKind {
    Added,
    Removed,
    Modified,
    Renamed,
}

/// A Java file that differs between the two commits of a pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileChange {
    pub kind: FileChangeKind,
    pub old_path: Option<String>,
    pub new_path: Option<String>,
    pub old_text: Option<String>,
    pub new_text: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct ChangedFiles {
    pub changes: Vec<FileChange>,
    /// Binary files skipped and lossy decodes, one message each.
    pub warnings: Vec<String>,
}

fn is_java(path: Option<&str>) -> bool {
    path.is_some_and(|p| p.ends_with(".java"))
}

/// Lists the Java files that differ between `pair.parent` and `pair.child`.
/// Removed and added files whose content similarity reaches
/// `rename_threshold` percent are reported as renames.
pub fn changed_files(repo: &RepositoryHandle, pair: &CommitPair, rename_threshold: u16) -> Result<ChangedFiles> {
    if rename_threshold > 100 {
        return Err(Error::Config(format!("rename threshold {rename_threshold} exceeds 100")));
    }
    let git = repo.git();
    let tree_of = |sha: &str| -> Result<git2::Tree<'_>> {
        let oid = Oid::from_str(sha).map_err(|_| Error::CommitNotFound(sha.to_string()))?;
        Ok(git.find_commit(oid)?.tree()?)
    };
    let new_tree = tree_of(&pair.child.sha)?;
    let old_tree = pair.parent.as_ref().map(|p| tree_of(&p.sha)).transpose()?;

    let mut diff = git.diff_tree_to_tree(old_tree.as_ref(), Some(&new_tree), None)?;
    let mut find = DiffFindOptions::new();
    find.renames(true)
        .rename_threshold(rename_threshold)
        .rename_limit(10_000);
    diff.find_similar(Some(&mut find))?;

    let mut out = ChangedFiles::default();
    for delta in diff.deltas() {
        let old_path = delta.old_file().path().map(|p| p.to_string_lossy().replace('\\', "/"));
        let new_path = delta.new_file().path().map(|p| p.to_string_lossy().replace('\\', "/"));
        let (old_java, new_java) = (is_java(old_path.as_deref()), is_java(new_path.as_deref()));
        let kind = match delta.status() {
            Delta::Added if new_java => FileChangeKind::Added,
            Delta::Deleted if old_java => FileChangeKind::Removed,
            Delta::Modified | Delta::Typechange if new_java => FileChangeKind::Modified,
            Delta::Renamed | Delta::Copied => match (old_java, new_java) {
                (true, true) if delta.status() == Delta::Renamed => FileChangeKind::Renamed,
                (_, true) if delta.status() == Delta::Copied => FileChangeKind::Added,
                (true, false) => FileChangeKind::Removed,
                (false, true) => FileChangeKind::Added,
                _ => continue,
            },
            _ => continue,
        };
        let (keep_old, keep_new) = match kind {
            FileChangeKind::Added => (false, true),
            FileChangeKind::Removed => (true, false),
            FileChangeKind::Modified | FileChangeKind::Renamed => (true, true),
        };

        let mut load = |keep: bool, id: Oid, path: &Option<String>| -> Result<Option<Option<String>>> {
            if !keep {
                return Ok(Some(None));
            }
            let path = path.as_deref().unwrap_or("?");
            match read_text(git, id, path, &mut out.warnings)? {
                Some(text) => Ok(Some(Some(text))),
                None => Ok(None),
            }
        };
        let Some(old_text) = load(keep_old, delta.old_file().id(), &old_path)? else {
            continue;
        };
        let Some(new_text) = load(keep_new, delta.new_file().id(), &new_path)? else {
            continue;
        };

        out.changes.push(FileChange {
            kind,
            old_path: keep_old.then(|| old_path.clone()).flatten(),
            new_path: keep_new.then(|| new_path.clone()).flatten(),
            old_text,
            new_text,
        });
    }
    Ok(out)
}

/// Reads a blob as text. Binary blobs yield `None`; invalid UTF-8 is
/// decoded lossily. Both cases leave a warning.
fn read_text(git: &Repository, id: Oid, path: &str, warnings: &mut Vec<String>) -> Result<Option<String>> {
    let blob = git.find_blob(id)?;
    let bytes = blob.content();
    if bytes.contains(&0) {
        let message = format!("skipping binary file {path} ({id})");
        warn!("{message}");
        warnings.push(message);
        return Ok(None);
    }
    match std::str::from_utf8(bytes) {
        Ok(text) => Ok(Some(text.to_string())),
        Err(_) => {
            let message = format!("{path} ({id}) is not valid UTF-8; decoded lossily");
            warn!("{message}");
            warnings.push(message);
            Ok(Some(String::from_utf8_lossy(bytes).into_owned()))
        }
    }
}
