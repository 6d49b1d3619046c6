//! Tracks SATD instances across commit pairs.
//!
//! For every changed Java file the tracker snapshots both versions, maps
//! occurrences that survived untouched, and resolves each leftover to one
//! lifecycle operation. A ledger threads instance ids through the history.

mod ledger;
mod levenshtein;
mod mapping;
mod miner;
mod resolve;
mod snapshot;

use std::fmt;
use std::str::FromStr;

use crate::comments::CommentInstance;
use crate::git_walk::CommitMeta;

pub use ledger::Ledger;
pub use levenshtein::{levenshtein, normalized_levenshtein};
pub use mapping::{map_instances, map_instances_aligned, Mapping};
pub use miner::{mine_handle, mine_repository, MinerConfig, MiningOutcome, Progress, Tracker, DEFAULT_THRESHOLD};
pub use resolve::{resolve_cross_file_moves, resolve_file_events, resolve_pair, ResolvedOp};
pub use snapshot::{snapshot, Snapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resolution {
    SatdAdded,
    SatdRemoved,
    SatdChanged,
    FileRemoved,
    FilePathChanged,
    ClassOrMethodChanged,
    SatdMovedFile,
}

impl Resolution {
    pub const ALL: [Resolution; 7] = [
        Resolution::SatdAdded,
        Resolution::SatdRemoved,
        Resolution::SatdChanged,
        Resolution::FileRemoved,
        Resolution::FilePathChanged,
        Resolution::ClassOrMethodChanged,
        Resolution::SatdMovedFile,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Resolution::SatdAdded => "SATD_ADDED",
            Resolution::SatdRemoved => "SATD_REMOVED",
            Resolution::SatdChanged => "SATD_CHANGED",
            Resolution::FileRemoved => "FILE_REMOVED",
            Resolution::FilePathChanged => "FILE_PATH_CHANGED",
            Resolution::ClassOrMethodChanged => "CLASS_OR_METHOD_CHANGED",
            Resolution::SatdMovedFile => "SATD_MOVED_FILE",
        }
    }

    /// Whether the operation ends the instance.
    pub fn is_terminal(&self) -> bool {
        matches!(self, Resolution::SatdRemoved | Resolution::FileRemoved)
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Resolution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Resolution::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown resolution {s:?}"))
    }
}

/// What makes two occurrences "the same comment".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InstanceKey {
    pub file_path: String,
    pub class: Option<String>,
    pub method: Option<String>,
    pub text: String,
}

/// An SATD comment inside one file version.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatdOccurrence {
    pub key: InstanceKey,
    /// Position among occurrences with an equal key, in document order.
    pub occurrence_index: usize,
    pub comment: CommentInstance,
}

impl SatdOccurrence {
    pub fn text(&self) -> &str {
        &self.key.text
    }

    pub fn path(&self) -> &str {
        &self.key.file_path
    }

    pub(crate) fn scope(&self) -> (Option<&str>, Option<&str>) {
        (self.key.class.as_deref(), self.key.method.as_deref())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SatdOperation {
    pub satd_id: u64,
    pub instance_id: u64,
    pub resolution: Resolution,
    /// Absent for the root commit, which is diffed against an empty tree.
    pub parent_commit: Option<CommitMeta>,
    pub child_commit: CommitMeta,
    pub old_occurrence: Option<SatdOccurrence>,
    pub new_occurrence: Option<SatdOccurrence>,
}

impl SatdOperation {
    /// The new comment text, or the old one when the instance ended.
    pub fn text(&self) -> &str {
        self.new_occurrence
            .as_ref()
            .or(self.old_occurrence.as_ref())
            .map_or("", |o| o.text())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MiningErrorKind {
    OrphanOperation,
    ClassifierFailure,
    DecodeWarning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningError {
    pub kind: MiningErrorKind,
    pub detail: String,
    pub commit: String,
    pub instance_id: Option<u64>,
}

impl fmt::Display for MiningError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let short = &self.commit[..self.commit.len().min(7)];
        write!(f, "{:?} at {short}: {}", self.kind, self.detail)
    }
}
