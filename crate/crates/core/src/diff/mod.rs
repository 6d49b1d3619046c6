//! Line-level edit scripts and per-commit changed-file lists.

mod changes;
mod histogram;
mod myers;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

pub use changes::{changed_files, ChangedFiles, FileChange, FileChangeKind, DEFAULT_RENAME_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DiffAlgorithm {
    #[default]
    Myers,
    Histogram,
}

impl fmt::Display for DiffAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiffAlgorithm::Myers => "myers",
            DiffAlgorithm::Histogram => "histogram",
        })
    }
}

impl FromStr for DiffAlgorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "myers" => Ok(DiffAlgorithm::Myers),
            "histogram" => Ok(DiffAlgorithm::Histogram),
            other => Err(format!("unknown diff algorithm {other:?} (expected myers or histogram)")),
        }
    }
}

/// A closed, 1-based line interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LineInterval {
    pub start: usize,
    pub end: usize,
}

impl LineInterval {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start >= 1 && start <= end, "invalid interval {start}..={end}");
        Self { start, end }
    }

    pub fn intersects(&self, other: &LineInterval) -> bool {
        self.start <= other.end && other.start <= self.end
    }

    pub fn contains(&self, line: usize) -> bool {
        self.start <= line && line <= self.end
    }
}

/// One contiguous replace / insert / delete region.
///
/// `old_start` and `new_start` are the 1-based positions where the region
/// begins on each side; for an empty side it is the position of the line
/// that follows the region. `added` carries the replacement lines
/// (terminators included) so a script can be applied on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hunk {
    pub old_start: usize,
    pub old_len: usize,
    pub new_start: usize,
    pub new_len: usize,
    pub added: Vec<String>,
}

impl Hunk {
    pub fn old_span(&self) -> Option<LineInterval> {
        (self.old_len > 0).then(|| LineInterval::new(self.old_start, self.old_start + self.old_len - 1))
    }

    pub fn new_span(&self) -> Option<LineInterval> {
        (self.new_len > 0).then(|| LineInterval::new(self.new_start, self.new_start + self.new_len - 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditScript {
    pub hunks: Vec<Hunk>,
    pub algorithm: DiffAlgorithm,
}

impl EditScript {
    pub fn is_empty(&self) -> bool {
        self.hunks.is_empty()
    }

    /// Number of changed lines (deleted plus inserted).
    pub fn edit_len(&self) -> usize {
        self.hunks.iter().map(|h| h.old_len + h.new_len).sum()
    }

    /// Rebuilds the new text from `old`.
    pub fn apply(&self, old: &str) -> String {
        let lines = split_lines(old);
        let mut out = String::with_capacity(old.len());
        let mut next = 0;
        for hunk in &self.hunks {
            let begin = hunk.old_start - 1;
            for line in &lines[next..begin] {
                out.push_str(line);
            }
            for line in &hunk.added {
                out.push_str(line);
            }
            next = begin + hunk.old_len;
        }
        for line in &lines[next..] {
            out.push_str(line);
        }
        out
    }

    /// True when any hunk impacts the given ranges.
    pub fn impacts(&self, old_range: Option<LineInterval>, new_range: Option<LineInterval>) -> bool {
        self.hunks.iter().any(|h| hunk_impacts(h, old_range, new_range))
    }
}

/// Splits text into lines, keeping each line's terminator.
pub fn split_lines(text: &str) -> Vec<&str> {
    text.split_inclusive('\n').collect()
}

/// A run of `len` equal lines starting at 0-based `old` / `new` indexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Match {
    pub old: usize,
    pub new: usize,
    pub len: usize,
}

pub fn diff_lines(old_text: &str, new_text: &str, algorithm: DiffAlgorithm) -> EditScript {
    let old_lines = split_lines(old_text);
    let new_lines = split_lines(new_text);

    let mut ids: HashMap<&str, u32> = HashMap::new();
    let old_ids = intern(&old_lines, &mut ids);
    let new_ids = intern(&new_lines, &mut ids);

    let mut matches = Vec::new();
    match algorithm {
        DiffAlgorithm::Myers => myers::diff(&old_ids, &new_ids, &mut matches),
        DiffAlgorithm::Histogram => histogram::diff(&old_ids, &new_ids, &mut matches),
    }
    matches.sort_by_key(|m| (m.old, m.new));
    matches.push(Match {
        old: old_ids.len(),
        new: new_ids.len(),
        len: 0,
    });

    let mut hunks = Vec::new();
    let (mut old_pos, mut new_pos) = (0, 0);
    for m in matches {
        if m.old > old_pos || m.new > new_pos {
            hunks.push(Hunk {
                old_start: old_pos + 1,
                old_len: m.old - old_pos,
                new_start: new_pos + 1,
                new_len: m.new - new_pos,
                added: new_lines[new_pos..m.new].iter().map(|l| l.to_string()).collect(),
            });
        }
        old_pos = m.old + m.len;
        new_pos = m.new + m.len;
    }
    EditScript { hunks, algorithm }
}

fn intern<'a>(lines: &[&'a str], ids: &mut HashMap<&'a str, u32>) -> Vec<u32> {
    lines
        .iter()
        .map(|line| {
            let next = ids.len() as u32;
            *ids.entry(line).or_insert(next)
        })
        .collect()
}

/// True iff the hunk's old-side span intersects `old_range` or its new-side
/// span intersects `new_range`. Empty sides intersect nothing.
pub fn hunk_impacts(hunk: &Hunk, old_range: Option<LineInterval>, new_range: Option<LineInterval>) -> bool {
    let old_hit = matches!((hunk.old_span(), old_range), (Some(h), Some(r)) if h.intersects(&r));
    let new_hit = matches!((hunk.new_span(), new_range), (Some(h), Some(r)) if h.intersects(&r));
    old_hit || new_hit
}
