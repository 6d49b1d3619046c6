use super::{normalized_levenshtein, Resolution, SatdOccurrence};
use crate::comments::CommentInstance;
use crate::diff::{EditScript, FileChangeKind, Hunk, LineInterval};

/// An operation before instance ids are assigned.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedOp {
    pub resolution: Resolution,
    pub old: Option<SatdOccurrence>,
    pub new: Option<SatdOccurrence>,
    /// Set when no rule explained the occurrence and the operation is a
    /// best-effort fallback. The miner reports these as errors.
    pub unresolved: bool,
}

impl ResolvedOp {
    fn new(resolution: Resolution, old: Option<&SatdOccurrence>, new: Option<&SatdOccurrence>) -> Self {
        Self {
            resolution,
            old: old.cloned(),
            new: new.cloned(),
            unresolved: false,
        }
    }
}

/// Whether `h` touches `range` on one side. A non-empty side must overlap
/// the range; an empty side (a pure insertion or deletion point) touches a
/// range when the point lies inside it or on its boundary.
fn touches(start: usize, len: usize, range: LineInterval) -> bool {
    if len > 0 {
        start <= range.end && range.start < start + len
    } else {
        range.start <= start && start <= range.end + 1
    }
}

fn touches_old(h: &Hunk, range: LineInterval) -> bool {
    touches(h.old_start, h.old_len, range)
}

fn touches_new(h: &Hunk, range: LineInterval) -> bool {
    touches(h.new_start, h.new_len, range)
}

fn header_touched(script: &EditScript, old: Option<LineInterval>, new: Option<LineInterval>) -> bool {
    script.hunks.iter().any(|h| {
        old.is_some_and(|r| touches_old(h, r)) || new.is_some_and(|r| touches_new(h, r))
    })
}

#[derive(Clone, Copy)]
enum Candidate {
    Satd(usize),
    Plain(usize),
}

/// Resolves the occurrences left unmapped in one file.
///
/// In order:
/// 1. Identical text whose class or method differs, with a hunk touching
///    either scope header, is `CLASS_OR_METHOD_CHANGED`.
/// 2. Old and new comments touched by one shared hunk, with normalized
///    distance below `threshold`, pair greedily by ascending distance. A
///    new side that is still SATD gives `SATD_CHANGED`; otherwise the old
///    instance is `SATD_REMOVED`.
/// 3. Remaining new occurrences are `SATD_ADDED`, remaining old ones
///    `SATD_REMOVED`. Those touched by no hunk are flagged unresolved.
pub fn resolve_pair(
    unmapped_old: &[SatdOccurrence],
    unmapped_new: &[SatdOccurrence],
    new_plain: &[CommentInstance],
    script: &EditScript,
    threshold: f64,
) -> Vec<ResolvedOp> {
    let mut ops = Vec::new();
    let mut old_used = vec![false; unmapped_old.len()];
    let mut new_used = vec![false; unmapped_new.len()];
    let mut plain_used = vec![false; new_plain.len()];

    for (oi, o) in unmapped_old.iter().enumerate() {
        let hit = unmapped_new.iter().enumerate().position(|(ni, n)| {
            if new_used[ni] || n.text() != o.text() || n.scope() == o.scope() {
                return false;
            }
            let class_moved = o.key.class != n.key.class
                && header_touched(script, o.comment.class_header, n.comment.class_header);
            let method_moved = o.key.method != n.key.method
                && header_touched(script, o.comment.method_header, n.comment.method_header);
            class_moved || method_moved
        });
        if let Some(ni) = hit {
            old_used[oi] = true;
            new_used[ni] = true;
            ops.push(ResolvedOp::new(Resolution::ClassOrMethodChanged, Some(o), Some(&unmapped_new[ni])));
        }
    }

    let mut candidates: Vec<(f64, usize, usize, Candidate)> = Vec::new();
    for (oi, o) in unmapped_old.iter().enumerate().filter(|(i, _)| !old_used[*i]) {
        let old_lines = o.comment.lines();
        let new_side = unmapped_new
            .iter()
            .enumerate()
            .filter(|(i, _)| !new_used[*i])
            .map(|(i, n)| (Candidate::Satd(i), &n.comment))
            .chain(new_plain.iter().enumerate().map(|(i, c)| (Candidate::Plain(i), c)));
        for (cand, n) in new_side {
            let new_lines = n.lines();
            let shared = script
                .hunks
                .iter()
                .any(|h| touches_old(h, old_lines) && touches_new(h, new_lines));
            if !shared {
                continue;
            }
            let dist = normalized_levenshtein(o.text(), n.text());
            if dist < threshold {
                candidates.push((dist, oi, n.comment.start_line, cand));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    for (_, oi, _, cand) in candidates {
        if old_used[oi] {
            continue;
        }
        let o = &unmapped_old[oi];
        match cand {
            Candidate::Satd(ni) if !new_used[ni] => {
                new_used[ni] = true;
                ops.push(ResolvedOp::new(Resolution::SatdChanged, Some(o), Some(&unmapped_new[ni])));
            }
            Candidate::Plain(pi) if !plain_used[pi] => {
                plain_used[pi] = true;
                ops.push(ResolvedOp::new(Resolution::SatdRemoved, Some(o), None));
            }
            _ => continue,
        }
        old_used[oi] = true;
    }

    for n in unmapped_new.iter().zip(&new_used).filter(|(_, used)| !**used).map(|(n, _)| n) {
        let mut op = ResolvedOp::new(Resolution::SatdAdded, None, Some(n));
        op.unresolved = !script.hunks.iter().any(|h| touches_new(h, n.comment.lines()));
        ops.push(op);
    }
    for o in unmapped_old.iter().zip(&old_used).filter(|(_, used)| !**used).map(|(o, _)| o) {
        let mut op = ResolvedOp::new(Resolution::SatdRemoved, Some(o), None);
        op.unresolved = !script.hunks.iter().any(|h| touches_old(h, o.comment.lines()));
        ops.push(op);
    }
    ops
}

/// File-level operations: every occurrence of a removed file is
/// `FILE_REMOVED`; every occurrence carried intact through a rename is
/// `FILE_PATH_CHANGED`. Other kinds produce nothing here.
pub fn resolve_file_events(
    kind: FileChangeKind,
    old: &[SatdOccurrence],
    new: &[SatdOccurrence],
    matched: &[(usize, usize)],
) -> Vec<ResolvedOp> {
    match kind {
        FileChangeKind::Removed => old
            .iter()
            .map(|o| ResolvedOp::new(Resolution::FileRemoved, Some(o), None))
            .collect(),
        FileChangeKind::Renamed => matched
            .iter()
            .map(|&(o, n)| ResolvedOp::new(Resolution::FilePathChanged, Some(&old[o]), Some(&new[n])))
            .collect(),
        FileChangeKind::Added | FileChangeKind::Modified => Vec::new(),
    }
}

/// Merges an `SATD_REMOVED` with an `SATD_ADDED` of identical text in a
/// different file of the same commit pair into one `SATD_MOVED_FILE`.
/// Removals are taken in list order, each pairing with the first unused
/// matching addition. The merged op takes the removal's place.
pub fn resolve_cross_file_moves(ops: Vec<ResolvedOp>) -> Vec<ResolvedOp> {
    let mut ops: Vec<Option<ResolvedOp>> = ops.into_iter().map(Some).collect();
    for ri in 0..ops.len() {
        let Some(removed) = ops[ri].as_ref() else {
            continue;
        };
        if removed.resolution != Resolution::SatdRemoved {
            continue;
        }
        let old = removed.old.as_ref().expect("removal has an old side");
        let partner = ops.iter().position(|op| {
            op.as_ref().is_some_and(|a| {
                a.resolution == Resolution::SatdAdded
                    && a.new
                        .as_ref()
                        .is_some_and(|n| n.text() == old.text() && n.path() != old.path())
            })
        });
        if let Some(ai) = partner {
            let added = ops[ai].take().expect("partner present");
            let slot = ops[ri].as_mut().expect("removal present");
            slot.resolution = Resolution::SatdMovedFile;
            slot.new = added.new;
            slot.unresolved = false;
        }
    }
    ops.into_iter().flatten().collect()
}
