//! Histogram diff in the style of JGit's `HistogramDiff`.
//!
//! Each region is split around the longest common run whose rarest element
//! occurs least often in the old side. Regions whose common elements are all
//! too frequent fall back to Myers.

use std::collections::HashMap;
use std::ops::Range;

use super::myers::{self, common_prefix_len, common_suffix_len};
use super::Match;

const MAX_CHAIN_LENGTH: usize = 64;
const MAX_DEPTH: usize = 64;

pub(crate) fn diff(old: &[u32], new: &[u32], out: &mut Vec<Match>) {
    region(old, 0..old.len(), new, 0..new.len(), out, 0);
}

struct Anchor {
    old: usize,
    new: usize,
    len: usize,
    count: usize,
}

fn region(
    old: &[u32],
    mut old_range: Range<usize>,
    new: &[u32],
    mut new_range: Range<usize>,
    out: &mut Vec<Match>,
    depth: usize,
) {
    let prefix = common_prefix_len(old, old_range.clone(), new, new_range.clone());
    if prefix > 0 {
        out.push(Match {
            old: old_range.start,
            new: new_range.start,
            len: prefix,
        });
    }
    old_range.start += prefix;
    new_range.start += prefix;
    let suffix = common_suffix_len(old, old_range.clone(), new, new_range.clone());
    old_range.end -= suffix;
    new_range.end -= suffix;

    if !old_range.is_empty() && !new_range.is_empty() {
        if depth >= MAX_DEPTH {
            myers::diff_range(old, old_range.clone(), new, new_range.clone(), out);
        } else {
            split(old, old_range.clone(), new, new_range.clone(), out, depth);
        }
    }

    if suffix > 0 {
        out.push(Match {
            old: old_range.end,
            new: new_range.end,
            len: suffix,
        });
    }
}

fn split(
    old: &[u32],
    old_range: Range<usize>,
    new: &[u32],
    new_range: Range<usize>,
    out: &mut Vec<Match>,
    depth: usize,
) {
    let mut occurrences: HashMap<u32, Vec<usize>> = HashMap::new();
    for i in old_range.clone() {
        occurrences.entry(old[i]).or_default().push(i);
    }

    let mut best: Option<Anchor> = None;
    let mut saw_common = false;
    let mut bi = new_range.start;
    while bi < new_range.end {
        let Some(positions) = occurrences.get(&new[bi]) else {
            bi += 1;
            continue;
        };
        saw_common = true;
        if positions.len() > MAX_CHAIN_LENGTH {
            bi += 1;
            continue;
        }
        let mut next = bi + 1;
        for &ai in positions {
            if best.as_ref().is_some_and(|b| positions.len() > b.count) {
                break;
            }
            let (mut a_start, mut b_start) = (ai, bi);
            while a_start > old_range.start && b_start > new_range.start && old[a_start - 1] == new[b_start - 1] {
                a_start -= 1;
                b_start -= 1;
            }
            let (mut a_end, mut b_end) = (ai + 1, bi + 1);
            while a_end < old_range.end && b_end < new_range.end && old[a_end] == new[b_end] {
                a_end += 1;
                b_end += 1;
            }
            let count = old[a_start..a_end]
                .iter()
                .map(|t| occurrences[t].len())
                .min()
                .unwrap_or(usize::MAX);
            let len = a_end - a_start;
            let better = match &best {
                None => true,
                Some(b) => count < b.count || (count == b.count && len > b.len),
            };
            if better {
                best = Some(Anchor {
                    old: a_start,
                    new: b_start,
                    len,
                    count,
                });
            }
            next = next.max(b_end);
        }
        bi = next;
    }

    match best {
        Some(anchor) => {
            region(old, old_range.start..anchor.old, new, new_range.start..anchor.new, out, depth + 1);
            out.push(Match {
                old: anchor.old,
                new: anchor.new,
                len: anchor.len,
            });
            region(
                old,
                anchor.old + anchor.len..old_range.end,
                new,
                anchor.new + anchor.len..new_range.end,
                out,
                depth + 1,
            );
        }
        None if saw_common => myers::diff_range(old, old_range, new, new_range, out),
        None => {}
    }
}
