use std::collections::BTreeMap;

use super::SatdOccurrence;
use crate::diff::EditScript;

/// Result of mapping two occurrence lists. Indices refer to the inputs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Mapping {
    pub matched: Vec<(usize, usize)>,
    pub unmapped_old: Vec<usize>,
    pub unmapped_new: Vec<usize>,
}

type GroupKey<'a> = (Option<&'a str>, Option<&'a str>, &'a str);

fn group_key(o: &SatdOccurrence) -> GroupKey<'_> {
    (o.key.class.as_deref(), o.key.method.as_deref(), o.key.text.as_str())
}

fn groups<'a>(occ: &'a [SatdOccurrence]) -> BTreeMap<GroupKey<'a>, Vec<usize>> {
    let mut out: BTreeMap<GroupKey<'a>, Vec<usize>> = BTreeMap::new();
    for (i, o) in occ.iter().enumerate() {
        out.entry(group_key(o)).or_default().push(i);
    }
    out
}

fn finish(mut matched: Vec<(usize, usize)>, n_old: usize, n_new: usize) -> Mapping {
    matched.sort_unstable();
    let mut used_old = vec![false; n_old];
    let mut used_new = vec![false; n_new];
    for &(o, n) in &matched {
        used_old[o] = true;
        used_new[n] = true;
    }
    Mapping {
        matched,
        unmapped_old: (0..n_old).filter(|&i| !used_old[i]).collect(),
        unmapped_new: (0..n_new).filter(|&i| !used_new[i]).collect(),
    }
}

/// Pairs occurrences with equal class, method, text and occurrence index.
/// File paths are ignored so the two sides of a rename can be mapped.
pub fn map_instances(old: &[SatdOccurrence], new: &[SatdOccurrence]) -> Mapping {
    let new_groups = groups(new);
    let mut matched = Vec::new();
    for (key, old_idx) in groups(old) {
        if let Some(new_idx) = new_groups.get(&key) {
            matched.extend(old_idx.iter().copied().zip(new_idx.iter().copied()));
        }
    }
    finish(matched, old.len(), new.len())
}

/// Like [`map_instances`], but inside a group of identical comments an
/// occurrence the script leaves untouched pairs with the occurrence at its
/// shifted line. Deleting the first of two identical comments then leaves
/// the first one unmapped rather than the second.
pub fn map_instances_aligned(old: &[SatdOccurrence], new: &[SatdOccurrence], script: &EditScript) -> Mapping {
    let new_groups = groups(new);
    let mut matched = Vec::new();
    for (key, old_idx) in groups(old) {
        let Some(new_idx) = new_groups.get(&key) else {
            continue;
        };
        if old_idx.len() == 1 && new_idx.len() == 1 {
            matched.push((old_idx[0], new_idx[0]));
            continue;
        }
        let mut free_old = Vec::new();
        let mut free_new: Vec<usize> = new_idx.clone();
        for &o in &old_idx {
            let lines = old[o].comment.lines();
            let untouched = !script.impacts(Some(lines), None);
            let target = untouched.then(|| shift_line(script, lines.start));
            let hit = target.and_then(|t| free_new.iter().position(|&n| new[n].comment.comment.start_line == t));
            match hit {
                Some(pos) => matched.push((o, free_new.remove(pos))),
                None => free_old.push(o),
            }
        }
        matched.extend(free_old.into_iter().zip(free_new));
    }
    finish(matched, old.len(), new.len())
}

/// Where an old line outside every hunk ends up in the new file.
pub(crate) fn shift_line(script: &EditScript, line: usize) -> usize {
    let mut shifted = line as isize;
    for h in &script.hunks {
        if h.old_start + h.old_len <= line {
            shifted += h.new_len as isize - h.old_len as isize;
        }
    }
    shifted.max(1) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::PatternClassifier;
    use crate::diff::{diff_lines, DiffAlgorithm};
    use crate::tracker::snapshot;

    fn snap(src: &str) -> Vec<SatdOccurrence> {
        snapshot("A.java", src, &PatternClassifier::default())
    }

    #[test]
    fn identity_maps_everything() {
        let src = "class A {\n  // TODO a\n  // x\n\n  // FIXME b\n}\n";
        let m = map_instances(&snap(src), &snap(src));
        assert_eq!(m.matched.len(), 2);
        assert!(m.unmapped_old.is_empty() && m.unmapped_new.is_empty());
    }

    #[test]
    fn spelling_fix_is_unmapped() {
        let old = snap("class A {\n  // Maybe this already exitst, TODO\n}\n");
        let new = snap("class A {\n  // Maybe this already exists, TODO\n}\n");
        let m = map_instances(&old, &new);
        assert_eq!((m.unmapped_old, m.unmapped_new), (vec![0], vec![0]));
    }

    #[test]
    fn method_rename_is_unmapped() {
        let old = snap("class A {\n  void a() {\n    // TODO\n  }\n}\n");
        let new = snap("class A {\n  void b() {\n    // TODO\n  }\n}\n");
        let m = map_instances(&old, &new);
        assert!(m.matched.is_empty());
    }

    #[test]
    fn aligned_mapping_keeps_the_survivor() {
        let old_src = "class A {\n  void m() {\n    // TODO\n    a();\n    // TODO\n  }\n}\n";
        let new_src = "class A {\n  void m() {\n    a();\n    // TODO\n  }\n}\n";
        let (old, new) = (snap(old_src), snap(new_src));
        let script = diff_lines(old_src, new_src, DiffAlgorithm::Myers);

        let by_index = map_instances(&old, &new);
        assert_eq!(by_index.unmapped_old, vec![1]);

        let aligned = map_instances_aligned(&old, &new, &script);
        assert_eq!(aligned.matched, vec![(1, 0)]);
        assert_eq!(aligned.unmapped_old, vec![0]);
    }
}
