//! Independent reference implementations used to check the library.

use proptest::prelude::*;

/// Plain recursive edit distance with memoization over suffix indexes.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut memo = vec![vec![None; b.len() + 1]; a.len() + 1];
    fn go(a: &[char], b: &[char], i: usize, j: usize, memo: &mut Vec<Vec<Option<usize>>>) -> usize {
        if let Some(v) = memo[i][j] {
            return v;
        }
        let v = if i == a.len() {
            b.len() - j
        } else if j == b.len() {
            a.len() - i
        } else if a[i] == b[j] {
            go(a, b, i + 1, j + 1, memo)
        } else {
            1 + go(a, b, i + 1, j, memo)
                .min(go(a, b, i, j + 1, memo))
                .min(go(a, b, i + 1, j + 1, memo))
        };
        memo[i][j] = Some(v);
        v
    }
    go(&a, &b, 0, 0, &mut memo)
}

pub fn normalized(a: &str, b: &str) -> f64 {
    let d = edit_distance(a, b);
    let total = a.chars().count() + b.chars().count() + d;
    if total == 0 {
        0.0
    } else {
        2.0 * d as f64 / total as f64
    }
}

/// Longest common subsequence by trying every subset of `a`.
pub fn exhaustive_lcs(a: &[&str], b: &[&str]) -> usize {
    assert!(a.len() <= 16);
    let is_subsequence = |mask: u32| {
        let mut j = 0;
        for (i, line) in a.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            while j < b.len() && b[j] != *line {
                j += 1;
            }
            if j == b.len() {
                return false;
            }
            j += 1;
        }
        true
    };
    (0..1u32 << a.len())
        .filter(|&m| is_subsequence(m))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Whole-word, case-insensitive containment by scanning every position.
pub fn word_match(text: &str, pattern: &str) -> bool {
    let text: Vec<char> = text.to_lowercase().chars().collect();
    let pat: Vec<char> = pattern.to_lowercase().chars().collect();
    if pat.is_empty() || pat.len() > text.len() {
        return false;
    }
    let word = |c: char| c.is_alphanumeric() || c == '_';
    (0..=text.len() - pat.len()).any(|i| {
        text[i..i + pat.len()] == pat[..]
            && (i == 0 || !word(text[i - 1]))
            && (i + pat.len() == text.len() || !word(text[i + pat.len()]))
    })
}

/// Short strings over a small alphabet so collisions are common.
pub fn short_string() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop::sample::select(vec!['a', 'b', 'c', 'é', ' ']), 0..=8)
        .prop_map(|cs| cs.into_iter().collect())
}

/// Files of up to `max` lines from a three-line vocabulary, with or without
/// a final newline.
pub fn line_file(max: usize) -> impl Strategy<Value = String> {
    (proptest::collection::vec(prop::sample::select(vec!["a", "b", "c"]), 0..=max), any::<bool>()).prop_map(
        |(lines, trailing)| {
            let mut s = lines.join("\n");
            if trailing && !s.is_empty() {
                s.push('\n');
            }
            s
        },
    )
}
