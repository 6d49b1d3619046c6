//! Linear-space Myers diff (divide and conquer on the middle snake).
//!
//! * time: `O((N+M)D)`
//! * space: `O(N+M)`

use std::ops::{Index, IndexMut, Range};

use super::Match;

pub(crate) fn diff(old: &[u32], new: &[u32], out: &mut Vec<Match>) {
    diff_range(old, 0..old.len(), new, 0..new.len(), out);
}

pub(crate) fn diff_range(
    old: &[u32],
    old_range: Range<usize>,
    new: &[u32],
    new_range: Range<usize>,
    out: &mut Vec<Match>,
) {
    let max_d = max_d(old_range.len(), new_range.len());
    let mut vf = V::new(max_d);
    let mut vb = V::new(max_d);
    conquer(old, old_range, new, new_range, &mut vf, &mut vb, out);
}

fn max_d(len1: usize, len2: usize) -> usize {
    (len1 + len2).div_ceil(2) + 1
}

struct V {
    offset: isize,
    v: Vec<usize>,
}

impl V {
    fn new(max_d: usize) -> Self {
        Self {
            offset: max_d as isize,
            v: vec![0; 2 * max_d],
        }
    }
}

impl Index<isize> for V {
    type Output = usize;

    fn index(&self, index: isize) -> &usize {
        &self.v[(index + self.offset) as usize]
    }
}

impl IndexMut<isize> for V {
    fn index_mut(&mut self, index: isize) -> &mut usize {
        &mut self.v[(index + self.offset) as usize]
    }
}

pub(crate) fn common_prefix_len(old: &[u32], old_range: Range<usize>, new: &[u32], new_range: Range<usize>) -> usize {
    old[old_range]
        .iter()
        .zip(&new[new_range])
        .take_while(|(a, b)| a == b)
        .count()
}

pub(crate) fn common_suffix_len(old: &[u32], old_range: Range<usize>, new: &[u32], new_range: Range<usize>) -> usize {
    old[old_range]
        .iter()
        .rev()
        .zip(new[new_range].iter().rev())
        .take_while(|(a, b)| a == b)
        .count()
}

/// Finds the start of a middle snake of an optimal path.
fn find_middle_snake(
    old: &[u32],
    old_range: Range<usize>,
    new: &[u32],
    new_range: Range<usize>,
    vf: &mut V,
    vb: &mut V,
) -> Option<(usize, usize)> {
    let n = old_range.len();
    let m = new_range.len();

    // By the middle-snake lemma the path from either end
    // has to cross diagonal `delta`.
    let delta = n as isize - m as isize;
    let odd = delta & 1 == 1;

    vf[1] = 0;
    vb[1] = 0;

    let d_max = max_d(n, m) as isize;
    for d in 0..d_max {
        for k in (-d..=d).rev().step_by(2) {
            let mut x = if k == -d || (k != d && vf[k - 1] < vf[k + 1]) {
                vf[k + 1]
            } else {
                vf[k - 1] + 1
            };
            let y = (x as isize - k) as usize;
            let (x0, y0) = (x, y);
            if x < n && y < m {
                x += common_prefix_len(
                    old,
                    old_range.start + x..old_range.end,
                    new,
                    new_range.start + y..new_range.end,
                );
            }
            vf[k] = x;
            if odd && (k - delta).abs() < d && vf[k] + vb[-(k - delta)] >= n {
                return Some((x0 + old_range.start, y0 + new_range.start));
            }
        }

        for k in (-d..=d).rev().step_by(2) {
            let mut x = if k == -d || (k != d && vb[k - 1] < vb[k + 1]) {
                vb[k + 1]
            } else {
                vb[k - 1] + 1
            };
            let mut y = (x as isize - k) as usize;
            if x < n && y < m {
                let advance = common_suffix_len(
                    old,
                    old_range.start..old_range.start + n - x,
                    new,
                    new_range.start..new_range.start + m - y,
                );
                x += advance;
                y += advance;
            }
            vb[k] = x;
            if !odd && (k - delta).abs() <= d && vb[k] + vf[-(k - delta)] >= n {
                return Some((n - x + old_range.start, m - y + new_range.start));
            }
        }
    }
    None
}

fn conquer(
    old: &[u32],
    mut old_range: Range<usize>,
    new: &[u32],
    mut new_range: Range<usize>,
    vf: &mut V,
    vb: &mut V,
    out: &mut Vec<Match>,
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
        // None is unreachable without a deadline; the region would stay a replacement.
        if let Some((x, y)) = find_middle_snake(old, old_range.clone(), new, new_range.clone(), vf, vb) {
            conquer(old, old_range.start..x, new, new_range.start..y, vf, vb, out);
            conquer(old, x..old_range.end, new, y..new_range.end, vf, vb, out);
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
