/// Unit-cost edit distance over chars.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() || b.is_empty() {
        return a.len().max(b.len());
    }
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if ca == cb { diag } else { 1 + diag.min(up).min(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// `2d / (|a| + |b| + d)` with lengths in chars; 0 for two empty strings.
/// Unlike `d / max(|a|, |b|)` this keeps the triangle inequality.
pub fn normalized_levenshtein(a: &str, b: &str) -> f64 {
    let d = levenshtein(a, b);
    let total = a.chars().count() + b.chars().count() + d;
    if total == 0 {
        0.0
    } else {
        2.0 * d as f64 / total as f64
    }
}
