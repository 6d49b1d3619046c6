//! Tolerant single-pass Java lexer that finds comments and blanks out
//! everything that is not code.

use super::{CommentKind, RawComment};

pub(crate) struct Lexed {
    pub comments: Vec<RawComment>,
    /// The source bytes with comments and literal contents replaced by
    /// spaces. Newlines are kept so offsets and line numbers still agree.
    pub masked: Vec<u8>,
}

pub(crate) fn lex(source: &str) -> Lexed {
    let bytes = source.as_bytes();
    let n = bytes.len();
    let mut masked = bytes.to_vec();
    let mut comments = Vec::new();
    let mut line = 1;
    let mut line_has_code = false;
    let mut i = 0;

    let blank = |masked: &mut Vec<u8>, range: std::ops::Range<usize>| {
        for b in &mut masked[range] {
            if *b != b'\n' {
                *b = b' ';
            }
        }
    };

    while i < n {
        match bytes[i] {
            b'\n' => {
                line += 1;
                line_has_code = false;
                i += 1;
            }
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                let end = memchr(b'\n', &bytes[i..]).map_or(n, |p| i + p);
                comments.push(RawComment {
                    kind: CommentKind::Line,
                    start_line: line,
                    end_line: line,
                    text: normalize_line(&source[i + 2..end]),
                    offset: i,
                    code_before: line_has_code,
                });
                blank(&mut masked, i..end);
                i = end;
            }
            b'/' if bytes.get(i + 1) == Some(&b'*') => {
                let is_doc = bytes.get(i + 2) == Some(&b'*') && bytes.get(i + 3) != Some(&b'/');
                let body_start = if is_doc { i + 3 } else { i + 2 };
                let (body_end, end) = match find(b"*/", bytes, body_start) {
                    Some(p) => (p, p + 2),
                    None => (n, n),
                };
                let newlines = bytes[i..end].iter().filter(|&&b| b == b'\n').count();
                comments.push(RawComment {
                    kind: if is_doc { CommentKind::JavaDoc } else { CommentKind::Block },
                    start_line: line,
                    end_line: line + newlines,
                    text: normalize_block(&source[body_start.min(body_end)..body_end]),
                    offset: i,
                    code_before: line_has_code,
                });
                blank(&mut masked, i..end);
                if newlines > 0 {
                    line_has_code = false;
                }
                line += newlines;
                i = end;
            }
            b'"' => {
                line_has_code = true;
                let end = if bytes[i..].starts_with(b"\"\"\"") {
                    text_block_end(bytes, i + 3)
                } else {
                    string_end(bytes, i + 1, b'"')
                };
                let newlines = bytes[i..end].iter().filter(|&&b| b == b'\n').count();
                if end - i > 2 {
                    blank(&mut masked, i + 1..end - 1);
                }
                line += newlines;
                i = end;
            }
            b'\'' => {
                line_has_code = true;
                let end = string_end(bytes, i + 1, b'\'');
                if end - i > 2 {
                    blank(&mut masked, i + 1..end - 1);
                }
                i = end;
            }
            b => {
                if !b.is_ascii_whitespace() {
                    line_has_code = true;
                }
                i += 1;
            }
        }
    }

    Lexed { comments, masked }
}

fn memchr(needle: u8, haystack: &[u8]) -> Option<usize> {
    haystack.iter().position(|&b| b == needle)
}

fn find(needle: &[u8], haystack: &[u8], from: usize) -> Option<usize> {
    if from >= haystack.len() {
        return None;
    }
    haystack[from..]
        .windows(needle.len())
        .position(|w| w == needle)
        .map(|p| p + from)
}

/// End (exclusive) of a string or char literal opened just before `from`.
/// Literals cannot span lines, so an unterminated one stops at the newline.
fn string_end(bytes: &[u8], from: usize, quote: u8) -> usize {
    let mut i = from;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'\n' => return i,
            b if b == quote => return i + 1,
            _ => i += 1,
        }
    }
    bytes.len()
}

fn text_block_end(bytes: &[u8], from: usize) -> usize {
    let mut i = from;
    while i < bytes.len() {
        match bytes[i] {
            b'\\' => i += 2,
            b'"' if bytes[i..].starts_with(b"\"\"\"") => return i + 3,
            _ => i += 1,
        }
    }
    bytes.len()
}

fn normalize_line(body: &str) -> String {
    body.trim_start_matches('/').trim().to_string()
}

fn normalize_block(body: &str) -> String {
    let body = body.trim_end().trim_end_matches('*');
    let lines: Vec<&str> = body
        .lines()
        .map(|l| l.trim().trim_start_matches('*').trim())
        .collect();
    let first = lines.iter().position(|l| !l.is_empty());
    let last = lines.iter().rposition(|l| !l.is_empty());
    match (first, last) {
        (Some(a), Some(b)) => lines[a..=b].join("\n"),
        _ => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_comments_and_literals() {
        let src = "int a = 1; // hi\nString s = \"x // y\";\n/* b\n c */ char c = '\\'';\n";
        let lexed = lex(src);
        assert_eq!(lexed.masked.len(), src.len());
        let masked = String::from_utf8(lexed.masked).unwrap();
        assert!(!masked.contains("hi"));
        assert!(!masked.contains("//"));
        assert!(masked.contains("char c = '  ';"));
        assert_eq!(masked.lines().count(), src.lines().count());
        assert_eq!(lexed.comments.len(), 2);
    }

    #[test]
    fn block_normalization() {
        assert_eq!(normalize_block("*\n   * Returns x.\n   *\n   * @param a thing\n   "), "Returns x.\n\n@param a thing");
        assert_eq!(normalize_block(" TODO fix "), "TODO fix");
        assert_eq!(normalize_block(""), "");
        assert_eq!(normalize_block(" a **"), "a");
    }

    #[test]
    fn text_blocks_shield_comment_markers() {
        let src = "String q = \"\"\"\n  /* not */ // nope\n  \"\"\";\n// real\n";
        let lexed = lex(src);
        assert_eq!(lexed.comments.len(), 1);
        assert_eq!(lexed.comments[0].text, "real");
        assert_eq!(lexed.comments[0].start_line, 4);
    }
}
