//! Brace-depth scanner that recovers the innermost type and method around
//! each comment. Works on masked source, so braces inside comments and
//! literals never count.

use log::debug;

use crate::diff::LineInterval;

#[derive(Debug, Clone, PartialEq, Eq)]
enum ScopeKind {
    Type(String),
    Method(String),
    Block,
}

#[derive(Debug, Clone)]
struct Scope {
    kind: ScopeKind,
    header: LineInterval,
    parent: Option<usize>,
    saved_paren_depth: usize,
}

/// Context for one position in the source.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Context {
    pub class: Option<(String, LineInterval)>,
    pub method: Option<(String, LineInterval)>,
}

/// Resolves the context of every offset in `offsets` (ascending).
pub(crate) fn contexts_at(masked: &[u8], offsets: &[usize]) -> Vec<Context> {
    let mut scopes: Vec<Scope> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut out = Vec::with_capacity(offsets.len());
    let mut pending = offsets.iter().peekable();

    let mut header_start = 0;
    let mut paren_depth = 0usize;
    let mut line = 1;
    let mut line_starts = vec![0usize];

    for (i, &b) in masked.iter().enumerate() {
        while pending.next_if(|&&off| off <= i).is_some() {
            out.push(context_of(&scopes, stack.last().copied()));
        }
        match b {
            b'\n' => {
                line += 1;
                line_starts.push(i + 1);
            }
            b'(' => paren_depth += 1,
            b')' => paren_depth = paren_depth.saturating_sub(1),
            b';' if paren_depth == 0 => header_start = i + 1,
            b'{' => {
                let parent = stack.last().copied();
                let parent_is_type = parent.is_some_and(|p| matches!(scopes[p].kind, ScopeKind::Type(_)));
                let enclosing_type = parent.and_then(|p| enclosing_type_name(&scopes, p));
                let (kind, header) = classify_header(
                    &masked[header_start..i],
                    header_start,
                    &line_starts,
                    line,
                    paren_depth == 0 && parent_is_type,
                    enclosing_type.as_deref(),
                );
                scopes.push(Scope {
                    kind,
                    header,
                    parent,
                    saved_paren_depth: paren_depth,
                });
                stack.push(scopes.len() - 1);
                paren_depth = 0;
                header_start = i + 1;
            }
            b'}' => {
                match stack.pop() {
                    Some(s) => paren_depth = scopes[s].saved_paren_depth,
                    None => debug!("unbalanced closing brace on line {line}"),
                }
                header_start = i + 1;
            }
            _ => {}
        }
    }
    for _ in pending {
        out.push(context_of(&scopes, stack.last().copied()));
    }
    out
}

fn enclosing_type_name(scopes: &[Scope], mut at: usize) -> Option<String> {
    loop {
        if let ScopeKind::Type(name) = &scopes[at].kind {
            return Some(name.clone());
        }
        at = scopes[at].parent?;
    }
}

fn context_of(scopes: &[Scope], innermost: Option<usize>) -> Context {
    let mut ctx = Context::default();
    let mut cursor = innermost;
    while let Some(at) = cursor {
        let scope = &scopes[at];
        match &scope.kind {
            ScopeKind::Method(sig) if ctx.method.is_none() => {
                ctx.method = Some((sig.clone(), scope.header));
            }
            ScopeKind::Type(name) => {
                ctx.class = Some((name.clone(), scope.header));
                break;
            }
            _ => {}
        }
        cursor = scope.parent;
    }
    if ctx.class.is_none() {
        ctx.method = None;
    }
    ctx
}

const TYPE_KEYWORDS: [&str; 4] = ["class", "interface", "enum", "record"];
const NOT_METHOD_NAMES: [&str; 12] = [
    "if", "for", "while", "switch", "catch", "synchronized", "try", "do", "else", "return", "new", "throw",
];

fn classify_header(
    raw: &[u8],
    raw_offset: usize,
    line_starts: &[usize],
    brace_line: usize,
    method_allowed: bool,
    enclosing_type: Option<&str>,
) -> (ScopeKind, LineInterval) {
    let text = String::from_utf8_lossy(raw);
    let body = strip_annotations(&text);
    let skipped = text.len() - body.len();
    let lead = body.len() - body.trim_start().len();
    let start_offset = raw_offset + skipped + lead;
    let start_line = match line_starts.binary_search(&start_offset) {
        Ok(idx) => idx + 1,
        Err(idx) => idx,
    }
    .clamp(1, brace_line);
    let header = LineInterval::new(start_line, brace_line);

    let normalized = normalize_signature(body);
    let before_params = normalized.split('(').next().unwrap_or("");
    let tokens: Vec<&str> = before_params
        .split(|c: char| !(c.is_alphanumeric() || c == '_' || c == '$' || c == '.'))
        .filter(|t| !t.is_empty())
        .collect();

    if let Some(pos) = tokens.iter().position(|t| TYPE_KEYWORDS.contains(t)) {
        if let Some(name) = tokens.get(pos + 1) {
            if !normalized.contains("->") && !is_after_dot(&normalized, tokens[pos]) {
                return (ScopeKind::Type((*name).to_string()), header);
            }
        }
    }

    if method_allowed && looks_like_method(&normalized, enclosing_type) {
        return (ScopeKind::Method(normalized), header);
    }
    (ScopeKind::Block, header)
}

fn is_after_dot(text: &str, keyword: &str) -> bool {
    text.match_indices(keyword)
        .any(|(idx, _)| text[..idx].trim_end().ends_with('.'))
}

fn looks_like_method(sig: &str, enclosing_type: Option<&str>) -> bool {
    if sig.contains("->") {
        return false;
    }
    let Some(open) = sig.find('(') else {
        return false;
    };
    let Some(close) = sig.rfind(')') else {
        return false;
    };
    if close < open {
        return false;
    }
    let tail = sig[close + 1..].trim();
    if !(tail.is_empty() || tail.starts_with("throws ")) {
        return false;
    }
    let before = sig[..open].trim_end();
    if depth0_contains(before, ',') || before.contains('=') {
        return false;
    }
    let name = before
        .rsplit(|c: char| !(c.is_alphanumeric() || c == '_' || c == '$'))
        .next()
        .unwrap_or("");
    if name.is_empty() || NOT_METHOD_NAMES.contains(&name) || name.starts_with(|c: char| c.is_ascii_digit()) {
        return false;
    }
    let has_return_type = before.len() > name.len() && !before[..before.len() - name.len()].trim().is_empty();
    let first = before.split_whitespace().next().unwrap_or("");
    if first == "new" || first == "return" {
        return false;
    }
    has_return_type || enclosing_type == Some(name)
}

fn depth0_contains(s: &str, needle: char) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '<' | '(' | '[' => depth += 1,
            '>' | ')' | ']' => depth -= 1,
            c if c == needle && depth == 0 => return true,
            _ => {}
        }
    }
    false
}

/// Drops leading annotations (`@Override`, `@Foo(x = 1)`), keeping `@interface`.
fn strip_annotations(text: &str) -> &str {
    let mut rest = text.trim_start();
    loop {
        let Some(after_at) = rest.strip_prefix('@') else {
            return rest;
        };
        if after_at.trim_start().starts_with("interface") {
            return rest;
        }
        let name_len = after_at
            .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '$' || c == '.'))
            .unwrap_or(after_at.len());
        let mut tail = after_at[name_len..].trim_start();
        if tail.starts_with('(') {
            let mut depth = 0;
            let mut end = tail.len();
            for (idx, c) in tail.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            end = idx + 1;
                            break;
                        }
                    }
                    _ => {}
                }
            }
            tail = &tail[end..];
        }
        rest = tail.trim_start();
    }
}

/// Collapses whitespace and tightens it around punctuation, so
/// `void  run (int a ,int b)` becomes `void run(int a, int b)`.
pub(crate) fn normalize_signature(text: &str) -> String {
    let collapsed = text.split_whitespace().collect::<Vec<_>>().join(" ");
    let mut out = String::with_capacity(collapsed.len());
    let chars: Vec<char> = collapsed.chars().collect();
    for (idx, &c) in chars.iter().enumerate() {
        if c == ' ' {
            let prev = out.chars().last();
            let next = chars.get(idx + 1).copied();
            if matches!(next, Some('(' | ')' | ',' | '[' | ']' | '>')) || matches!(prev, Some('(' | '[' | '<')) {
                continue;
            }
        }
        out.push(c);
        if c == ',' && chars.get(idx + 1) != Some(&' ') {
            out.push(' ');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_normalization() {
        assert_eq!(normalize_signature("protected void  connectIfNecessary( )"), "protected void connectIfNecessary()");
        assert_eq!(
            normalize_signature("protected void processSoapConsumerOut\n(Exchange exchange) throws Exception"),
            "protected void processSoapConsumerOut(Exchange exchange) throws Exception"
        );
        assert_eq!(normalize_signature("Map<String ,Integer> m(int a,int b)"), "Map<String, Integer> m(int a, int b)");
    }

    #[test]
    fn annotations_are_dropped() {
        assert_eq!(strip_annotations("@Override\n  public void run()"), "public void run()");
        assert_eq!(strip_annotations("@SuppressWarnings(\"x\") @Test void t()"), "void t()");
        assert_eq!(strip_annotations("@interface Marker"), "@interface Marker");
    }

    #[test]
    fn method_heuristics() {
        assert!(looks_like_method("public void run()", Some("A")));
        assert!(looks_like_method("public A(int x)", Some("A")));
        assert!(looks_like_method("void x() throws IOException", Some("A")));
        assert!(!looks_like_method("FOO(1)", Some("A")));
        assert!(!looks_like_method("if (x)", Some("A")));
        assert!(!looks_like_method("Runnable r = new Runnable()", Some("A")));
        assert!(!looks_like_method("A, B, FOO(1)", Some("A")));
        assert!(!looks_like_method("static", Some("A")));
    }
}
