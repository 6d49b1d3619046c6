//! Java comment extraction.
//!
//! [`scan_comments`] finds every comment outside string, char and text-block
//! literals; [`group_adjacent`] merges runs of line comments on consecutive
//! lines; [`attach_context`] records the innermost type and method around
//! each comment. None of these require the source to compile.

mod context;
mod lexer;

use std::fmt;
use std::str::FromStr;

use crate::diff::LineInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommentKind {
    Line,
    Block,
    JavaDoc,
}

impl CommentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CommentKind::Line => "Line",
            CommentKind::Block => "Block",
            CommentKind::JavaDoc => "JavaDoc",
        }
    }
}

impl fmt::Display for CommentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CommentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Line" => Ok(CommentKind::Line),
            "Block" => Ok(CommentKind::Block),
            "JavaDoc" => Ok(CommentKind::JavaDoc),
            other => Err(format!("unknown comment kind {other:?}")),
        }
    }
}

/// One comment as found in the source.
///
/// `text` has its delimiters stripped, each line trimmed of whitespace and
/// leading `*`, and lines joined by `\n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawComment {
    pub kind: CommentKind,
    pub start_line: usize,
    pub end_line: usize,
    pub text: String,
    /// Byte offset of the opening delimiter.
    pub offset: usize,
    /// Whether code precedes the comment on its first line.
    pub code_before: bool,
}

impl RawComment {
    pub fn lines(&self) -> LineInterval {
        LineInterval::new(self.start_line, self.end_line)
    }
}

/// A comment with its file and enclosing declarations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommentInstance {
    pub comment: RawComment,
    pub file_path: String,
    pub containing_class: Option<String>,
    /// Normalized signature text, e.g. `protected void connectIfNecessary()`.
    pub containing_method: Option<String>,
    /// Lines spanned by the containing type's declaration header.
    pub class_header: Option<LineInterval>,
    /// Lines spanned by the containing method's signature.
    pub method_header: Option<LineInterval>,
}

impl CommentInstance {
    pub fn text(&self) -> &str {
        &self.comment.text
    }

    pub fn lines(&self) -> LineInterval {
        self.comment.lines()
    }
}

pub fn scan_comments(source: &str) -> Vec<RawComment> {
    lexer::lex(source).comments
}

/// Merges maximal runs of line comments on consecutive lines. Trailing
/// comments that follow code on their line never merge.
pub fn group_adjacent(comments: Vec<RawComment>) -> Vec<RawComment> {
    let mut out: Vec<RawComment> = Vec::with_capacity(comments.len());
    for comment in comments {
        if let Some(prev) = out.last_mut() {
            let joinable = prev.kind == CommentKind::Line
                && comment.kind == CommentKind::Line
                && !prev.code_before
                && !comment.code_before
                && comment.start_line == prev.end_line + 1;
            if joinable {
                prev.end_line = comment.end_line;
                prev.text.push('\n');
                prev.text.push_str(&comment.text);
                continue;
            }
        }
        out.push(comment);
    }
    out
}

/// Annotates each comment with its innermost enclosing type and method.
pub fn attach_context(source: &str, comments: Vec<RawComment>, file_path: &str) -> Vec<CommentInstance> {
    let masked = lexer::lex(source).masked;
    attach_with_masked(&masked, comments, file_path)
}

fn attach_with_masked(masked: &[u8], mut comments: Vec<RawComment>, file_path: &str) -> Vec<CommentInstance> {
    comments.sort_by_key(|c| c.offset);
    let offsets: Vec<usize> = comments.iter().map(|c| c.offset).collect();
    let contexts = context::contexts_at(masked, &offsets);
    comments
        .into_iter()
        .zip(contexts)
        .map(|(comment, ctx)| {
            let (containing_class, class_header) = ctx.class.map_or((None, None), |(n, h)| (Some(n), Some(h)));
            let (containing_method, method_header) = ctx.method.map_or((None, None), |(n, h)| (Some(n), Some(h)));
            CommentInstance {
                comment,
                file_path: file_path.to_string(),
                containing_class,
                containing_method,
                class_header,
                method_header,
            }
        })
        .collect()
}

/// Scan, group and attach context in one lexer pass.
pub fn extract(source: &str, file_path: &str) -> Vec<CommentInstance> {
    let lexed = lexer::lex(source);
    let grouped = group_adjacent(lexed.comments);
    attach_with_masked(&lexed.masked, grouped, file_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(text: &str, at: usize) -> RawComment {
        RawComment {
            kind: CommentKind::Line,
            start_line: at,
            end_line: at,
            text: text.into(),
            offset: at * 100,
            code_before: false,
        }
    }

    #[test]
    fn trailing_line_comment() {
        let found = scan_comments("body = x; // TODO: what if exchange.isFailed()?");
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].kind, CommentKind::Line);
        assert_eq!(found[0].text, "TODO: what if exchange.isFailed()?");
        assert!(found[0].code_before);
    }

    #[test]
    fn string_literals_shield_comments() {
        assert!(scan_comments("String s = \"// not a comment\";").is_empty());
        assert!(scan_comments("char c = '\"'; String s = \"/* no */\";").is_empty());
    }

    #[test]
    fn one_of_each_kind() {
        let found = scan_comments("/** docs */ /* block */ // line");
        let kinds: Vec<_> = found.iter().map(|c| (c.kind, c.text.as_str())).collect();
        assert_eq!(
            kinds,
            vec![
                (CommentKind::JavaDoc, "docs"),
                (CommentKind::Block, "block"),
                (CommentKind::Line, "line")
            ]
        );
    }

    #[test]
    fn empty_block_is_not_javadoc() {
        let found = scan_comments("/**/ x");
        assert_eq!(found[0].kind, CommentKind::Block);
        assert_eq!(found[0].text, "");
    }

    #[test]
    fn unterminated_block_runs_to_eof() {
        let found = scan_comments("int a;\n/* TODO\nnever closed\nint b;");
        assert_eq!(found.len(), 1);
        assert_eq!((found[0].start_line, found[0].end_line), (2, 4));
        assert_eq!(found[0].text, "TODO\nnever closed\nint b;");
    }

    #[test]
    fn grouping() {
        let grouped = group_adjacent(vec![line("lets test the receive worked", 10), line("TODO", 11)]);
        assert_eq!(grouped.len(), 1);
        assert_eq!(grouped[0].text, "lets test the receive worked\nTODO");
        assert_eq!((grouped[0].start_line, grouped[0].end_line), (10, 11));

        let apart = group_adjacent(vec![line("a", 1), line("b", 5)]);
        assert_eq!(apart.len(), 2);

        let moved = group_adjacent(vec![line("Moved this config", 3), line("to the bottom", 4)]);
        assert_eq!(moved[0].text, "Moved this config\nto the bottom");
    }

    #[test]
    fn block_comments_never_merge() {
        let src = "/* a */\n// b\n// c\n";
        let grouped = group_adjacent(scan_comments(src));
        assert_eq!(grouped.len(), 2);
        assert_eq!(grouped[1].text, "b\nc");
    }

    #[test]
    fn trailing_comment_does_not_join_next_line() {
        let grouped = group_adjacent(scan_comments("x(); // a\n// b\n"));
        assert_eq!(grouped.len(), 2);
    }

    #[test]
    fn context_for_method_body() {
        let src = "\
/* license */
package p;

public class Client {
  // field note
  private int x;

  protected void connectIfNecessary() {
    // can we avoid copy-pasting?
    if (!client.isConnected()) {
      // nested
    }
  }
}
";
        let found = extract(src, "Client.java");
        let ctx: Vec<_> = found
            .iter()
            .map(|c| (c.text(), c.containing_class.as_deref(), c.containing_method.as_deref()))
            .collect();
        assert_eq!(
            ctx,
            vec![
                ("license", None, None),
                ("field note", Some("Client"), None),
                ("can we avoid copy-pasting?", Some("Client"), Some("protected void connectIfNecessary()")),
                ("nested", Some("Client"), Some("protected void connectIfNecessary()")),
            ]
        );
        assert_eq!(found[2].method_header, Some(LineInterval::new(8, 8)));
        assert_eq!(found[2].class_header, Some(LineInterval::new(4, 4)));
    }

    #[test]
    fn context_with_brace_on_next_line() {
        let src = "class H {\n public void onExchange(HttpExchange exchange)\n {\n   // TODO\n }\n}\n";
        let found = extract(src, "H.java");
        assert_eq!(found[0].containing_method.as_deref(), Some("public void onExchange(HttpExchange exchange)"));
        assert_eq!(found[0].method_header, Some(LineInterval::new(2, 3)));
    }

    #[test]
    fn annotations_and_lambdas() {
        let src = "\
@Deprecated
class A {
  @Override
  public String toString() {
    run(() -> {
      // in lambda
    });
    Runnable r = new Runnable() {
      public void run() {
        // anonymous
      }
    };
    return \"}\";
  }
  // after
}
";
        let found = extract(src, "A.java");
        let methods: Vec<_> = found.iter().map(|c| c.containing_method.as_deref()).collect();
        assert_eq!(
            methods,
            vec![
                Some("public String toString()"),
                Some("public String toString()"),
                None
            ]
        );
        assert_eq!(found[0].method_header, Some(LineInterval::new(4, 4)));
        assert!(found.iter().all(|c| c.containing_class.as_deref() == Some("A")));
    }

    #[test]
    fn nested_and_enum_types() {
        let src = "\
enum Color {
  RED(1) {
    // constant body
  };
  Color(int v) {
    // ctor
  }
  static class Inner {
    void m() {
      // inner
    }
  }
}
";
        let found = extract(src, "Color.java");
        let ctx: Vec<_> = found
            .iter()
            .map(|c| (c.containing_class.as_deref(), c.containing_method.as_deref()))
            .collect();
        assert_eq!(
            ctx,
            vec![
                (Some("Color"), None),
                (Some("Color"), Some("Color(int v)")),
                (Some("Inner"), Some("void m()")),
            ]
        );
    }
}
