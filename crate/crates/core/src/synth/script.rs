//! Line-oriented history scripts.
//!
//! ```text
//! # comment
//! pattern can we avoid          extra classifier pattern
//! commit add the client         starts a step (or `merge <msg>`)
//! write src/A.java              replaces the whole file with the block
//! <<<
//! class A {}
//! >>>
//! edit src/A.java 3 1           replaces 1 line at line 3 with the block
//! <<<
//!     // TODO
//! >>>
//! rename src/A.java core/A.java
//! delete core/A.java
//! expect SATD_ADDED TODO\nsecond line
//! ```
//!
//! A `merge` step commits a side branch touching `side.txt`, then applies
//! its actions in a two-parent commit on top of both.

use std::fmt::Write as _;

use crate::tracker::Resolution;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    WriteFile { path: String, content: String },
    EditLines { path: String, start: usize, count: usize, lines: Vec<String> },
    RenameFile { from: String, to: String },
    DeleteFile { path: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Commit,
    Merge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub kind: StepKind,
    pub message: String,
    pub actions: Vec<Action>,
    /// Operations this step's commit should produce.
    pub expected: Vec<(Resolution, String)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HistoryScript {
    /// Added to the built-in classifier patterns.
    pub patterns: Vec<String>,
    pub steps: Vec<Step>,
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\n', "\\n")
}

fn script_error(line: usize, message: impl Into<String>) -> Error {
    Error::Script {
        line,
        message: message.into(),
    }
}

impl HistoryScript {
    pub fn parse(text: &str) -> Result<Self> {
        let mut script = HistoryScript::default();
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

        let read_block = |lines: &mut dyn Iterator<Item = (usize, &str)>, at: usize| -> Result<Vec<String>> {
            match lines.next() {
                Some((_, "<<<")) => {}
                _ => return Err(script_error(at, "expected <<< after this line")),
            }
            let mut block = Vec::new();
            for (_, l) in &mut *lines {
                if l == ">>>" {
                    return Ok(block);
                }
                block.push(l.to_string());
            }
            Err(script_error(at, "unterminated <<< block"))
        };

        while let Some((n, raw)) = lines.next() {
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (word, rest) = line.split_once(' ').unwrap_or((line, ""));
            let rest = rest.trim();
            let step = |script: &mut HistoryScript| -> Result<usize> {
                script
                    .steps
                    .len()
                    .checked_sub(1)
                    .ok_or_else(|| script_error(n, format!("{word} before the first commit")))
            };
            match word {
                "pattern" if !rest.is_empty() => script.patterns.push(rest.to_lowercase()),
                "commit" | "merge" => script.steps.push(Step {
                    kind: if word == "merge" { StepKind::Merge } else { StepKind::Commit },
                    message: if rest.is_empty() { format!("step {}", script.steps.len() + 1) } else { rest.into() },
                    actions: Vec::new(),
                    expected: Vec::new(),
                }),
                "write" => {
                    let at = step(&mut script)?;
                    let block = read_block(&mut lines, n)?;
                    let mut content = block.join("\n");
                    if !block.is_empty() {
                        content.push('\n');
                    }
                    script.steps[at].actions.push(Action::WriteFile {
                        path: rest.into(),
                        content,
                    });
                }
                "edit" => {
                    let at = step(&mut script)?;
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    let [path, start, count] = parts[..] else {
                        return Err(script_error(n, "usage: edit <path> <start> <count>"));
                    };
                    let num = |s: &str| s.parse::<usize>().map_err(|_| script_error(n, format!("bad number {s:?}")));
                    let (start, count) = (num(start)?, num(count)?);
                    if start == 0 {
                        return Err(script_error(n, "lines are 1-based"));
                    }
                    let block = read_block(&mut lines, n)?;
                    script.steps[at].actions.push(Action::EditLines {
                        path: path.into(),
                        start,
                        count,
                        lines: block,
                    });
                }
                "rename" => {
                    let at = step(&mut script)?;
                    let Some((from, to)) = rest.split_once(char::is_whitespace) else {
                        return Err(script_error(n, "usage: rename <from> <to>"));
                    };
                    script.steps[at].actions.push(Action::RenameFile {
                        from: from.into(),
                        to: to.trim().into(),
                    });
                }
                "delete" if !rest.is_empty() => {
                    let at = step(&mut script)?;
                    script.steps[at].actions.push(Action::DeleteFile { path: rest.into() });
                }
                "expect" => {
                    let at = step(&mut script)?;
                    let (res, text) = rest.split_once(' ').unwrap_or((rest, ""));
                    let res: Resolution = res.parse().map_err(|e: String| script_error(n, e))?;
                    script.steps[at].expected.push((res, unescape(text)));
                }
                other => return Err(script_error(n, format!("unknown directive {other:?}"))),
            }
        }
        Ok(script)
    }

    /// Renders back to the text format; `parse(to_text(s)) == s` for
    /// scripts whose blocks contain no `>>>` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.patterns {
            let _ = writeln!(out, "pattern {p}");
        }
        for step in &self.steps {
            let word = match step.kind {
                StepKind::Commit => "commit",
                StepKind::Merge => "merge",
            };
            let _ = writeln!(out, "{word} {}", step.message);
            for action in &step.actions {
                match action {
                    Action::WriteFile { path, content } => {
                        let _ = writeln!(out, "write {path}\n<<<");
                        out.push_str(content);
                        out.push_str(">>>\n");
                    }
                    Action::EditLines {
                        path,
                        start,
                        count,
                        lines,
                    } => {
                        let _ = writeln!(out, "edit {path} {start} {count}\n<<<");
                        for l in lines {
                            let _ = writeln!(out, "{l}");
                        }
                        out.push_str(">>>\n");
                    }
                    Action::RenameFile { from, to } => {
                        let _ = writeln!(out, "rename {from} {to}");
                    }
                    Action::DeleteFile { path } => {
                        let _ = writeln!(out, "delete {path}");
                    }
                }
            }
            for (res, text) in &step.expected {
                let _ = writeln!(out, "expect {res} {}", escape(text));
            }
        }
        out
    }
}
