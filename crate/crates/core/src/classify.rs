//! SATD classifiers.
//!
//! The default [`PatternClassifier`] flags a comment when any pattern occurs
//! in its lowercased text at word boundaries. [`register_external`] wraps a
//! child process speaking a one-line-per-comment protocol.

use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::{Arc, Mutex};

use crate::{Error, Result};

pub const BUILT_IN_PATTERNS: [&str; 12] = [
    "todo",
    "fixme",
    "xxx",
    "hack",
    "workaround",
    "temporary solution",
    "not implemented",
    "kludge",
    "ugly",
    "stupid",
    "broken",
    "bug",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternSource {
    BuiltIn,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<String>,
    source: PatternSource,
}

impl PatternSet {
    pub fn built_in() -> Self {
        Self {
            patterns: BUILT_IN_PATTERNS.iter().map(|p| p.to_string()).collect(),
            source: PatternSource::BuiltIn,
        }
    }

    /// Lowercases, trims and dedups; fails when nothing is left.
    pub fn new(patterns: impl IntoIterator<Item = impl AsRef<str>>, source: PatternSource) -> Result<Self> {
        let mut out: Vec<String> = Vec::new();
        for p in patterns {
            let p = p.as_ref().trim().to_lowercase();
            if !p.is_empty() && !out.contains(&p) {
                out.push(p);
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyPatternSet);
        }
        Ok(Self { patterns: out, source })
    }

    pub fn patterns(&self) -> &[String] {
        &self.patterns
    }

    pub fn source(&self) -> &PatternSource {
        &self.source
    }

    pub fn with_pattern(mut self, pattern: &str) -> Self {
        let p = pattern.trim().to_lowercase();
        if !p.is_empty() && !self.patterns.contains(&p) {
            self.patterns.push(p);
        }
        self
    }

    pub fn matches(&self, text: &str) -> bool {
        let lower = text.to_lowercase();
        self.patterns.iter().any(|p| contains_word(&lower, p))
    }
}

/// Reads one pattern per line, skipping blanks and `#` lines. With no path,
/// returns the built-in set.
pub fn load_patterns(path: Option<&Path>) -> Result<PatternSet> {
    let Some(path) = path else {
        return Ok(PatternSet::built_in());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    PatternSet::new(lines, PatternSource::File(path.to_path_buf()))
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// True when `needle` occurs in `haystack` with no word character directly
/// before or after it.
pub fn contains_word(haystack: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    // Every start position, since occurrences may overlap.
    haystack
        .char_indices()
        .filter(|&(idx, _)| haystack[idx..].starts_with(needle))
        .any(|(idx, _)| {
            let before = haystack[..idx].chars().next_back();
            let after = haystack[idx + needle.len()..].chars().next();
            !before.is_some_and(is_word_char) && !after.is_some_and(is_word_char)
        })
}

pub trait SatdClassifier: Send + Sync {
    fn name(&self) -> &str;

    /// One verdict per input text, in order.
    fn classify_batch(&self, texts: &[&str]) -> Result<Vec<bool>>;
}

pub type ClassifierHandle = Arc<dyn SatdClassifier>;

impl fmt::Debug for dyn SatdClassifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SatdClassifier({})", self.name())
    }
}

pub fn is_satd(classifier: &dyn SatdClassifier, text: &str) -> Result<bool> {
    Ok(classifier.classify_batch(&[text])?[0])
}

#[derive(Debug, Clone)]
pub struct PatternClassifier {
    set: PatternSet,
    name: String,
}

impl PatternClassifier {
    pub fn new(set: PatternSet) -> Self {
        let name = match set.source() {
            PatternSource::BuiltIn => "patterns:built-in".to_string(),
            PatternSource::File(p) => format!("patterns:{}", p.display()),
        };
        Self { set, name }
    }

    pub fn handle(set: PatternSet) -> ClassifierHandle {
        Arc::new(Self::new(set))
    }
}

impl Default for PatternClassifier {
    fn default() -> Self {
        Self::new(PatternSet::built_in())
    }
}

impl SatdClassifier for PatternClassifier {
    fn name(&self) -> &str {
        &self.name
    }

    fn classify_batch(&self, texts: &[&str]) -> Result<Vec<bool>> {
        Ok(texts.iter().map(|t| self.set.matches(t)).collect())
    }
}

/// A classifier run as `sh -c <cmd>` once per batch.
///
/// Each comment is written on its own stdin line with `\` escaped as `\\`
/// and newlines as `\n`. The process must print exactly one `1` or `0`
/// line per input line.
#[derive(Debug)]
pub struct ExternalClassifier {
    cmd: String,
    name: String,
    lock: Mutex<()>,
}

pub fn register_external(cmd: &str) -> Result<ClassifierHandle> {
    if cmd.trim().is_empty() {
        return Err(Error::Config("empty classifier command".into()));
    }
    Ok(Arc::new(ExternalClassifier {
        cmd: cmd.to_string(),
        name: format!("external:{cmd}"),
        lock: Mutex::new(()),
    }))
}

pub fn escape_line(text: &str) -> String {
    text.replace('\\', "\\\\").replace('\r', "\\r").replace('\n', "\\n")
}

impl SatdClassifier for ExternalClassifier {
    fn name(&self) -> &str {
        &self.name
    }

    fn classify_batch(&self, texts: &[&str]) -> Result<Vec<bool>> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let _serial = self.lock.lock().unwrap_or_else(|p| p.into_inner());
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.cmd)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Classifier(format!("cannot spawn {:?}: {e}", self.cmd)))?;

        let mut input = String::new();
        for t in texts {
            input.push_str(&escape_line(t));
            input.push('\n');
        }
        // Write from a thread so a process that answers before reading all
        // input cannot deadlock us on a full pipe.
        let mut stdin = child.stdin.take().expect("piped stdin");
        let writer = std::thread::spawn(move || {
            let _ = stdin.write_all(input.as_bytes());
        });
        let mut output = String::new();
        child
            .stdout
            .take()
            .expect("piped stdout")
            .read_to_string(&mut output)
            .map_err(|e| Error::Classifier(format!("reading classifier output: {e}")))?;
        let _ = writer.join();
        let status = child
            .wait()
            .map_err(|e| Error::Classifier(format!("waiting for classifier: {e}")))?;
        if !status.success() {
            return Err(Error::Classifier(format!("{:?} exited with {status}", self.cmd)));
        }

        let answers: Vec<&str> = output.lines().map(str::trim).collect();
        if answers.len() != texts.len() {
            return Err(Error::ClassifierProtocol {
                sent: texts.len(),
                received: answers.len(),
            });
        }
        answers
            .into_iter()
            .map(|a| match a {
                "1" => Ok(true),
                "0" => Ok(false),
                other => Err(Error::Classifier(format!("unexpected answer {other:?}"))),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_says(text: &str) -> bool {
        is_satd(&PatternClassifier::default(), text).unwrap()
    }

    #[test]
    fn default_verdicts() {
        assert!(default_says("TODO: 404"));
        assert!(!default_says("no outputs"));
        assert!(!default_says(""));
        assert!(!default_says("method() // see mastodon config"));
        assert!(!default_says("this is a temporary  solution"));
        assert!(default_says("this is a temporary solution"));
        assert!(!default_says("debugging output"));
        assert!(default_says("fix_me later? FIXME!"));
    }

    #[test]
    fn pattern_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.txt");
        std::fs::write(&path, "todo\n# note\nhack\n").unwrap();
        let set = load_patterns(Some(&path)).unwrap();
        assert_eq!(set.patterns(), ["todo", "hack"]);
        assert_eq!(set.source(), &PatternSource::File(path.clone()));

        std::fs::write(&path, "").unwrap();
        assert!(matches!(load_patterns(Some(&path)), Err(Error::EmptyPatternSet)));
        assert!(load_patterns(Some(&dir.path().join("missing"))).is_err());
        assert!(load_patterns(None).unwrap().patterns().contains(&"todo".to_string()));
    }

    #[test]
    fn escaping() {
        assert_eq!(escape_line("a\\b\nc"), "a\\\\b\\nc");
    }

    #[test]
    fn external_protocol() {
        let yes = register_external("while read -r l; do echo 1; done").unwrap();
        assert_eq!(yes.classify_batch(&["a", "b\nc"]).unwrap(), vec![true, true]);
        let no = register_external("while read -r l; do echo 0; done").unwrap();
        assert_eq!(no.classify_batch(&["a"]).unwrap(), vec![false]);
        let short = register_external("read -r l; echo 1").unwrap();
        assert!(matches!(
            short.classify_batch(&["a", "b", "c"]),
            Err(Error::ClassifierProtocol { sent: 3, received: 1 })
        ));
        let bad = register_external("exit 3").unwrap();
        assert!(bad.classify_batch(&["a"]).is_err());
    }
}
