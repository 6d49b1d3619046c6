use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unreachable repository: {0}")]
    UnreachableRepository(String),

    #[error("authentication failed for {0}")]
    AuthenticationFailed(String),

    #[error("commit not found: {0}")]
    CommitNotFound(String),

    #[error("invalid commit sha {0:?}: expected 40 lowercase hex characters")]
    InvalidSha(String),

    #[error("git error: {0}")]
    Git(#[from] git2::Error),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("empty pattern set")]
    EmptyPatternSet,

    #[error("classifier failure: {0}")]
    Classifier(String),

    #[error("classifier protocol violation: sent {sent} comments, received {received} verdicts")]
    ClassifierProtocol { sent: usize, received: usize },

    #[error("store error: {0}")]
    Store(#[from] rusqlite::Error),

    #[error("schema version mismatch: store has version {found}, expected {expected}")]
    SchemaVersion { found: i64, expected: i64 },

    #[error("unsupported store target: {0}")]
    UnsupportedStore(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("script error at line {line}: {message}")]
    Script { line: usize, message: String },

    #[error("empty history")]
    EmptyHistory,
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
