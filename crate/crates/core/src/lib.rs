//! Mining the lifespan of self-admitted technical debt (SATD) comments.
//!
//! The crate walks the first-parent history of a Git repository, extracts
//! Java comments from every changed file version, classifies them as SATD,
//! and tracks each debt comment across commits as a sequence of lifecycle
//! operations:
//!
//! | resolution                | meaning                                             |
//! |---------------------------|-----------------------------------------------------|
//! | `SATD_ADDED`              | a debt comment appeared                             |
//! | `SATD_CHANGED`            | its text was edited and it is still debt            |
//! | `CLASS_OR_METHOD_CHANGED` | its containing class or method signature changed    |
//! | `FILE_PATH_CHANGED`       | its file was renamed                                |
//! | `SATD_MOVED_FILE`         | it was deleted from one file and re-added in another|
//! | `SATD_REMOVED`            | it disappeared, or stopped reading as debt          |
//! | `FILE_REMOVED`            | its file was deleted                                |
//!
//! Layout:
//!
//! - [`git_walk`] opens repositories and produces single-parent commit pairs.
//! - [`diff`] computes changed files and Myers / histogram edit scripts.
//! - [`comments`] is a tolerant Java comment scanner with class/method context.
//! - [`classify`] holds the pluggable SATD classifiers.
//! - [`tracker`] maps occurrences between versions and resolves operations.
//! - [`store`] persists results to SQLite and exports CSV / HTML.
//! - [`cli`] drives multi-repository runs.
//! - [`synth`] builds scripted Git fixtures with known ground truth and scores runs.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod classify;
pub mod cli;
pub mod comments;
pub mod diff;
mod error;
pub mod git_walk;
pub mod store;
pub mod synth;
pub mod tracker;

pub use error::{Error, Result};
