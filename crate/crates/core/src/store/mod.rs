//! Relational output and CSV / HTML reports.
//!
//! Tables:
//!
//! ```text
//! Projects(p_id, p_name, p_url)
//! Commits(c_sha, p_id, author_name, author_time, committer_name, committer_time)
//! SATD(satd_id, satd_instance_id, p_id, resolution, parent_sha, child_sha, old_file_id, new_file_id)
//! SATDInFile(f_id, f_comment, f_comment_type, f_path, start_line, end_line, containing_class, containing_method)
//! ```
//!
//! Times are UTC epoch seconds. `parent_sha` is NULL for the root commit.

mod config;
mod export;

use std::path::Path;

use rusqlite::{params, Connection, OptionalExtension, Transaction};

pub use config::{parse_properties, store_target, ServerConfig, StoreTarget};
pub use export::{csv_header, render_csv, render_html, FileRow, OperationRow};

use crate::git_walk::CommitMeta;
use crate::tracker::{SatdOccurrence, SatdOperation};
use crate::{Error, Result};

pub const SCHEMA_VERSION: i64 = 1;

const SCHEMA: &str = "
CREATE TABLE IF NOT EXISTS Projects (
    p_id INTEGER PRIMARY KEY,
    p_name TEXT NOT NULL,
    p_url TEXT NOT NULL,
    UNIQUE (p_name, p_url)
);
CREATE TABLE IF NOT EXISTS Commits (
    c_sha CHAR(40) NOT NULL,
    p_id INTEGER NOT NULL REFERENCES Projects (p_id),
    author_name TEXT NOT NULL,
    author_time BIGINT NOT NULL,
    committer_name TEXT NOT NULL,
    committer_time BIGINT NOT NULL,
    PRIMARY KEY (c_sha, p_id)
);
CREATE TABLE IF NOT EXISTS SATDInFile (
    f_id INTEGER PRIMARY KEY,
    f_comment TEXT NOT NULL,
    f_comment_type VARCHAR(16) NOT NULL CHECK (f_comment_type IN ('Line', 'Block', 'JavaDoc')),
    f_path TEXT NOT NULL,
    start_line INTEGER NOT NULL,
    end_line INTEGER NOT NULL,
    containing_class TEXT,
    containing_method TEXT
);
CREATE TABLE IF NOT EXISTS SATD (
    satd_id BIGINT PRIMARY KEY,
    satd_instance_id BIGINT NOT NULL,
    p_id INTEGER NOT NULL REFERENCES Projects (p_id),
    resolution VARCHAR(32) NOT NULL CHECK (resolution IN (
        'SATD_ADDED', 'SATD_REMOVED', 'SATD_CHANGED', 'FILE_REMOVED',
        'FILE_PATH_CHANGED', 'CLASS_OR_METHOD_CHANGED', 'SATD_MOVED_FILE')),
    parent_sha CHAR(40),
    child_sha CHAR(40) NOT NULL,
    old_file_id INTEGER REFERENCES SATDInFile (f_id),
    new_file_id INTEGER REFERENCES SATDInFile (f_id),
    FOREIGN KEY (parent_sha, p_id) REFERENCES Commits (c_sha, p_id),
    FOREIGN KEY (child_sha, p_id) REFERENCES Commits (c_sha, p_id)
);
CREATE INDEX IF NOT EXISTS satd_by_project ON SATD (p_id, satd_id);
";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectInfo {
    pub name: String,
    pub url: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RowCounts {
    pub commits: usize,
    pub operations: usize,
    /// Distinct comment snapshots referenced by this write.
    pub files: usize,
}

pub struct Store {
    conn: Connection,
}

/// Opens the target, creating the schema when absent.
pub fn init_store(target: &StoreTarget) -> Result<Store> {
    match target {
        StoreTarget::File(path) => Store::open(path),
        StoreTarget::Server(cfg) => Err(Error::UnsupportedStore(format!(
            "server database {}@{} is not built in; point -d at a file path instead",
            cfg.database, cfg.host
        ))),
    }
}

impl Store {
    pub fn open(path: &Path) -> Result<Self> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            if !dir.is_dir() {
                return Err(Error::io(
                    dir,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "directory does not exist"),
                ));
            }
        }
        Self::init(Connection::open(path)?)
    }

    pub fn in_memory() -> Result<Self> {
        Self::init(Connection::open_in_memory()?)
    }

    fn init(conn: Connection) -> Result<Self> {
        conn.pragma_update(None, "foreign_keys", true)?;
        let found: i64 = conn.pragma_query_value(None, "user_version", |r| r.get(0))?;
        match found {
            0 => {
                let tx = conn.unchecked_transaction()?;
                tx.execute_batch(SCHEMA)?;
                tx.pragma_update(None, "user_version", SCHEMA_VERSION)?;
                tx.commit()?;
            }
            SCHEMA_VERSION => {}
            other => {
                return Err(Error::SchemaVersion {
                    found: other,
                    expected: SCHEMA_VERSION,
                })
            }
        }
        Ok(Self { conn })
    }

    pub fn connection(&self) -> &Connection {
        &self.conn
    }

    /// Largest stored instance id and satd id (0 when empty).
    pub fn max_ids(&self) -> Result<(u64, u64)> {
        max_ids(&self.conn)
    }

    /// Writes one project's run in a single transaction, replacing any
    /// rows an earlier run stored for the same project.
    ///
    /// Operation ids are per-run counters starting at 1; they are shifted
    /// past the largest ids other projects already hold so they stay
    /// unique across the store.
    pub fn write_operations(
        &mut self,
        project: &ProjectInfo,
        commits: &[CommitMeta],
        operations: &[SatdOperation],
    ) -> Result<RowCounts> {
        let tx = self.conn.transaction()?;
        let p_id = upsert_project(&tx, project)?;
        tx.execute("DELETE FROM SATD WHERE p_id = ?1", [p_id])?;
        tx.execute("DELETE FROM Commits WHERE p_id = ?1", [p_id])?;
        tx.execute(
            "DELETE FROM SATDInFile WHERE f_id NOT IN (SELECT old_file_id FROM SATD WHERE old_file_id IS NOT NULL)
               AND f_id NOT IN (SELECT new_file_id FROM SATD WHERE new_file_id IS NOT NULL)",
            [],
        )?;

        let (instance_base, satd_base) = max_ids(&tx)?;

        let mut counts = RowCounts::default();
        {
            let mut insert = tx.prepare(
                "INSERT OR IGNORE INTO Commits (c_sha, p_id, author_name, author_time, committer_name, committer_time)
                 VALUES (?1, ?2, ?3, ?4, ?5, ?6)",
            )?;
            for c in commits {
                counts.commits += insert.execute(params![
                    c.sha,
                    p_id,
                    c.author_name,
                    c.author_time,
                    c.committer_name,
                    c.committer_time
                ])?;
            }
        }

        let mut file_ids = std::collections::BTreeSet::new();
        {
            let mut insert = tx.prepare(
                "INSERT INTO SATD (satd_id, satd_instance_id, p_id, resolution, parent_sha, child_sha, old_file_id, new_file_id)
                 VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8)",
            )?;
            for op in operations {
                let old_id = op.old_occurrence.as_ref().map(|o| file_row_id(&tx, o)).transpose()?;
                let new_id = op.new_occurrence.as_ref().map(|o| file_row_id(&tx, o)).transpose()?;
                file_ids.extend(old_id.into_iter().chain(new_id));
                insert.execute(params![
                    (op.satd_id + satd_base) as i64,
                    (op.instance_id + instance_base) as i64,
                    p_id,
                    op.resolution.as_str(),
                    op.parent_commit.as_ref().map(|c| c.sha.as_str()),
                    op.child_commit.sha,
                    old_id,
                    new_id,
                ])?;
                counts.operations += 1;
            }
        }
        counts.files = file_ids.len();
        tx.commit()?;
        Ok(counts)
    }

    /// Every operation joined with its project, commit and comment rows,
    /// ordered by project then satd id.
    pub fn rows(&self) -> Result<Vec<OperationRow>> {
        let mut stmt = self.conn.prepare(
            "SELECT s.satd_id, s.satd_instance_id, s.resolution, p.p_name, p.p_url,
                    s.parent_sha, s.child_sha, c.author_name, c.author_time, c.committer_name, c.committer_time,
                    o.f_comment, o.f_comment_type, o.f_path, o.start_line, o.end_line, o.containing_class, o.containing_method,
                    n.f_comment, n.f_comment_type, n.f_path, n.start_line, n.end_line, n.containing_class, n.containing_method
             FROM SATD s
             JOIN Projects p ON p.p_id = s.p_id
             JOIN Commits c ON c.c_sha = s.child_sha AND c.p_id = s.p_id
             LEFT JOIN SATDInFile o ON o.f_id = s.old_file_id
             LEFT JOIN SATDInFile n ON n.f_id = s.new_file_id
             ORDER BY s.p_id, s.satd_id",
        )?;
        let file_at = |r: &rusqlite::Row<'_>, at: usize| -> rusqlite::Result<Option<FileRow>> {
            let Some(comment) = r.get::<_, Option<String>>(at)? else {
                return Ok(None);
            };
            Ok(Some(FileRow {
                comment,
                comment_type: r.get(at + 1)?,
                path: r.get(at + 2)?,
                start_line: r.get::<_, i64>(at + 3)? as usize,
                end_line: r.get::<_, i64>(at + 4)? as usize,
                containing_class: r.get(at + 5)?,
                containing_method: r.get(at + 6)?,
            }))
        };
        let rows = stmt.query_map([], |r| {
            Ok(OperationRow {
                satd_id: r.get::<_, i64>(0)? as u64,
                instance_id: r.get::<_, i64>(1)? as u64,
                resolution: r.get(2)?,
                project: r.get(3)?,
                project_url: r.get(4)?,
                parent_sha: r.get(5)?,
                child_sha: r.get(6)?,
                author_name: r.get(7)?,
                author_time: r.get(8)?,
                committer_name: r.get(9)?,
                committer_time: r.get(10)?,
                old: file_at(r, 11)?,
                new: file_at(r, 18)?,
            })
        })?;
        Ok(rows.collect::<rusqlite::Result<_>>()?)
    }

    pub fn export_csv(&self, path: &Path) -> Result<()> {
        let text = render_csv(&self.rows()?);
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn export_html(&self, path: &Path) -> Result<()> {
        let text = render_html(&self.rows()?);
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

fn max_ids(conn: &Connection) -> Result<(u64, u64)> {
    Ok(conn.query_row(
        "SELECT COALESCE(MAX(satd_instance_id), 0), COALESCE(MAX(satd_id), 0) FROM SATD",
        [],
        |r| Ok((r.get::<_, i64>(0)? as u64, r.get::<_, i64>(1)? as u64)),
    )?)
}

fn upsert_project(tx: &Transaction<'_>, project: &ProjectInfo) -> Result<i64> {
    let existing: Option<i64> = tx
        .query_row(
            "SELECT p_id FROM Projects WHERE p_name = ?1 AND p_url = ?2",
            [&project.name, &project.url],
            |r| r.get(0),
        )
        .optional()?;
    if let Some(id) = existing {
        return Ok(id);
    }
    tx.execute(
        "INSERT INTO Projects (p_name, p_url) VALUES (?1, ?2)",
        [&project.name, &project.url],
    )?;
    Ok(tx.last_insert_rowid())
}

/// Finds or inserts the SATDInFile row for an occurrence. Identical
/// snapshots share one row.
fn file_row_id(tx: &Transaction<'_>, o: &SatdOccurrence) -> Result<i64> {
    let c = &o.comment;
    let values = params![
        c.comment.text,
        c.comment.kind.as_str(),
        c.file_path,
        c.comment.start_line as i64,
        c.comment.end_line as i64,
        c.containing_class,
        c.containing_method,
    ];
    let existing: Option<i64> = tx
        .query_row(
            "SELECT f_id FROM SATDInFile WHERE f_comment = ?1 AND f_comment_type = ?2 AND f_path = ?3
               AND start_line = ?4 AND end_line = ?5 AND containing_class IS ?6 AND containing_method IS ?7",
            values,
            |r| r.get(0),
        )
        .optional()?;
    if let Some(id) = existing {
        return Ok(id);
    }
    tx.execute(
        "INSERT INTO SATDInFile (f_comment, f_comment_type, f_path, start_line, end_line, containing_class, containing_method)
         VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7)",
        values,
    )?;
    Ok(tx.last_insert_rowid())
}
