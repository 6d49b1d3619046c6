use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::{Error, Result};

/// Where mined rows go.
#[derive(Clone, PartialEq, Eq)]
pub enum StoreTarget {
    /// An embedded single-file database.
    File(PathBuf),
    /// A database server described by a properties file.
    Server(ServerConfig),
}

#[derive(Clone, PartialEq, Eq)]
pub struct ServerConfig {
    pub host: String,
    pub port: Option<u16>,
    pub database: String,
    pub user: Option<String>,
    pub password: Option<String>,
}

impl fmt::Debug for StoreTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StoreTarget::File(p) => f.debug_tuple("File").field(p).finish(),
            StoreTarget::Server(s) => f.debug_tuple("Server").field(s).finish(),
        }
    }
}

impl fmt::Debug for ServerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ServerConfig")
            .field("host", &self.host)
            .field("port", &self.port)
            .field("database", &self.database)
            .field("user", &self.user)
            .field("password", &self.password.as_ref().map(|_| "<redacted>"))
            .finish()
    }
}

/// Parses `key=value` (or `key: value`) lines; `#` and `!` start comments.
pub fn parse_properties(text: &str) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') || line.starts_with('!') {
            continue;
        }
        let split = line.find(['=', ':']).unwrap_or(line.len());
        let key = line[..split].trim();
        let value = line.get(split + 1..).unwrap_or("").trim();
        if !key.is_empty() {
            out.insert(key.to_string(), value.to_string());
        }
    }
    out
}

/// Interprets the `-d` argument. A `.properties` file names either a
/// `file` (embedded database, relative to the properties file) or a
/// `host` and `database`. Any other path is the embedded database itself.
pub fn store_target(path: &Path) -> Result<StoreTarget> {
    if path.extension().and_then(|e| e.to_str()) != Some("properties") {
        return Ok(StoreTarget::File(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let props = parse_properties(&text);
    if let Some(file) = props.get("file").or_else(|| props.get("path")) {
        let base = path.parent().unwrap_or(Path::new("."));
        return Ok(StoreTarget::File(base.join(file)));
    }
    let get = |k: &str| props.get(k).filter(|v| !v.is_empty()).cloned();
    let host = get("host").ok_or_else(|| Error::Config(format!("{}: missing host or file", path.display())))?;
    let database =
        get("database").ok_or_else(|| Error::Config(format!("{}: missing database", path.display())))?;
    let port = get("port")
        .map(|p| p.parse::<u16>().map_err(|_| Error::Config(format!("{}: bad port {p:?}", path.display()))))
        .transpose()?;
    Ok(StoreTarget::Server(ServerConfig {
        host,
        port,
        database,
        user: get("user"),
        password: get("password"),
    }))
}
