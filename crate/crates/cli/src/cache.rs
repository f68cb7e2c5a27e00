//! Append-only JSON-lines result cache.
//!
//! Every write rewrites the journal into a temporary file in the same
//! directory and renames it over the old one, so an interrupted run leaves
//! either the old journal or the new one.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use serde_json::Value;
use thiserror::Error;

/// Default cache directory when `--cache` is absent.
pub const CACHE_ENV: &str = "FIBGIRTH_CACHE_DIR";
pub const JOURNAL: &str = "results.jsonl";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Alpha,
    Depth,
    Decay,
    Law,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub kind: Kind,
    pub key: Value,
    /// Stored verbatim.
    pub payload: Box<RawValue>,
    /// Unix seconds.
    pub created: u64,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl CacheEntry {
    pub fn new(kind: Kind, key: Value, payload: String, seconds: Option<f64>) -> Result<Self, CacheError> {
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Ok(CacheEntry {
            kind,
            key,
            payload: RawValue::from_string(payload).map_err(CacheError::Encode)?,
            created,
            tool_version: TOOL_VERSION.to_string(),
            seconds,
        })
    }

    pub fn payload(&self) -> &str {
        self.payload.get()
    }
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("corrupt cache line {line} in {path}: {source}")]
    Corrupt { path: PathBuf, line: usize, source: serde_json::Error },
    #[error("cannot encode cache entry: {0}")]
    Encode(serde_json::Error),
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self, CacheError> {
        fs::create_dir_all(dir).map_err(|source| CacheError::Io { path: dir.to_path_buf(), source })?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn journal(&self) -> PathBuf {
        self.dir.join(JOURNAL)
    }

    fn read_journal(&self) -> Result<String, CacheError> {
        let path = self.journal();
        match fs::read_to_string(&path) {
            Ok(text) => Ok(text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(String::new()),
            Err(source) => Err(CacheError::Io { path, source }),
        }
    }

    pub fn entries(&self) -> Result<Vec<CacheEntry>, CacheError> {
        let path = self.journal();
        self.read_journal()?
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|source| CacheError::Corrupt { path: path.clone(), line: i + 1, source })
            })
            .collect()
    }

    /// Earliest entry with this kind and key written by this tool version.
    pub fn lookup(&self, kind: Kind, key: &Value) -> Result<Option<CacheEntry>, CacheError> {
        Ok(self
            .entries()?
            .into_iter()
            .find(|e| e.kind == kind && &e.key == key && e.tool_version == TOOL_VERSION))
    }

    pub fn append(&self, entry: &CacheEntry) -> Result<(), CacheError> {
        let mut text = self.read_journal()?;
        if !text.is_empty() && !text.ends_with('\n') {
            text.push('\n');
        }
        text.push_str(&serde_json::to_string(entry).map_err(CacheError::Encode)?);
        text.push('\n');
        let path = self.journal();
        let tmp = self.dir.join(format!(".{JOURNAL}.{}.tmp", std::process::id()));
        let io = |source| CacheError::Io { path: tmp.clone(), source };
        let mut file = fs::File::create(&tmp).map_err(io)?;
        file.write_all(text.as_bytes()).map_err(io)?;
        file.sync_all().map_err(io)?;
        drop(file);
        fs::rename(&tmp, &path).map_err(|source| CacheError::Io { path, source })
    }
}
