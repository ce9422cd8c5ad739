//! Append-only line-delimited JSON result cache.

use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const CACHE_DIR_ENV: &str = "MZV_CACHE_DIR";
const FILE_NAME: &str = "records.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub method: String,
    pub input: String,
    pub point: String,
    pub digits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    #[serde(flatten)]
    pub key: CacheKey,
    pub value: String,
    pub error_bound: String,
    pub terms_used: u64,
    pub created_at: u64,
    pub tool_version: String,
}

impl CacheRecord {
    pub fn new(key: CacheKey, value: String, error_bound: String, terms_used: u64) -> CacheRecord {
        let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        CacheRecord { key, value, error_bound, terms_used, created_at, tool_version: env!("CARGO_PKG_VERSION").into() }
    }
}

#[derive(Debug, Clone)]
pub struct Cache {
    path: PathBuf,
}

impl Cache {
    /// A cache stored in `dir`, created on first write.
    pub fn in_dir(dir: impl AsRef<Path>) -> Cache {
        Cache { path: dir.as_ref().join(FILE_NAME) }
    }

    /// `$MZV_CACHE_DIR`, else the user cache directory.
    pub fn from_env() -> Option<Cache> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Some(Cache::in_dir(dir)),
            _ => dirs::cache_dir().map(|d| Cache::in_dir(d.join("polyzeta"))),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// The last record stored under exactly `key`. Records for other digit
    /// counts never match, so a value is only served at the precision it was
    /// certified for.
    pub fn get(&self, key: &CacheKey) -> Result<Option<CacheRecord>> {
        Ok(self.records()?.into_iter().rfind(|r| &r.key == key))
    }

    /// Appends one record as a single write, so concurrent writers never
    /// interleave within a line.
    pub fn put(&self, record: &CacheRecord) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        file.write_all(line.as_bytes())?;
        Ok(())
    }

    /// Every parseable record in file order; corrupt lines are skipped with a
    /// warning on stderr.
    pub fn records(&self) -> Result<Vec<CacheRecord>> {
        let file = match fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str(&line) {
                Ok(r) => out.push(r),
                Err(e) => eprintln!("warning: skipping corrupt cache line {} in {}: {e}", i + 1, self.path.display()),
            }
        }
        Ok(out)
    }
}
