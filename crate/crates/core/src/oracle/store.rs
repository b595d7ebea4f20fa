//! Append-only results file with witness files alongside.
//!
//! Each line of `results.jsonl` is one [`StoredResult`]. When a key appears
//! more than once the latest line wins, except that an interrupted result
//! never replaces an exact one.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{HostKind, OracleResult, OracleStats, OracleStatus};
use crate::io::{self, FormatError};
use crate::pattern::ForbiddenPattern;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("corrupt results file {path}, line {line}: {message}")]
    Corrupt {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("witness {path}: {source}")]
    Witness { path: PathBuf, source: FormatError },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ResultKey {
    pub n: usize,
    pub r: usize,
    pub pattern: String,
    pub host: HostKind,
}

impl ResultKey {
    pub fn new(n: usize, r: usize, pattern: &ForbiddenPattern, host: HostKind) -> Self {
        ResultKey {
            n,
            r,
            pattern: pattern.to_string(),
            host,
        }
    }

    fn of(result: &OracleResult) -> Self {
        ResultKey {
            n: result.n,
            r: result.r,
            pattern: result.pattern.clone(),
            host: result.host,
        }
    }

    /// File-name stem, e.g. `n7-r3-P3-linear`.
    pub fn stem(&self) -> String {
        let pattern: String = self
            .pattern
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        format!("n{}-r{}-{}-{}", self.n, self.r, pattern, self.host)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoredResult {
    #[serde(flatten)]
    pub key: ResultKey,
    pub value: usize,
    pub status: OracleStatus,
    pub witness_file: String,
    pub stats: OracleStats,
}

#[derive(Debug)]
pub struct ResultStore {
    dir: PathBuf,
    entries: BTreeMap<ResultKey, StoredResult>,
}

impl ResultStore {
    pub const FILE: &'static str = "results.jsonl";

    /// Opens (creating if needed) the store rooted at `dir`.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        let mut store = ResultStore {
            dir,
            entries: BTreeMap::new(),
        };
        let path = store.results_path();
        if path.exists() {
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let entry: StoredResult =
                    serde_json::from_str(line).map_err(|e| StoreError::Corrupt {
                        path: path.clone(),
                        line: i + 1,
                        message: e.to_string(),
                    })?;
                store.merge(entry);
            }
        }
        Ok(store)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn results_path(&self) -> PathBuf {
        self.dir.join(Self::FILE)
    }

    fn merge(&mut self, entry: StoredResult) {
        let keep_old = self.entries.get(&entry.key).is_some_and(|old| {
            old.status == OracleStatus::Exact && entry.status == OracleStatus::Interrupted
        });
        if !keep_old {
            self.entries.insert(entry.key.clone(), entry);
        }
    }

    /// Current entry per key, in key order.
    pub fn entries(&self) -> impl Iterator<Item = &StoredResult> {
        self.entries.values()
    }

    pub fn get(&self, key: &ResultKey) -> Option<&StoredResult> {
        self.entries.get(key)
    }

    /// The stored exact result for `key`, witness included.
    pub fn exact(&self, key: &ResultKey) -> Result<Option<OracleResult>, StoreError> {
        let Some(entry) = self
            .entries
            .get(key)
            .filter(|e| e.status == OracleStatus::Exact)
        else {
            return Ok(None);
        };
        let path = self.dir.join(&entry.witness_file);
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        let witness = io::from_json(&text).map_err(|source| StoreError::Witness {
            path: path.clone(),
            source,
        })?;
        Ok(Some(OracleResult {
            n: key.n,
            r: key.r,
            pattern: key.pattern.clone(),
            host: key.host,
            value: entry.value,
            witness,
            status: entry.status,
            stats: entry.stats.clone(),
        }))
    }

    /// Writes the witness file and appends one line to the results file.
    pub fn append(&mut self, result: &OracleResult) -> Result<(), StoreError> {
        let key = ResultKey::of(result);
        let status = match result.status {
            OracleStatus::Exact => "exact",
            OracleStatus::Interrupted => "interrupted",
        };
        let witness_file = format!("{}-{status}.json", key.stem());
        let witness_path = self.dir.join(&witness_file);
        fs::write(&witness_path, io::to_json(&result.witness)).map_err(io_err(&witness_path))?;
        let entry = StoredResult {
            key,
            value: result.value,
            status: result.status,
            witness_file,
            stats: result.stats.clone(),
        };
        let path = self.results_path();
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err(&path))?;
        let line = serde_json::to_string(&entry).expect("entry serializes");
        writeln!(file, "{line}").map_err(io_err(&path))?;
        self.merge(entry);
        Ok(())
    }
}
