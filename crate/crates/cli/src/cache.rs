//! Content-addressed record cache. One JSON file per
//! `(canonical code, check id, version)` key; writes go through a temporary
//! file in the same directory and an atomic rename.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use harmtree_core::CanonicalCode;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tracing::warn;

use crate::checks::CampaignRecord;
use crate::error::CliError;

/// Version of the checking logic. Bump whenever a check's semantics change
/// so that stale records are never served.
pub const CHECK_VERSION: &str = concat!("harmtree-checks/1+", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    version: String,
    tree_code: String,
    check_id: String,
    record: CampaignRecord,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self::with_version(dir, CHECK_VERSION)
    }

    pub fn with_version(dir: impl Into<PathBuf>, version: impl Into<String>) -> Self {
        Self {
            dir: dir.into(),
            version: version.into(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File holding the record for one key.
    pub fn path_for(&self, code: &CanonicalCode, check_id: &str) -> PathBuf {
        let mut h = Sha256::new();
        for part in [self.version.as_str(), &code.to_string(), check_id] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        let key = hex::encode(h.finalize());
        self.dir.join(&key[..2]).join(format!("{key}.json"))
    }

    /// A stored record, or `None` on a miss. Unreadable, corrupt or
    /// mismatched entries count as misses and are logged.
    pub fn lookup(&self, code: &CanonicalCode, check_id: &str) -> Option<CampaignRecord> {
        let path = self.path_for(code, check_id);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                warn!(path = %path.display(), error = %e, "unreadable cache entry ignored");
                return None;
            }
        };
        let entry: Entry = match serde_json::from_slice(&bytes) {
            Ok(e) => e,
            Err(e) => {
                warn!(path = %path.display(), error = %e, "corrupt cache entry ignored");
                return None;
            }
        };
        if entry.version != self.version {
            warn!(path = %path.display(), found = %entry.version, "cache entry from another version ignored");
            return None;
        }
        if entry.tree_code != code.to_string() || entry.check_id != check_id {
            warn!(path = %path.display(), "cache entry under the wrong key ignored");
            return None;
        }
        Some(entry.record)
    }

    /// Store `record` (without timing) under its key, replacing any previous
    /// entry atomically.
    pub fn store(&self, code: &CanonicalCode, check_id: &str, record: &CampaignRecord) -> Result<(), CliError> {
        let path = self.path_for(code, check_id);
        let parent = path.parent().expect("key paths have a parent");
        fs::create_dir_all(parent).map_err(|e| CliError::io(format!("creating {}", parent.display()), e))?;
        let mut record = record.clone();
        record.elapsed_ms = None;
        let entry = Entry {
            version: self.version.clone(),
            tree_code: code.to_string(),
            check_id: check_id.to_string(),
            record,
        };
        let mut bytes = serde_json::to_vec(&entry)?;
        bytes.push(b'\n');
        let ctx = |e| CliError::io(format!("writing {}", path.display()), e);
        let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(ctx)?;
        tmp.write_all(&bytes).map_err(ctx)?;
        tmp.as_file().sync_all().map_err(ctx)?;
        tmp.persist(&path).map_err(|e| ctx(e.error))?;
        Ok(())
    }
}

pub fn cache_lookup(dir: &Path, code: &CanonicalCode, check_id: &str) -> Option<CampaignRecord> {
    Cache::new(dir).lookup(code, check_id)
}

pub fn cache_store(dir: &Path, code: &CanonicalCode, check_id: &str, record: &CampaignRecord) -> Result<(), CliError> {
    Cache::new(dir).store(code, check_id, record)
}
