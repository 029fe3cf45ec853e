//! On-disk caching of computed integer sequences.
//!
//! One JSON document per sequence kind (`egz`, `scores`, `strong`):
//!
//! ```json
//! {"version":1,"kind":"egz","n_max":100,"values":["1","1","4",…],"checksum":"…"}
//! ```
//!
//! Values are decimal strings (no precision loss); the checksum is the
//! lowercase hex SHA-256 digest of the value strings concatenated in order,
//! with no separator. A file that fails any validation (version, kind,
//! length, checksum, parse) is ignored and overwritten by a fresh
//! computation — corruption can cost time, never correctness.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    kind: String,
    n_max: u64,
    values: Vec<String>,
    checksum: String,
}

pub fn checksum(values: &[String]) -> String {
    let mut hasher = Sha256::new();
    for v in values {
        hasher.update(v.as_bytes());
    }
    hex::encode(hasher.finalize())
}

/// Expected number of stored values for a kind at a given `n_max`.
/// `scores` includes the index-0 entry; the others start at n = 1.
fn expected_len(kind: &str, n_max: u64) -> usize {
    match kind {
        "scores" => n_max as usize + 1,
        _ => n_max as usize,
    }
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// Resolve the cache directory: the `--cache-dir` flag wins, then the
    /// `SCORESEQ_CACHE_DIR` environment variable, else caching is off.
    pub fn resolve(flag: Option<PathBuf>) -> Self {
        let dir = flag.or_else(|| std::env::var_os("SCORESEQ_CACHE_DIR").map(PathBuf::from));
        Cache { dir }
    }


    fn path(&self, kind: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{kind}.json")))
    }

    /// Load a kind if the stored table is valid and covers `n_max`.
    /// Returns the *full* stored value list (possibly longer than asked).
    pub fn load(&self, kind: &str, n_max: u64) -> Option<Vec<BigInt>> {
        let path = self.path(kind)?;
        let file = read_cache_file(&path)?;
        if file.version != CACHE_VERSION || file.kind != kind || file.n_max < n_max {
            return None;
        }
        if file.values.len() != expected_len(kind, file.n_max) {
            return None;
        }
        if checksum(&file.values) != file.checksum {
            return None;
        }
        file.values.iter().map(|v| v.parse().ok()).collect()
    }

    /// Store a kind, unless an equal-or-longer valid table is already there.
    pub fn store(&self, kind: &str, n_max: u64, values: &[BigInt]) {
        let Some(path) = self.path(kind) else {
            return;
        };
        if let Some(existing) = read_cache_file(&path) {
            if existing.version == CACHE_VERSION
                && existing.kind == kind
                && existing.n_max >= n_max
                && checksum(&existing.values) == existing.checksum
            {
                return;
            }
        }
        let strings: Vec<String> = values.iter().map(|v| v.to_string()).collect();
        let file = CacheFile {
            version: CACHE_VERSION,
            kind: kind.to_string(),
            n_max,
            checksum: checksum(&strings),
            values: strings,
        };
        if let Some(parent) = path.parent() {
            let _ = std::fs::create_dir_all(parent);
        }
        if let Ok(body) = serde_json::to_string(&file) {
            let _ = std::fs::write(&path, body);
        }
    }
}

fn read_cache_file(path: &Path) -> Option<CacheFile> {
    let body = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&body).ok()
}
