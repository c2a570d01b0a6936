//! On-disk cache of coefficient tables.
//!
//! Each entry is a payload file plus a `.meta.json` sidecar recording what
//! was computed and the SHA-256 of the payload. Residue tables use the
//! `QS01` binary encoding; exact tables are stored as JSON. Entries are keyed
//! by a hash of (name, method, ring, order, crate version), so a version bump
//! never reads stale data.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::overpartition::{CoeffTable, Method};
use crate::qseries::{CoefficientRing, Series};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
struct CacheMeta {
    name: String,
    method: Method,
    ring: String,
    order: usize,
    version: String,
    payload: String,
    sha256: String,
}

#[derive(Debug)]
pub enum CacheLookup {
    Hit(CoeffTable),
    Miss,
    /// An entry exists but failed validation; it should be recomputed.
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Write-to-temp-then-rename so readers never see a partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

impl TableCache {
    /// Opens (creating if needed) a cache rooted at `dir`.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(TableCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(name: &str, method: Method, ring: CoefficientRing, order: usize) -> String {
        let id = format!("{name}|{method}|{}|{order}|{CODE_VERSION}", ring.tag());
        sha256_hex(id.as_bytes())[..32].to_string()
    }

    fn meta_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.meta.json"))
    }

    pub fn lookup(&self, name: &str, method: Method, ring: CoefficientRing, order: usize) -> Result<CacheLookup> {
        let key = Self::key(name, method, ring, order);
        let meta_path = self.meta_path(&key);
        if !meta_path.exists() {
            return Ok(CacheLookup::Miss);
        }
        let meta: CacheMeta = match serde_json::from_slice(&fs::read(&meta_path)?) {
            Ok(m) => m,
            Err(e) => return Ok(CacheLookup::Invalid(format!("unreadable metadata: {e}"))),
        };
        let expected = CacheMeta {
            payload: meta.payload.clone(),
            sha256: meta.sha256.clone(),
            name: name.to_string(),
            method,
            ring: ring.tag(),
            order,
            version: CODE_VERSION.to_string(),
        };
        if meta != expected {
            return Ok(CacheLookup::Invalid("metadata does not match request".into()));
        }
        let bytes = match fs::read(self.dir.join(&meta.payload)) {
            Ok(b) => b,
            Err(e) => return Ok(CacheLookup::Invalid(format!("missing payload: {e}"))),
        };
        if sha256_hex(&bytes) != meta.sha256 {
            return Ok(CacheLookup::Invalid("payload hash mismatch".into()));
        }
        let series = match ring {
            CoefficientRing::ExactInteger => serde_json::from_slice::<Series>(&bytes).map_err(|e| e.to_string()),
            CoefficientRing::ModM(_) => Series::from_binary(&bytes).map_err(|e| e.to_string()),
        };
        match series {
            Ok(s) if s.ring() == ring && s.order() == order => {
                Ok(CacheLookup::Hit(CoeffTable::new(name, method, s)))
            }
            Ok(_) => Ok(CacheLookup::Invalid("payload shape mismatch".into())),
            Err(e) => Ok(CacheLookup::Invalid(e)),
        }
    }

    /// Stores `table`, returning the payload path.
    pub fn store(&self, table: &CoeffTable) -> Result<PathBuf> {
        let ring = table.ring();
        let key = Self::key(&table.name, table.method, ring, table.len());
        let (payload, bytes) = match ring {
            CoefficientRing::ExactInteger => (format!("{key}.json"), serde_json::to_vec(table.series())?),
            CoefficientRing::ModM(_) => (format!("{key}.qs"), table.series().to_binary()?),
        };
        let path = self.dir.join(&payload);
        write_atomic(&path, &bytes)?;
        let meta = CacheMeta {
            name: table.name.clone(),
            method: table.method,
            ring: ring.tag(),
            order: table.len(),
            version: CODE_VERSION.to_string(),
            payload,
            sha256: sha256_hex(&bytes),
        };
        write_atomic(&self.meta_path(&key), &serde_json::to_vec_pretty(&meta)?)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overpartition::overpartition_table;

    #[test]
    fn round_trip_both_rings() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path()).unwrap();
        for ring in [CoefficientRing::ExactInteger, CoefficientRing::ModM(120)] {
            let t = overpartition_table(ring, 200, Method::ThetaInversion).unwrap();
            assert!(matches!(cache.lookup("pbar", t.method, ring, 200).unwrap(), CacheLookup::Miss));
            cache.store(&t).unwrap();
            match cache.lookup("pbar", t.method, ring, 200).unwrap() {
                CacheLookup::Hit(back) => assert_eq!(back, t),
                other => panic!("expected hit, got {other:?}"),
            }
            assert!(matches!(cache.lookup("pbar", t.method, ring, 199).unwrap(), CacheLookup::Miss));
        }
    }

    #[test]
    fn corrupted_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path()).unwrap();
        let ring = CoefficientRing::ModM(8);
        let t = overpartition_table(ring, 50, Method::EulerProduct).unwrap();
        let path = cache.store(&t).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 1;
        fs::write(&path, bytes).unwrap();
        assert!(matches!(
            cache.lookup("pbar", Method::EulerProduct, ring, 50).unwrap(),
            CacheLookup::Invalid(_)
        ));
    }

    #[test]
    fn keys_separate_methods_and_rings() {
        let a = TableCache::key("pbar", Method::ThetaInversion, CoefficientRing::ModM(5), 10);
        let b = TableCache::key("pbar", Method::EulerProduct, CoefficientRing::ModM(5), 10);
        let c = TableCache::key("pbar", Method::ThetaInversion, CoefficientRing::ModM(8), 10);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 32);
    }
}
