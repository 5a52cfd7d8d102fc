//! On-disk orbit cache.
//!
//! One JSON file per `(n, base key)` plus a `manifest.json` recording each
//! file's SHA-256 and the tool version that wrote it. Files are written to a
//! temporary name and renamed into place, so a reader never sees a partial
//! file. Two writers racing on the manifest can drop an entry (a later
//! cache miss), never corrupt it.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::origami::{CanonicalKey, Origami};
use crate::sl2::Orbit;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub n: usize,
    pub base_key: String,
    /// File name relative to the cache directory.
    pub orbit_file: String,
    /// SHA-256 of the file, lowercase hex.
    pub checksum: String,
    pub tool_version: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct Manifest {
    schema_version: u32,
    entries: Vec<CacheEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Cache(format!("{}: {e}", path.display()))
}

#[derive(Clone, Debug)]
pub struct OrbitCache {
    dir: PathBuf,
}

/// Whether [`OrbitCache::get_or_compute`] found the orbit on disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
}

impl OrbitCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        Ok(OrbitCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn file_name(n: usize, base: &CanonicalKey) -> String {
        format!(
            "orbit-n{n}-{}.json",
            &sha256_hex(base.to_string().as_bytes())[..16]
        )
    }

    fn read_manifest(&self) -> Manifest {
        let path = self.dir.join(MANIFEST);
        fs::read(&path)
            .ok()
            .and_then(|bytes| serde_json::from_slice::<Manifest>(&bytes).ok())
            .filter(|m| m.schema_version == MANIFEST_SCHEMA_VERSION)
            .unwrap_or(Manifest {
                schema_version: MANIFEST_SCHEMA_VERSION,
                entries: Vec::new(),
            })
    }

    fn write_atomic(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let mut tmp =
            tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| io_err(&self.dir, e))?;
        tmp.write_all(bytes).map_err(|e| io_err(tmp.path(), e))?;
        let target = self.dir.join(name);
        tmp.persist(&target).map_err(|e| io_err(&target, e.error))?;
        Ok(())
    }

    pub fn entries(&self) -> Vec<CacheEntry> {
        self.read_manifest().entries
    }

    /// The cached orbit, if its entry, checksum, version and contents all
    /// check out.
    pub fn load(&self, n: usize, base: &CanonicalKey) -> Option<Orbit> {
        let key = base.to_string();
        let manifest = self.read_manifest();
        let entry = manifest
            .entries
            .iter()
            .find(|e| e.n == n && e.base_key == key)?;
        if entry.tool_version != TOOL_VERSION {
            return None;
        }
        let bytes = fs::read(self.dir.join(&entry.orbit_file)).ok()?;
        if sha256_hex(&bytes) != entry.checksum {
            return None;
        }
        let orbit = Orbit::from_json(std::str::from_utf8(&bytes).ok()?).ok()?;
        (orbit.n() == n && orbit.base() == base).then_some(orbit)
    }

    pub fn store(&self, orbit: &Orbit) -> Result<CacheEntry> {
        let name = Self::file_name(orbit.n(), orbit.base());
        let json = orbit.to_json();
        self.write_atomic(&name, json.as_bytes())?;
        let entry = CacheEntry {
            n: orbit.n(),
            base_key: orbit.base().to_string(),
            orbit_file: name,
            checksum: sha256_hex(json.as_bytes()),
            tool_version: TOOL_VERSION.to_string(),
        };
        let mut manifest = self.read_manifest();
        manifest
            .entries
            .retain(|e| !(e.n == entry.n && e.base_key == entry.base_key));
        manifest.entries.push(entry.clone());
        manifest
            .entries
            .sort_by(|a, b| (a.n, &a.base_key).cmp(&(b.n, &b.base_key)));
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
        self.write_atomic(MANIFEST, text.as_bytes())?;
        Ok(entry)
    }

    pub fn get_or_compute(&self, o: &Origami) -> Result<(Orbit, CacheOutcome)> {
        let base = o.canonical_key();
        if let Some(orbit) = self.load(o.n(), &base) {
            return Ok((orbit, CacheOutcome::Hit));
        }
        let orbit = Orbit::compute(o)?;
        self.store(&orbit)?;
        Ok((orbit, CacheOutcome::Miss))
    }
}
