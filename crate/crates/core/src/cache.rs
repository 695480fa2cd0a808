//! On-disk cache of HOMFLY values keyed by canonical diagram keys.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::laurent::RationalInvariant;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "KNOTTHIN_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn open(dir: impl AsRef<Path>) -> io::Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(DiskCache { dir: dir.as_ref().to_path_buf() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &[u8]) -> PathBuf {
        self.dir.join(format!("{}.json", hex::encode(Sha256::digest(key))))
    }

    /// Unreadable or corrupt entries count as misses.
    pub fn get(&self, key: &[u8]) -> Option<RationalInvariant> {
        let bytes = fs::read(self.path(key)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    /// Writes through a temporary file and renames, so readers never see a
    /// partial entry.
    pub fn put(&self, key: &[u8], value: &RationalInvariant) -> io::Result<()> {
        let path = self.path(key);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&serde_json::to_vec(value)?)?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}
