//! On-disk JSON cache keyed by family and parameters.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Result;

/// Overrides the cache directory.
pub const CACHE_DIR_ENV: &str = "DOWLING_CACHE_DIR";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$DOWLING_CACHE_DIR`, else `.dowling-cache` in the working directory.
    pub fn from_env() -> Self {
        Self::new(
            std::env::var_os(CACHE_DIR_ENV)
                .map_or_else(|| PathBuf::from(".dowling-cache"), PathBuf::from),
        )
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// `kind` plus sorted `key=value` parameters, made filename-safe.
    pub fn key(kind: &str, params: &[(&str, String)]) -> String {
        let mut parts: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.sort();
        let raw = std::iter::once(kind.to_string())
            .chain(parts)
            .collect::<Vec<_>>()
            .join("_");
        raw.chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || "=.-_+".contains(c) {
                    c
                } else {
                    '-'
                }
            })
            .collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        match fs::read(self.path(key)) {
            Ok(bytes) => Ok(Some(serde_json::from_slice(&bytes)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes via a temporary file and rename so readers never see partial data.
    pub fn store<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec_pretty(value)?)?;
        fs::rename(tmp, self.path(key))?;
        Ok(())
    }

    /// Cached value for `key`, computing and storing it on a miss. The flag is
    /// true on a hit.
    pub fn get_or_compute<T, F>(&self, key: &str, compute: F) -> Result<(T, bool)>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        if let Some(v) = self.load(key)? {
            return Ok((v, true));
        }
        let v = compute()?;
        self.store(key, &v)?;
        Ok((v, false))
    }

    /// Removes every cached entry; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let mut removed = 0;
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(0),
            Err(e) => return Err(e.into()),
        };
        for entry in entries {
            let path = entry?.path();
            if path.extension().is_some_and(|x| x == "json") {
                fs::remove_file(path)?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}
