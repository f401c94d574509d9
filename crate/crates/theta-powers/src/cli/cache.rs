//! On-disk cache of exact coefficient series, one file per reduced `(k, n)`.
//!
//! Layout: a three-line header followed by one decimal integer per line.
//!
//! ```text
//! THETAPOW-SERIES
//! version 1
//! k=3 n=0 order=40 checksum=<sha256 of the body, hex>
//! 1
//! 6
//! ...
//! ```
//!
//! A file is only ever replaced whole (temporary file and rename) and only by a
//! longer series. Writers take an advisory `.lock` file created exclusively; a
//! writer that finds the lock taken skips the store. A header or checksum
//! mismatch makes the entry count as absent, so it is recomputed and rewritten.

use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use crate::coeff::{gamma_series_dp, CoeffKey, IntSeries};
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &str = "THETAPOW-SERIES";
pub const CACHE_VERSION: u32 = 1;

/// A decoded, checksum-validated cache file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub key: CoeffKey,
    pub series: IntSeries,
    pub version: u32,
    pub checksum: String,
}

fn body_of(series: &IntSeries) -> String {
    let mut body = String::new();
    for c in &series.coeffs {
        body.push_str(&c.to_string());
        body.push('\n');
    }
    body
}

fn digest(body: &str) -> String {
    Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl CacheEntry {
    pub fn new(key: CoeffKey, series: IntSeries) -> CacheEntry {
        let checksum = digest(&body_of(&series));
        CacheEntry { key, series, version: CACHE_VERSION, checksum }
    }

    pub fn encode(&self) -> String {
        format!(
            "{CACHE_MAGIC}\nversion {}\nk={} n={} order={} checksum={}\n{}",
            self.version,
            self.key.k,
            self.key.n,
            self.series.order,
            self.checksum,
            body_of(&self.series)
        )
    }

    /// Full validation; any defect yields `None` rather than a partial entry.
    pub fn decode(text: &str) -> Option<CacheEntry> {
        let mut lines = text.splitn(4, '\n');
        if lines.next()? != CACHE_MAGIC {
            return None;
        }
        let version: u32 = lines.next()?.strip_prefix("version ")?.parse().ok()?;
        if version != CACHE_VERSION {
            return None;
        }
        let mut k = None;
        let mut n = None;
        let mut order = None;
        let mut checksum = None;
        for field in lines.next()?.split(' ') {
            let (name, value) = field.split_once('=')?;
            match name {
                "k" => k = value.parse::<u32>().ok(),
                "n" => n = value.parse::<i64>().ok(),
                "order" => order = value.parse::<usize>().ok(),
                "checksum" => checksum = Some(value.to_string()),
                _ => return None,
            }
        }
        let (key, order, checksum) = (CoeffKey::new(k?, n?).ok()?, order?, checksum?);
        let body = lines.next()?;
        if digest(body) != checksum {
            return None;
        }
        let coeffs: Vec<BigInt> = body.lines().map(|l| l.parse().ok()).collect::<Option<_>>()?;
        if coeffs.len() != order + 1 {
            return None;
        }
        Some(CacheEntry { key, series: IntSeries { coeffs, order }, version, checksum })
    }
}

/// Where a series came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Computed,
    /// A file existed but failed validation.
    Recomputed,
}

impl CacheStatus {
    pub fn name(&self) -> &'static str {
        match self {
            CacheStatus::Hit => "hit",
            CacheStatus::Computed => "computed",
            CacheStatus::Recomputed => "recomputed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeriesCache {
    dir: PathBuf,
}

impl SeriesCache {
    pub fn new(dir: impl Into<PathBuf>) -> SeriesCache {
        SeriesCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: CoeffKey) -> PathBuf {
        self.dir.join(format!("gamma_k{}_n{}.series", key.k, key.n))
    }

    /// Valid stored entry for `key`, if any, regardless of its order.
    pub fn load(&self, key: CoeffKey) -> Result<Option<CacheEntry>> {
        match fs::read_to_string(self.path(key)) {
            Ok(text) => Ok(CacheEntry::decode(&text).filter(|e| e.key == key)),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
            Err(e) if e.kind() == ErrorKind::InvalidData => Ok(None),
            Err(e) => Err(Error::Io(e)),
        }
    }

    /// Stores `series` unless a valid entry at least as long exists or another writer holds the lock.
    pub fn store(&self, key: CoeffKey, series: &IntSeries) -> Result<bool> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(key);
        let lock = path.with_extension("series.lock");
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(_) => {}
            Err(e) if e.kind() == ErrorKind::AlreadyExists => return Ok(false),
            Err(e) => return Err(Error::Io(e)),
        }
        let result = (|| -> Result<bool> {
            if self.load(key)?.is_some_and(|e| e.series.order >= series.order) {
                return Ok(false);
            }
            let tmp = path.with_extension(format!("series.tmp{}", std::process::id()));
            {
                let mut f = fs::File::create(&tmp)?;
                f.write_all(CacheEntry::new(key, series.clone()).encode().as_bytes())?;
                f.sync_all()?;
            }
            fs::rename(&tmp, &path)?;
            Ok(true)
        })();
        let _ = fs::remove_file(&lock);
        result
    }

    /// Series of a reduced key to `order`, from the cache when possible.
    pub fn series(&self, key: CoeffKey, order: usize) -> Result<(IntSeries, CacheStatus)> {
        key.require_reduced()?;
        let existed = self.path(key).exists();
        if let Some(entry) = self.load(key)? {
            if entry.series.order >= order {
                return Ok((entry.series.truncated(order), CacheStatus::Hit));
            }
        }
        let series = gamma_series_dp(key, order)?;
        let status = match self.load(key)? {
            None if existed => CacheStatus::Recomputed,
            _ => CacheStatus::Computed,
        };
        self.store(key, &series)?;
        Ok((series, status))
    }
}
