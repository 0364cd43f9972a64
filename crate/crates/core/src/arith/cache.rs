//! Binary cache of exact tau values.
//!
//! Layout: `b"RSLB"`, version (u32 LE), `n_max` (u64 LE), then `n_max`
//! values of `τ(1..=n_max)` as i128 LE.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::coeffs::TableCheck;
use super::tau::{build_tau_table, tau_values, CoefficientTable};
use super::ntt::DEFAULT_PRIMES;
use super::ArithError;

pub const MAGIC: &[u8; 4] = b"RSLB";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 16;

pub fn write_cache(path: &Path, table: &CoefficientTable) -> Result<(), ArithError> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(table.n_max() as u64).to_le_bytes())?;
    for &t in &table.tau_values()[1..] {
        w.write_all(&t.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Raw `τ` values with slot 0 unused.
pub fn read_cache(path: &Path) -> Result<Vec<i128>, ArithError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header).map_err(|_| ArithError::Format("truncated header".into()))?;
    if &header[0..4] != MAGIC {
        return Err(ArithError::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(ArithError::Format(format!("unsupported version {version}")));
    }
    let n_max = u64::from_le_bytes(header[8..16].try_into().expect("8 bytes")) as usize;
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    if body.len() != n_max * 16 {
        return Err(ArithError::Format(format!(
            "expected {} value bytes, found {}",
            n_max * 16,
            body.len()
        )));
    }
    let mut tau = Vec::with_capacity(n_max + 1);
    tau.push(0);
    tau.extend(body.chunks_exact(16).map(|c| i128::from_le_bytes(c.try_into().expect("16 bytes"))));
    Ok(tau)
}

/// Result of `rslab tau --verify`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CacheReport {
    pub path: String,
    pub n_max: usize,
    pub matches_recomputation: bool,
    pub first_mismatch: Option<usize>,
    pub checks: Option<TableCheck>,
    pub error: Option<String>,
}

impl CacheReport {
    pub fn ok(&self) -> bool {
        self.matches_recomputation && self.checks.is_some() && self.error.is_none()
    }
}

/// Load a cache, recompute independently, and run the structural checks.
pub fn verify_cache(path: &Path) -> Result<CacheReport, ArithError> {
    let tau = read_cache(path)?;
    let n_max = tau.len() - 1;
    let fresh = tau_values(n_max.max(1), &DEFAULT_PRIMES)?;
    let first_mismatch = (1..=n_max).find(|&n| tau[n] != fresh[n]);
    let (checks, error) = match CoefficientTable::from_tau(tau).and_then(|t| t.check_all()) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(CacheReport {
        path: path.display().to_string(),
        n_max,
        matches_recomputation: first_mismatch.is_none(),
        first_mismatch,
        checks,
        error,
    })
}

pub fn cache_path(dir: &Path) -> PathBuf {
    dir.join("tau.rslb")
}

/// Table of size `n_max`, reusing `dir/tau.rslb` when it covers the range
/// and refreshing it otherwise.
pub fn load_or_build(dir: Option<&Path>, n_max: usize) -> Result<CoefficientTable, ArithError> {
    let Some(dir) = dir else {
        return build_tau_table(n_max);
    };
    let path = cache_path(dir);
    if let Ok(mut tau) = read_cache(&path) {
        if tau.len() > n_max {
            tau.truncate(n_max + 1);
            return CoefficientTable::from_tau(tau);
        }
    }
    let table = build_tau_table(n_max)?;
    std::fs::create_dir_all(dir)?;
    write_cache(&path, &table)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_verify() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.rslb");
        let table = build_tau_table(500).unwrap();
        write_cache(&path, &table).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[..4], b"RSLB");
        assert_eq!(bytes.len(), 16 + 500 * 16);
        assert_eq!(read_cache(&path).unwrap(), table.tau_values());
        let report = verify_cache(&path).unwrap();
        assert!(report.ok());
    }

    #[test]
    fn corrupted_cache_is_flagged() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.rslb");
        write_cache(&path, &build_tau_table(100).unwrap()).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        // τ(10) low byte
        bytes[16 + 9 * 16] ^= 1;
        std::fs::write(&path, &bytes).unwrap();
        let report = verify_cache(&path).unwrap();
        assert_eq!(report.first_mismatch, Some(10));
        assert!(!report.ok());
        bytes[0] = b'X';
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_cache(&path), Err(ArithError::Format(_))));
    }

    #[test]
    fn load_or_build_reuses_larger_cache() {
        let dir = tempfile::tempdir().unwrap();
        let big = load_or_build(Some(dir.path()), 300).unwrap();
        let small = load_or_build(Some(dir.path()), 100).unwrap();
        assert_eq!(small.tau_values(), &big.tau_values()[..101]);
    }
}
