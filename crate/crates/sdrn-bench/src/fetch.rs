//! Dataset acquisition: a local cache directory, checksum-verified
//! downloads, and an offline mode that only ever reads the cache.
//!
//! Downloads are written to a temporary file and renamed into place, so a
//! crash never leaves a half-written file under the final name and
//! concurrent fetches of the same dataset settle on one good copy.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::datasets::DatasetSpec;
use crate::error::{BenchError, Result};

/// Directory where dataset files are cached.
///
/// `SDRN_DATA_DIR` overrides everything; otherwise `~/.cache/sdrn-bench`
/// is used, falling back to `./sdrn-data` when no home directory is set.
pub fn cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os("SDRN_DATA_DIR") {
        return PathBuf::from(dir);
    }
    if let Some(home) = std::env::var_os("HOME") {
        return Path::new(&home).join(".cache").join("sdrn-bench");
    }
    PathBuf::from("sdrn-data")
}

/// Applies the optional `SDRN_MIRROR` rewrite to a canonical URL.
///
/// When the environment variable is set, a leading `https://github.com`
/// is replaced by its value, letting restricted networks route the
/// download through a proxy host without changing dataset definitions.
pub fn resolve_url(url: &str) -> String {
    match std::env::var("SDRN_MIRROR") {
        Ok(mirror) if !mirror.is_empty() => match url.strip_prefix("https://github.com") {
            Some(rest) => format!("{}{}", mirror.trim_end_matches('/'), rest),
            None => url.to_string(),
        },
        _ => url.to_string(),
    }
}

/// Lowercase hex SHA-256 of a byte slice.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn checksum_ok(path: &Path, want: &str) -> Result<bool> {
    let bytes = fs::read(path).map_err(|e| BenchError::io(&path.display().to_string(), &e))?;
    Ok(sha256_hex(&bytes) == want)
}

fn download(spec: &DatasetSpec, dest: &Path) -> Result<()> {
    let url = resolve_url(spec.url);
    let response = ureq::get(&url)
        .call()
        .map_err(|e| BenchError::Acquisition(format!("GET {url}: {e}")))?;
    let mut bytes = Vec::new();
    response
        .into_reader()
        .read_to_end(&mut bytes)
        .map_err(|e| BenchError::Acquisition(format!("reading body of {url}: {e}")))?;

    let got = sha256_hex(&bytes);
    if got != spec.sha256 {
        return Err(BenchError::Acquisition(format!(
            "checksum mismatch for {}: expected {}, downloaded {}",
            spec.name, spec.sha256, got
        )));
    }

    let dir = dest.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| BenchError::io(&dir.display().to_string(), &e))?;
    // Unique temporary name in the same directory so the final rename is
    // atomic and concurrent downloaders never trample each other.
    let tmp = dir.join(format!(
        ".{}.tmp-{}-{:x}",
        spec.cache_name,
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.subsec_nanos())
            .unwrap_or(0)
    ));
    fs::write(&tmp, &bytes).map_err(|e| BenchError::io(&tmp.display().to_string(), &e))?;
    fs::rename(&tmp, dest).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        BenchError::io(&dest.display().to_string(), &e)
    })?;
    Ok(())
}

/// Returns the path of a verified local copy of `spec`, downloading it
/// into the cache when necessary.
///
/// A cached file whose checksum no longer matches is re-downloaded once;
/// with `offline` set, any condition that would require network access is
/// an acquisition error instead.
pub fn ensure(spec: &DatasetSpec, offline: bool) -> Result<PathBuf> {
    ensure_in(&cache_dir(), spec, offline)
}

/// [`ensure`] against an explicit cache directory.
pub fn ensure_in(cache: &Path, spec: &DatasetSpec, offline: bool) -> Result<PathBuf> {
    let path = cache.join(spec.cache_name);
    if path.is_file() {
        if checksum_ok(&path, spec.sha256)? {
            return Ok(path);
        }
        if offline {
            return Err(BenchError::Acquisition(format!(
                "cached {} at {} fails its checksum and offline mode forbids re-downloading",
                spec.name,
                path.display()
            )));
        }
    } else if offline {
        return Err(BenchError::Acquisition(format!(
            "dataset {} is not cached at {} and offline mode forbids downloading",
            spec.name,
            path.display()
        )));
    }
    download(spec, &path)?;
    Ok(path)
}

/// Forces a download-and-verify of `spec` (used by the `fetch` command).
/// Succeeds without network access only if a valid copy is already cached.
pub fn fetch(spec: &DatasetSpec) -> Result<PathBuf> {
    ensure(spec, false)
}
