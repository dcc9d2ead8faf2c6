//! Shared plumbing: error-to-exit-code mapping, atomic file writes, digests
//! and flag parsing.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use idiv_core::corpus::{DocType, FilterConfig};
use sha2::{Digest, Sha256};

/// Input errors exit with 1, internal invariant violations with 2.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Self::Internal(msg.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Input(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn open_buf(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::input(format!("cannot open {}: {e}", path.display())))
}

/// Checks that an output file can be created where requested, before any
/// real work starts.
pub fn check_out_path(path: &Path) -> Result<()> {
    if path.is_dir() {
        return Err(CliError::input(format!(
            "output path {} is a directory",
            path.display()
        )));
    }
    match path.parent().filter(|p| !p.as_os_str().is_empty()) {
        Some(dir) if !dir.is_dir() => Err(CliError::input(format!(
            "output directory {} does not exist",
            dir.display()
        ))),
        _ => Ok(()),
    }
}

/// Writes through a temp file in the destination directory and renames, so
/// failures never leave partial output behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = match dir {
        Some(d) => tempfile::NamedTempFile::new_in(d),
        None => tempfile::NamedTempFile::new_in("."),
    }
    .map_err(|e| CliError::input(format!("cannot stage {}: {e}", path.display())))?;
    tmp.write_all(bytes)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::input(format!("cannot finalize {}: {e}", path.display())))?;
    Ok(())
}

pub fn sha256_hex(path: &Path) -> Result<String> {
    let mut file = File::open(path)
        .map_err(|e| CliError::input(format!("cannot open {}: {e}", path.display())))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Parses a `--filters` spec: comma-separated `key=value` pairs with keys
/// `doc_types` (pipe-separated type names), `require_references` and
/// `require_all_authors_classified`. Unspecified keys keep their defaults.
pub fn parse_filter_spec(spec: &str) -> Result<FilterConfig> {
    let mut cfg = FilterConfig::default();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("bad filter token '{token}'")))?;
        match key {
            "doc_types" => {
                cfg.allowed_doc_types = value
                    .split('|')
                    .map(str::trim)
                    .filter(|v| !v.is_empty())
                    .map(DocType::from_wire)
                    .collect();
                if cfg.allowed_doc_types.is_empty() {
                    return Err(CliError::input("doc_types filter is empty"));
                }
            }
            "require_references" => cfg.require_references = parse_bool(value)?,
            "require_all_authors_classified" => {
                cfg.require_all_authors_classified = parse_bool(value)?
            }
            other => return Err(CliError::input(format!("unknown filter key '{other}'"))),
        }
    }
    Ok(cfg)
}

fn parse_bool(v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(CliError::input(format!("expected true/false, got '{other}'"))),
    }
}
