//! Locating the data directory, generator files and shipped tables.

use std::path::{Path, PathBuf};

use nichols_core::group::GroupHandle;

use crate::CliError;

pub const DATA_DIR_VAR: &str = "NICHOLS_DATA_DIR";

/// Groups shipped as `<name>.gens` in the data directory.
pub const BUILTIN: &[&str] = &["s3", "s4", "s5", "s6", "d4", "q8", "a5", "sz8", "hs", "co3"];

pub fn data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_VAR) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

/// A generator file path, or a builtin name resolved in the data directory.
pub fn resolve_group(spec: &str) -> Result<PathBuf, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(path.to_path_buf());
    }
    if BUILTIN.contains(&spec) {
        let p = data_dir().join(format!("{spec}.gens"));
        if p.is_file() {
            return Ok(p);
        }
        return Err(CliError::Missing(p));
    }
    Err(CliError::UnknownGroup(spec.to_string()))
}

pub fn load_group(spec: &str, seed: u64) -> Result<GroupHandle, CliError> {
    let path = resolve_group(spec)?;
    Ok(GroupHandle::load(&path, seed)?)
}

/// `<data>/<name>-ctx`, the default table directory of a group, if present.
pub fn default_tables_dir(name: &str) -> Option<PathBuf> {
    let dir = data_dir().join(format!("{name}-ctx"));
    dir.is_dir().then_some(dir)
}

pub fn paper_dir() -> PathBuf {
    data_dir().join("paper")
}
