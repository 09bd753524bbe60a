//! Deterministic CSV/JSON emission.
//!
//! Numbers are written as `{:.16e}` (17 significant digits), which
//! round-trips every finite `f64` exactly and is locale-independent, so a
//! rerun with the same configuration produces byte-identical files.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// Render one number in the fixed CSV format.
pub fn format_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Create the output directory (and parents) if missing.
pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Write a CSV file with the given header line (no trailing newline in
/// `header`) and numeric rows. Returns the path written.
pub fn write_csv<R>(
    dir: &Path,
    name: &str,
    header: &str,
    rows: R,
) -> Result<PathBuf, CliError>
where
    R: IntoIterator,
    R::Item: AsRef<[f64]>,
{
    let mut text = String::with_capacity(4096);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        let mut first = true;
        for &x in row.as_ref() {
            if !first {
                text.push(',');
            }
            text.push_str(&format_num(x));
            first = false;
        }
        text.push('\n');
    }
    let path = dir.join(name);
    write_file(&path, &text)?;
    Ok(path)
}

/// Write a raw pre-rendered text file (e.g. a profile dump that carries
/// its own header). Returns the path written.
pub fn write_text(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    write_file(&path, contents)?;
    Ok(path)
}

/// Write pretty-printed JSON with a trailing newline. Key order follows
/// the struct definition, so output is deterministic.
pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let body = serde_json::to_string_pretty(value).map_err(|e| {
        CliError::Numerical(format!("cannot serialize {}: {e}", path.display()))
    })?;
    let mut text = body;
    text.push('\n');
    write_file(&path, &text)?;
    Ok(path)
}
