//! Command-line harness around the dpde toolkit: named presets, flat config
//! files, and deterministic CSV/SVG artifacts.

use std::fs;
use std::path::Path;

pub mod config;
pub mod convergence;
pub mod error;
pub mod presets;
pub mod runner;
pub mod svg;

use error::HarnessError;

/// Writes a file through a temporary sibling plus rename, so readers never
/// observe a half-written artifact. Always uses LF line endings (the content
/// is produced with `\n` only).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), HarnessError> {
    let mut tmp = path.as_os_str().to_os_string();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, bytes)
        .map_err(|e| HarnessError::io(format!("writing {}", tmp.display()), e))?;
    fs::rename(&tmp, path)
        .map_err(|e| HarnessError::io(format!("renaming into {}", path.display()), e))
}
