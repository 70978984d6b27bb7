//! Artifact names and atomic file output.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

pub const FEATURES: &str = "features.csv";
pub const STATS_JSON: &str = "stats.json";
pub const STATS_CSV: &str = "stats.csv";
pub const HIST_DIR: &str = "hist";
pub const SPEARMAN: &str = "spearman_matrix.csv";
pub const SELECTION_JSON: &str = "selection_report.json";
pub const SELECTION_CSV: &str = "selection_report.csv";
pub const RFE_TRACE: &str = "rfe_trace.json";
pub const EVAL_GRID_CSV: &str = "eval_grid.csv";
pub const EVAL_MAX_CSV: &str = "eval_max.csv";
pub const EVAL_GRID_JSON: &str = "eval_grid.json";
pub const REPORT_MD: &str = "report.md";
pub const REPORT_JSON: &str = "report.json";
pub const CORPUS: &str = "corpus.csv";

/// Writes `bytes` to a temporary sibling and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

/// Renders through a writer callback into memory, then writes atomically.
pub fn write_with<F>(path: &Path, render: F) -> anyhow::Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> cuelens::Result<()>,
{
    let mut buf = Vec::new();
    render(&mut buf)?;
    write_atomic(path, &buf).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn path_in(outdir: &Path, name: &str) -> PathBuf {
    outdir.join(name)
}
