use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

/// Writes `bytes` to `path` through a temp file in the same directory, so
/// readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp =
        NamedTempFile::new_in(&dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Machine-readable error kind for the JSON error report.
pub fn error_kind(e: &anyhow::Error) -> &'static str {
    if let Some(e) = e.downcast_ref::<dv2f::Error>() {
        return match e {
            dv2f::Error::NonFinite(_)
            | dv2f::Error::InvalidParam { .. }
            | dv2f::Error::UnknownParam(_) => "invalid_param",
            dv2f::Error::InvalidScene(_) => "invalid_scene",
            dv2f::Error::Generation(_) => "generation",
            dv2f::Error::EmptyRollout => "empty_rollout",
            dv2f::Error::Parse { .. } | dv2f::Error::Json(_) => "parse",
            dv2f::Error::Trajectory(_) => "malformed_trajectory",
            dv2f::Error::Io(_) => "io",
        };
    }
    if e.chain()
        .any(|c| c.is::<std::io::Error>() || c.is::<tempfile::PersistError>())
    {
        return "io";
    }
    "error"
}

pub fn error_json(kind: &str, e: &anyhow::Error) -> serde_json::Value {
    serde_json::json!({
        "error": {
            "kind": kind,
            "message": e.to_string(),
            "chain": e.chain().skip(1).map(|c| c.to_string()).collect::<Vec<_>>(),
        }
    })
}
