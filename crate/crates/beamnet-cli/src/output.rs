//! Output-directory handling: resolution, clobber protection and artifact
//! writing.

use std::path::{Path, PathBuf};

use thiserror::Error;

pub const MODEL_FILE: &str = "model.json";
pub const HISTORY_FILE: &str = "history.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const STATES_FILE: &str = "states.json";
pub const ERROR_FILE: &str = "error.json";
pub const CURVE_FILE: &str = "curve.svg";
pub const NETWORK_FILE: &str = "network.svg";
pub const COMPARE_FILE: &str = "compare.csv";

/// Every file a run may create; used for the clobber check.
const ARTIFACTS: [&str; 8] = [
    MODEL_FILE,
    HISTORY_FILE,
    SUMMARY_FILE,
    STATES_FILE,
    ERROR_FILE,
    CURVE_FILE,
    NETWORK_FILE,
    COMPARE_FILE,
];

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path} already exists; pass --overwrite to replace it")]
    WouldClobber { path: PathBuf },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// One run's output directory.
#[derive(Debug, Clone)]
pub struct OutputDir {
    pub dir: PathBuf,
}

/// Root for default output directories: `$BEAMNET_OUTPUT_ROOT` or `runs`.
pub fn default_root() -> PathBuf {
    std::env::var_os("BEAMNET_OUTPUT_ROOT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs"))
}

impl OutputDir {
    /// Picks the directory: explicit flag, then settings-file value, then
    /// `<root>/<label>`.
    pub fn resolve(
        flag: Option<PathBuf>,
        file: Option<PathBuf>,
        label: &str,
    ) -> Self {
        let dir = flag
            .or(file)
            .unwrap_or_else(|| default_root().join(label));
        Self { dir }
    }

    pub fn join(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Creates the directory and refuses to clobber existing artifacts
    /// unless overwriting was requested.
    pub fn prepare(&self, overwrite: bool) -> Result<(), OutputError> {
        std::fs::create_dir_all(&self.dir).map_err(|source| OutputError::Io {
            path: self.dir.clone(),
            source,
        })?;
        if !overwrite {
            for name in ARTIFACTS {
                let path = self.join(name);
                if path.exists() {
                    return Err(OutputError::WouldClobber { path });
                }
            }
        }
        Ok(())
    }

    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, OutputError> {
        let path = self.join(name);
        std::fs::write(&path, contents).map_err(|source| OutputError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }

    /// Nested directory for one case of a multi-case command.
    pub fn subdir(&self, name: &str) -> Self {
        Self { dir: self.dir.join(name) }
    }
}

/// Machine-readable error document written next to the other artifacts.
pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::to_string_pretty(&serde_json::json!({
        "kind": kind,
        "error": message,
    }))
    .expect("error document serialization cannot fail")
}

/// Reads an error document back; used by tests and scripts.
pub fn parse_error_json(text: &str) -> Option<(String, String)> {
    let doc: serde_json::Value = serde_json::from_str(text).ok()?;
    Some((
        doc.get("kind")?.as_str()?.to_string(),
        doc.get("error")?.as_str()?.to_string(),
    ))
}

/// True when `path` is a file that exists.
pub fn file_exists(path: &Path) -> bool {
    path.is_file()
}
