//! Output directory handling and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::failure::Failure;

pub const MANIFEST: &str = "manifest.json";

/// Collects the files a command writes and finishes with a manifest.
pub struct RunDir {
    root: PathBuf,
    written: Vec<String>,
    started: Instant,
}

impl RunDir {
    pub fn create(root: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(root).map_err(|e| Failure::io(root, e))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new(), started: Instant::now() })
    }

    pub fn path(&mut self, name: &str) -> PathBuf {
        self.written.push(name.to_string());
        self.root.join(name)
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let path = self.path(name);
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::io(&path, e))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| Failure::io(&path, e))
    }

    pub fn write_csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<(), Failure> {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| Failure::io(&path, e))?;
        for row in rows {
            w.serialize(row).map_err(|e| Failure::io(&path, e))?;
        }
        w.flush().map_err(|e| Failure::io(&path, e))
    }

    /// Writes `manifest.json`: the resolved configuration, versions, outputs
    /// and wall time.
    pub fn finish<C: Serialize>(mut self, command: &str, config: &C) -> Result<(), Failure> {
        let manifest = Manifest {
            command,
            config,
            tool_version: env!("CARGO_PKG_VERSION"),
            library_version: markov_binning::VERSION,
            outputs: std::mem::take(&mut self.written),
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        };
        self.write_json(MANIFEST, &manifest)
    }
}

#[derive(Serialize)]
struct Manifest<'a, C> {
    command: &'a str,
    config: &'a C,
    tool_version: &'a str,
    library_version: &'a str,
    outputs: Vec<String>,
    wall_time_seconds: f64,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// File stem, or `fallback` when the path has none.
pub fn stem(path: &Path, fallback: &str) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| fallback.to_string())
}
