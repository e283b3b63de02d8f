//! Output directory handling: every artifact is written through
//! [`Artifacts`], which records a SHA-256 checksum for the manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Option<String>,
    pub seed: Option<u64>,
    pub output_dir: String,
    pub tool_version: String,
    pub timestamp: String,
    pub files: Vec<FileEntry>,
}

pub struct Artifacts {
    dir: PathBuf,
    files: Vec<FileEntry>,
}

impl Artifacts {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.files.push(FileEntry {
            name: name.to_string(),
            sha256: hex::encode(Sha256::digest(contents)),
            bytes: contents.len(),
        });
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Writes `manifest.json` listing every file written so far.
    pub fn finish(self, command: &str, config: Option<&Path>, seed: Option<u64>) -> Result<PathBuf> {
        let manifest = RunManifest {
            command: command.to_string(),
            config: config.map(|p| p.display().to_string()),
            seed,
            output_dir: self.dir.display().to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            files: self.files,
        };
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }
}
