//! Output directory handling: artifact writing, content hashing, and the
//! run manifest. The manifest is written last and lists only files that
//! were fully written, so a failed stage never advertises partial output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub struct OutDir {
    root: PathBuf,
    files: BTreeMap<String, (String, u64)>,
    warnings: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<OutDir> {
        fs::create_dir_all(root)
            .with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(OutDir {
            root: root.to_path_buf(),
            files: BTreeMap::new(),
            warnings: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    /// Write an artifact and record its hash for the manifest.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        let digest = Sha256::digest(bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.files
            .insert(name.to_string(), (hex, bytes.len() as u64));
        Ok(())
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        let message = message.into();
        eprintln!("warning: {message}");
        self.warnings.push(message);
    }

    /// Write `resolved_config.json` and `manifest.json`. Call once, after
    /// every artifact has been written successfully.
    pub fn finish(mut self, command: &str, config: Value) -> Result<()> {
        let config_bytes = serde_json::to_vec_pretty(&config)?;
        self.write("resolved_config.json", &config_bytes)?;

        let files: Vec<Value> = self
            .files
            .iter()
            .map(
                |(name, (sha256, bytes))| json!({ "path": name, "sha256": sha256, "bytes": bytes }),
            )
            .collect();
        let manifest = json!({
            "command": command,
            "config": config,
            "warnings": self.warnings,
            "files": files,
        });
        let manifest_path = self.root.join("manifest.json");
        fs::write(&manifest_path, serde_json::to_vec_pretty(&manifest)?)
            .with_context(|| format!("writing {}", manifest_path.display()))?;
        Ok(())
    }
}
