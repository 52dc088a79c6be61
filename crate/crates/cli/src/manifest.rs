use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::artifact::to_json;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

/// Provenance of one command run. Everything except `wall_time_seconds` is
/// reproducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub command: String,
    pub config_digest: String,
    pub seed: u64,
    pub tool_version: String,
    pub wall_time_seconds: String,
    pub outputs: Vec<OutputDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects the files a command writes and finishes with its manifest.
pub struct Run {
    command: String,
    config_digest: String,
    seed: u64,
    out_dir: PathBuf,
    started: Instant,
    outputs: Vec<OutputDigest>,
}

impl Run {
    pub fn start(command: &str, config: &str, seed: u64, out_dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.display().to_string(), source })?;
        Ok(Self {
            command: command.to_string(),
            config_digest: sha256_hex(config.as_bytes()),
            seed,
            out_dir: out_dir.to_path_buf(),
            started: Instant::now(),
            outputs: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }

    pub fn write(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let path = self.path(name);
        fs::write(&path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        self.outputs.push(OutputDigest { path: name.to_string(), sha256: sha256_hex(contents.as_bytes()) });
        Ok(())
    }

    pub fn finish(self) -> CliResult<RunManifest> {
        let manifest = RunManifest {
            command: self.command.clone(),
            config_digest: self.config_digest,
            seed: self.seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds: format!("{:.3}", self.started.elapsed().as_secs_f64()),
            outputs: self.outputs,
        };
        let name = format!("manifest_{}.json", self.command.replace(' ', "_"));
        let path = self.out_dir.join(&name);
        fs::write(&path, to_json(&manifest))
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Ok(manifest)
    }
}
