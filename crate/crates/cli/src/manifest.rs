//! Run manifests written next to every output as `<output>.manifest.json`.

use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use wsde_core::provenance;

use crate::commands::CliError;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: &'static str,
    pub started: String,
    pub finished: String,
    /// Output file name and the digest of its bytes.
    pub outputs: Vec<(String, String)>,
}

pub struct Recorder {
    command: &'static str,
    argv: Vec<String>,
    started: DateTime<Utc>,
    outputs: Vec<(PathBuf, String)>,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn stamp(t: DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl Recorder {
    pub fn start(command: &'static str, argv: &[String]) -> Self {
        Recorder {
            command,
            argv: argv.to_vec(),
            started: Utc::now(),
            outputs: Vec::new(),
        }
    }

    /// Writes `bytes` to `path` and remembers it for the manifest.
    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
        self.outputs.push((path.to_path_buf(), provenance::digest_bytes(bytes)));
        Ok(())
    }

    /// Writes one manifest per recorded output.
    pub fn finish(
        self,
        config: serde_json::Value,
        model_hash: Option<String>,
        seed: Option<u64>,
    ) -> Result<(), CliError> {
        let outputs: Vec<(String, String)> = self
            .outputs
            .iter()
            .map(|(p, d)| (p.display().to_string(), d.clone()))
            .collect();
        let manifest = RunManifest {
            command: self.command.to_string(),
            argv: self.argv,
            config,
            model_hash,
            seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            started: stamp(self.started),
            finished: stamp(Utc::now()),
            outputs,
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        for (path, _) in &self.outputs {
            let target = manifest_path(path);
            std::fs::write(&target, &text).map_err(|e| CliError::io(&target, e))?;
        }
        Ok(())
    }
}
