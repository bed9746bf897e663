pub mod build;
pub mod fit;
pub mod simulate;
pub mod validate;

use std::path::{Path, PathBuf};

use wsde_core::builder::ModelCard;
use wsde_core::{Error, Model64};

pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Input(_) => "usage",
            CliError::Core(e) => match e {
                Error::InvalidParameter { .. } | Error::InvalidTabulated(_) | Error::UnknownFamily(_) => {
                    "invalid_spec"
                }
                Error::NegativeRadicand { .. } => "negative_density",
                Error::Config(_) => "invalid_config",
                Error::Precondition(_) | Error::DegenerateSeries => "precondition",
                Error::NonPositiveAcf { .. } | Error::NonConvergence { .. } => "fit_failed",
                Error::Format(_) => "malformed_input",
                _ => "model_error",
            },
        }
    }
}

pub fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

pub fn read_json<V: serde::de::DeserializeOwned>(path: &Path) -> Result<V, CliError> {
    let bytes = read(path)?;
    serde_json::from_slice(&bytes)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())).into())
}

pub fn load_model(path: &Path) -> Result<(ModelCard, Model64), CliError> {
    let card: ModelCard = read_json(path)?;
    let model = Model64::from_card(&card)?;
    if model.hash() != card.model_hash {
        log::warn!(
            "{}: stored model hash {} differs from the rebuilt model's {}",
            path.display(),
            card.model_hash,
            model.hash()
        );
    }
    Ok((card, model))
}

pub fn pretty<V: serde::Serialize>(value: &V) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("output serializes");
    out.push(b'\n');
    out
}
