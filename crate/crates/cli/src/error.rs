use std::path::PathBuf;

use dfx_ahp::catalog::CatalogError;
use dfx_ahp::presets::PresetError;
use dfx_ahp::EngineError;
use dfx_ahp_client::ClientError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_INCONSISTENT: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    /// A model error tied to a place in an input file.
    #[error("{location}: {message}")]
    Input { location: String, message: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Preset(#[from] PresetError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Client(#[from] ClientError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, e: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            message: e.to_string(),
        }
    }
}
