use std::path::{Path, PathBuf};

use dfx_ahp::engine::PrunePolicy;
use dfx_ahp::hierarchy::{HierarchyDocument, ModelError, Strictness};
use dfx_ahp::presets::{load_bundled, load_file, Preset};
use dfx_ahp::{EngineError, Model};
use dfx_ahp_api::{CreateSession, ILLUSTRATIVE_NOTICE};

use crate::error::CliError;
use crate::locate::anchor;

enum Source {
    File { path: PathBuf, text: String, doc: HierarchyDocument },
    Preset(Preset),
}

/// A hierarchy read from a document file or a preset.
pub struct Input {
    source: Source,
    pub model: Model,
}

impl Input {
    pub fn load(path: Option<&Path>, preset: Option<&str>) -> Result<Self, CliError> {
        match (path, preset) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                let doc = HierarchyDocument::from_json_str(&text, Strictness::Strict).map_err(|e| CliError::Input {
                    location: path.display().to_string(),
                    message: e.to_string(),
                })?;
                let model = Model::from_document(&doc).map_err(|e| located(path, &text, Some(&doc), &e))?;
                Ok(Self {
                    source: Source::File {
                        path: path.to_path_buf(),
                        text,
                        doc,
                    },
                    model,
                })
            }
            (None, Some(name)) => {
                let preset = if name.ends_with(".json") && Path::new(name).exists() {
                    load_file(Path::new(name))?
                } else {
                    load_bundled(name)?
                };
                let model = preset.model().map_err(EngineError::from)?;
                Ok(Self {
                    source: Source::Preset(preset),
                    model,
                })
            }
            (Some(_), Some(_)) => Err(CliError::Usage("give either an input document or --preset, not both".into())),
            (None, None) => Err(CliError::Usage("an input document or --preset is required".into())),
        }
    }

    /// Turns an engine error into a message anchored in the input.
    pub fn explain(&self, e: EngineError) -> CliError {
        match (&self.source, e) {
            (Source::File { path, text, doc }, EngineError::Model(m)) => located(path, text, Some(doc), &m),
            (Source::Preset(p), EngineError::Model(m)) => CliError::Input {
                location: format!("preset '{}'", p.name),
                message: m.to_string(),
            },
            (_, e) => CliError::Engine(e),
        }
    }

    pub fn prune_policy(&self) -> Option<&PrunePolicy> {
        match &self.source {
            Source::Preset(p) => p.prune.as_ref(),
            Source::File { .. } => None,
        }
    }

    pub fn notice(&self) -> Option<&'static str> {
        match &self.source {
            Source::Preset(p) if p.illustrative => Some(ILLUSTRATIVE_NOTICE),
            _ => None,
        }
    }

    /// Request that recreates this input as a service session.
    pub fn session_request(&self) -> CreateSession {
        match &self.source {
            Source::Preset(p) if load_bundled(&p.name).is_ok_and(|b| &b == p) => CreateSession::preset(&p.name),
            Source::Preset(p) => CreateSession::document(&p.document),
            Source::File { doc, .. } => CreateSession::document(doc),
        }
    }
}

fn located(path: &Path, text: &str, doc: Option<&HierarchyDocument>, e: &ModelError) -> CliError {
    let location = match anchor(text, doc, e) {
        Some(line) => format!("{}:{line}", path.display()),
        None => path.display().to_string(),
    };
    CliError::Input {
        location,
        message: e.to_string(),
    }
}
