//! Named hierarchies with judgment sets: a small hand-judged demo and
//! generated presets whose judgments are derived from seed weights.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Model, PrunePolicy};
use crate::hierarchy::{HierarchyDocument, Intensity, JudgmentRecord, LayerDocument, ModelError, NodeDocument};

/// Separator between a criterion and its sub-criterion in generated node names.
pub const SUB_CRITERION_SEPARATOR: &str = " / ";

const BUNDLED: &[(&str, &str)] = &[
    ("demo", include_str!("../data/presets/demo.json")),
    ("iot-full", include_str!("../data/presets/iot-full.json")),
    ("wearable-health-sensor", include_str!("../data/presets/wearable-health-sensor.json")),
    ("home-automation-enterprise", include_str!("../data/presets/home-automation-enterprise.json")),
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PresetError {
    #[error("unknown preset '{name}' (available: {})", available.join(", "))]
    UnknownPreset { name: String, available: Vec<String> },
    #[error("preset '{name}': {message}")]
    Invalid { name: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl PresetError {
    /// Stable identifier of the variant, used in machine-readable error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Self::UnknownPreset { .. } => "UnknownPreset",
            Self::Invalid { .. } => "InvalidPreset",
            Self::Model(e) => e.code(),
        }
    }
}

/// Inputs for generating a two- or three-level hierarchy with judgments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub goal: String,
    pub criteria: Vec<String>,
    /// Replicated under every criterion; empty for a flat criterion layer.
    #[serde(default)]
    pub sub_criteria: Vec<String>,
    pub alternatives: Vec<String>,
    pub criterion_weights: BTreeMap<String, f64>,
    #[serde(default)]
    pub sub_criterion_weights: BTreeMap<String, f64>,
    pub alternative_scores: BTreeMap<String, f64>,
    /// Alternative scores are scaled by `exp(jitter * u)`, `u` uniform in [-1, 1],
    /// independently per leaf context.
    #[serde(default)]
    pub jitter: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PresetSource {
    Document { document: HierarchyDocument },
    Generated(GeneratorSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetFile {
    pub name: String,
    pub title: String,
    /// Judgments are invented for demonstration, not measured data.
    pub illustrative: bool,
    pub description: String,
    pub source: PresetSource,
    #[serde(default)]
    pub prune: Option<PrunePolicy>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetInfo {
    pub name: String,
    pub title: String,
    pub illustrative: bool,
    pub description: String,
    pub criteria: usize,
    pub alternatives: usize,
    pub has_prune_policy: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: String,
    pub title: String,
    pub illustrative: bool,
    pub description: String,
    pub document: HierarchyDocument,
    pub prune: Option<PrunePolicy>,
}

impl Preset {
    pub fn model(&self) -> Result<Model, ModelError> {
        Model::from_document(&self.document)
    }

    pub fn info(&self) -> PresetInfo {
        PresetInfo {
            name: self.name.clone(),
            title: self.title.clone(),
            illustrative: self.illustrative,
            description: self.description.clone(),
            criteria: self.document.layers.iter().map(|l| l.nodes.len()).sum(),
            alternatives: self.document.alternatives.len(),
            has_prune_policy: self.prune.is_some(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, PresetError> {
        let file: PresetFile = serde_json::from_str(text).map_err(|e| PresetError::Invalid {
            name: "<file>".into(),
            message: e.to_string(),
        })?;
        Self::from_file(file)
    }

    pub fn from_file(file: PresetFile) -> Result<Self, PresetError> {
        let document = match file.source {
            PresetSource::Document { document } => document,
            PresetSource::Generated(spec) => generate(&spec).map_err(|message| PresetError::Invalid {
                name: file.name.clone(),
                message,
            })?,
        };
        Ok(Self {
            name: file.name,
            title: file.title,
            illustrative: file.illustrative,
            description: file.description,
            document,
            prune: file.prune,
        })
    }
}

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn load_bundled(name: &str) -> Result<Preset, PresetError> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| PresetError::UnknownPreset {
            name: name.to_string(),
            available: bundled_names().into_iter().map(String::from).collect(),
        })?;
    Preset::from_json_str(text)
}

pub fn load_file(path: &Path) -> Result<Preset, PresetError> {
    let text = std::fs::read_to_string(path).map_err(|e| PresetError::Invalid {
        name: path.display().to_string(),
        message: e.to_string(),
    })?;
    Preset::from_json_str(&text)
}

pub fn list_bundled() -> Vec<PresetInfo> {
    bundled_names()
        .into_iter()
        .map(|n| load_bundled(n).expect("bundled presets are valid").info())
        .collect()
}

/// Upper-triangle judgments whose intensities are the scale points nearest
/// to the weight ratios.
pub fn judgments_from_weights(context: &str, children: &[String], weights: &[f64]) -> Vec<JudgmentRecord> {
    let mut out = Vec::with_capacity(children.len() * children.len().saturating_sub(1) / 2);
    for i in 0..children.len() {
        for j in i + 1..children.len() {
            out.push(JudgmentRecord::new(
                context,
                children[i].as_str(),
                children[j].as_str(),
                Intensity::nearest(weights[i] / weights[j]),
            ));
        }
    }
    out
}

fn lookup(map: &BTreeMap<String, f64>, names: &[String], what: &str) -> Result<Vec<f64>, String> {
    names
        .iter()
        .map(|n| match map.get(n) {
            Some(&w) if w > 0.0 && w.is_finite() => Ok(w),
            Some(w) => Err(format!("{what} '{n}' has non-positive weight {w}")),
            None => Err(format!("no {what} weight for '{n}'")),
        })
        .collect()
}

fn generate(spec: &GeneratorSpec) -> Result<HierarchyDocument, String> {
    let goal = spec.goal.clone();
    let mut layers = vec![LayerDocument {
        name: "criteria".into(),
        nodes: spec
            .criteria
            .iter()
            .map(|c| NodeDocument {
                name: c.clone(),
                parent: goal.clone(),
            })
            .collect(),
    }];
    let mut judgments = Vec::new();
    if spec.criteria.len() >= 2 {
        let w = lookup(&spec.criterion_weights, &spec.criteria, "criterion")?;
        judgments.extend(judgments_from_weights(&goal, &spec.criteria, &w));
    }

    let leaves: Vec<String> = if spec.sub_criteria.is_empty() {
        spec.criteria.clone()
    } else {
        let sub_w = if spec.sub_criteria.len() >= 2 {
            Some(lookup(&spec.sub_criterion_weights, &spec.sub_criteria, "sub-criterion")?)
        } else {
            None
        };
        let mut nodes = Vec::new();
        for c in &spec.criteria {
            let children: Vec<String> = spec
                .sub_criteria
                .iter()
                .map(|s| format!("{c}{SUB_CRITERION_SEPARATOR}{s}"))
                .collect();
            if let Some(w) = &sub_w {
                judgments.extend(judgments_from_weights(c, &children, w));
            }
            nodes.extend(children.into_iter().map(|name| NodeDocument {
                name,
                parent: c.clone(),
            }));
        }
        let leaves = nodes.iter().map(|n| n.name.clone()).collect();
        layers.push(LayerDocument {
            name: "sub-criteria".into(),
            nodes,
        });
        leaves
    };

    let scores = lookup(&spec.alternative_scores, &spec.alternatives, "alternative")?;
    for (k, leaf) in leaves.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(k as u64);
        let w: Vec<f64> = scores
            .iter()
            .map(|s| s * (spec.jitter * rng.random_range(-1.0..=1.0)).exp())
            .collect();
        judgments.extend(judgments_from_weights(leaf, &spec.alternatives, &w));
    }

    Ok(HierarchyDocument {
        goal,
        layers,
        alternatives: spec.alternatives.clone(),
        judgments,
    })
}
