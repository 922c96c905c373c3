//! Deselecting low-weight criteria and alternatives, then re-solving.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{solve, EngineError, EngineOptions, GlobalWeights, Model, Solution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PruneError {
    #[error("theta must lie in (0, 1], got {0}")]
    InvalidTheta(f64),
    #[error("prune policy leaves {retained} {what}; at least {required} required")]
    EmptyRetention {
        what: &'static str,
        retained: usize,
        required: usize,
    },
    #[error("'{name}' is not a {what} of the solved hierarchy")]
    UnknownName { name: String, what: &'static str },
    #[error("hierarchy has no criterion layer {0}")]
    UnknownLayer(usize),
}

impl PruneError {
    /// Stable identifier of the variant, used in machine-readable error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Self::InvalidTheta(..) => "InvalidTheta",
            Self::EmptyRetention { .. } => "EmptyRetention",
            Self::UnknownName { .. } => "UnknownName",
            Self::UnknownLayer(..) => "UnknownLayer",
        }
    }
}

/// Which elements survive into the re-run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PrunePolicy {
    /// Keep an element iff its global weight is at least `theta / N`, where
    /// `N` is the number of peers (criteria in the layer, or alternatives).
    Threshold {
        theta: f64,
        #[serde(default)]
        criteria_layer: usize,
    },
    /// Keep exactly the listed names; `None` keeps everything of that kind.
    Explicit {
        #[serde(default)]
        criteria_layer: usize,
        #[serde(default)]
        criteria: Option<Vec<String>>,
        #[serde(default)]
        alternatives: Option<Vec<String>>,
    },
}

impl PrunePolicy {
    pub const DEFAULT_THETA: f64 = 0.5;

    pub fn threshold(theta: f64) -> Self {
        Self::Threshold {
            theta,
            criteria_layer: 0,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Threshold {
                theta,
                criteria_layer,
            } => format!("threshold: keep weight >= {theta} / N (criteria layer {criteria_layer})"),
            Self::Explicit {
                criteria,
                alternatives,
                criteria_layer,
            } => format!(
                "explicit list: {} criteria (layer {criteria_layer}), {} alternatives",
                criteria.as_ref().map_or("all".to_string(), |c| c.len().to_string()),
                alternatives.as_ref().map_or("all".to_string(), |a| a.len().to_string()),
            ),
        }
    }
}

impl Default for PrunePolicy {
    fn default() -> Self {
        Self::threshold(Self::DEFAULT_THETA)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eliminated {
    pub name: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneOutcome {
    pub policy: String,
    pub criteria_layer: usize,
    pub retained_criteria: Vec<String>,
    pub retained_alternatives: Vec<String>,
    pub eliminated_criteria: Vec<Eliminated>,
    pub eliminated_alternatives: Vec<Eliminated>,
}

fn split(
    names: &[String],
    weights: &[f64],
    keep: impl Fn(usize, &str) -> bool,
) -> (Vec<String>, Vec<Eliminated>) {
    let mut retained = Vec::new();
    let mut eliminated = Vec::new();
    for (i, (name, &weight)) in names.iter().zip(weights).enumerate() {
        if keep(i, name) {
            retained.push(name.clone());
        } else {
            eliminated.push(Eliminated {
                name: name.clone(),
                weight,
            });
        }
    }
    (retained, eliminated)
}

fn check_listed(listed: &[String], known: &[String], what: &'static str) -> Result<(), PruneError> {
    for name in listed {
        if !known.contains(name) {
            return Err(PruneError::UnknownName {
                name: name.clone(),
                what,
            });
        }
    }
    Ok(())
}

pub fn prune(weights: &GlobalWeights, policy: &PrunePolicy) -> Result<PruneOutcome, PruneError> {
    let layer_index = match policy {
        PrunePolicy::Threshold { criteria_layer, .. } | PrunePolicy::Explicit { criteria_layer, .. } => {
            *criteria_layer
        }
    };
    let layer = weights
        .layers
        .get(layer_index)
        .ok_or(PruneError::UnknownLayer(layer_index))?;
    let crit_names: Vec<String> = layer.iter().map(|n| n.name.clone()).collect();
    let crit_weights: Vec<f64> = layer.iter().map(|n| n.global).collect();
    let alts = &weights.alternatives;
    let alt_weights = &weights.alternative_weights;

    let ((retained_criteria, eliminated_criteria), (retained_alternatives, eliminated_alternatives)) =
        match policy {
            PrunePolicy::Threshold { theta, .. } => {
                if !(*theta > 0.0 && *theta <= 1.0) {
                    return Err(PruneError::InvalidTheta(*theta));
                }
                let crit_cut = theta / crit_names.len() as f64;
                let alt_cut = theta / alts.len() as f64;
                (
                    split(&crit_names, &crit_weights, |i, _| crit_weights[i] >= crit_cut),
                    split(alts, alt_weights, |i, _| alt_weights[i] >= alt_cut),
                )
            }
            PrunePolicy::Explicit {
                criteria,
                alternatives,
                ..
            } => {
                if let Some(c) = criteria {
                    check_listed(c, &crit_names, "criterion")?;
                }
                if let Some(a) = alternatives {
                    check_listed(a, alts, "alternative")?;
                }
                (
                    split(&crit_names, &crit_weights, |_, n| {
                        criteria.as_ref().is_none_or(|c| c.iter().any(|x| x == n))
                    }),
                    split(alts, alt_weights, |_, n| {
                        alternatives.as_ref().is_none_or(|a| a.iter().any(|x| x == n))
                    }),
                )
            }
        };

    if retained_criteria.is_empty() {
        return Err(PruneError::EmptyRetention {
            what: "criteria",
            retained: 0,
            required: 1,
        });
    }
    if retained_alternatives.len() < 2 {
        return Err(PruneError::EmptyRetention {
            what: "alternatives",
            retained: retained_alternatives.len(),
            required: 2,
        });
    }

    Ok(PruneOutcome {
        policy: policy.describe(),
        criteria_layer: layer_index,
        retained_criteria,
        retained_alternatives,
        eliminated_criteria,
        eliminated_alternatives,
    })
}

/// Restricts the hierarchy to the retained elements, keeps every original
/// judgment that still addresses a surviving cell, and solves again.
pub fn rerun_after_prune(
    model: &Model,
    outcome: &PruneOutcome,
    options: &EngineOptions,
) -> Result<(Model, Solution), EngineError> {
    let drop_criteria: HashSet<String> = outcome.eliminated_criteria.iter().map(|e| e.name.clone()).collect();
    let drop_alts: HashSet<String> = outcome
        .eliminated_alternatives
        .iter()
        .map(|e| e.name.clone())
        .collect();
    if outcome.retained_alternatives.len() < 2 {
        return Err(PruneError::EmptyRetention {
            what: "alternatives",
            retained: outcome.retained_alternatives.len(),
            required: 2,
        }
        .into());
    }
    let hierarchy = model.hierarchy().without(&drop_criteria, &drop_alts)?;
    let contexts: HashSet<String> = hierarchy
        .required_contexts()
        .into_iter()
        .map(|c| c.name)
        .collect();
    let judgments = model
        .judgments()
        .iter()
        .filter(|j| {
            contexts.contains(&j.context)
                && !drop_alts.contains(&j.row)
                && !drop_alts.contains(&j.col)
                && !drop_criteria.contains(&j.row)
                && !drop_criteria.contains(&j.col)
        })
        .cloned()
        .collect();
    let pruned = Model::new(hierarchy, judgments)?;
    let solution = solve(&pruned, options)?;
    Ok((pruned, solution))
}
