//! Path-product synthesis of local priorities into global weights.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hierarchy::DecisionHierarchy;
use crate::priority::PriorityResult;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthesisError {
    #[error("no priorities for context '{context}'")]
    MissingContext { context: String },
    #[error("context '{context}' has {expected} children but its priority vector has {got} entries")]
    DimensionMismatch {
        context: String,
        expected: usize,
        got: usize,
    },
}

impl SynthesisError {
    /// Stable identifier of the variant, used in machine-readable error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Self::MissingContext { .. } => "MissingContext",
            Self::DimensionMismatch { .. } => "DimensionMismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeWeight {
    pub name: String,
    pub parent: String,
    pub local: f64,
    pub global: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedAlternative {
    pub rank: usize,
    pub name: String,
    pub weight: f64,
}

/// Global weights for every criterion and alternative.
///
/// `breakdown[a][l]` is the contribution of leaf criterion `l` to alternative
/// `a`: the leaf's global weight times the alternative's local weight there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalWeights {
    pub layers: Vec<Vec<NodeWeight>>,
    pub leaf_criteria: Vec<String>,
    pub leaf_weights: Vec<f64>,
    pub alternatives: Vec<String>,
    pub alternative_weights: Vec<f64>,
    pub breakdown: Vec<Vec<f64>>,
}

/// Breakdown aggregated to the top criterion layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopLevelBreakdown {
    pub criteria: Vec<String>,
    pub criteria_weights: Vec<f64>,
    /// `rows[a][c]`, same alternative order as [`GlobalWeights::alternatives`].
    pub rows: Vec<Vec<f64>>,
}

impl GlobalWeights {
    pub fn weight_of(&self, alternative: &str) -> Option<f64> {
        self.alternatives
            .iter()
            .position(|a| a == alternative)
            .map(|i| self.alternative_weights[i])
    }

    pub fn criterion(&self, name: &str) -> Option<&NodeWeight> {
        self.layers.iter().flatten().find(|n| n.name == name)
    }

    /// Alternatives by descending weight; ties keep hierarchy order.
    pub fn ranking(&self) -> Vec<RankedAlternative> {
        let mut idx: Vec<usize> = (0..self.alternatives.len()).collect();
        idx.sort_by(|&a, &b| {
            self.alternative_weights[b]
                .total_cmp(&self.alternative_weights[a])
                .then(a.cmp(&b))
        });
        idx.into_iter()
            .enumerate()
            .map(|(rank, i)| RankedAlternative {
                rank: rank + 1,
                name: self.alternatives[i].clone(),
                weight: self.alternative_weights[i],
            })
            .collect()
    }

    pub fn top_level(&self, hierarchy: &DecisionHierarchy) -> TopLevelBreakdown {
        let top = &self.layers[0];
        let criteria: Vec<String> = top.iter().map(|n| n.name.clone()).collect();
        let column: Vec<usize> = self
            .leaf_criteria
            .iter()
            .map(|leaf| {
                let root = hierarchy.top_criterion(leaf);
                criteria.iter().position(|c| c == root).expect("leaf under a top criterion")
            })
            .collect();
        let rows = self
            .breakdown
            .iter()
            .map(|row| {
                let mut out = vec![0.0; criteria.len()];
                for (l, v) in row.iter().enumerate() {
                    out[column[l]] += v;
                }
                out
            })
            .collect();
        TopLevelBreakdown {
            criteria,
            criteria_weights: top.iter().map(|n| n.global).collect(),
            rows,
        }
    }
}

fn local_vector<'a>(
    local: &'a BTreeMap<String, PriorityResult>,
    context: &str,
    expected: usize,
) -> Result<&'a [f64], SynthesisError> {
    let r = local.get(context).ok_or_else(|| SynthesisError::MissingContext {
        context: context.to_string(),
    })?;
    if r.priorities.len() != expected {
        return Err(SynthesisError::DimensionMismatch {
            context: context.to_string(),
            expected,
            got: r.priorities.len(),
        });
    }
    Ok(&r.priorities)
}

/// Global weight of a criterion is the product of local weights on its path
/// to the goal; an alternative's global weight sums leaf weight × local
/// alternative weight over all leaf criteria. Single-child contexts carry
/// local weight 1 and need no entry in `local`.
pub fn synthesize(
    hierarchy: &DecisionHierarchy,
    local: &BTreeMap<String, PriorityResult>,
) -> Result<GlobalWeights, SynthesisError> {
    let mut global: BTreeMap<&str, f64> = BTreeMap::new();
    global.insert(hierarchy.goal(), 1.0);

    let mut layers = Vec::with_capacity(hierarchy.layers().len());
    for layer in hierarchy.layers() {
        let mut weights = Vec::with_capacity(layer.nodes.len());
        for node in &layer.nodes {
            let siblings = hierarchy.criterion_children(&node.parent);
            let local_w = if siblings.len() == 1 {
                1.0
            } else {
                let v = local_vector(local, &node.parent, siblings.len())?;
                let i = siblings.iter().position(|s| s == &node.name).expect("child of parent");
                v[i]
            };
            let g = global[node.parent.as_str()] * local_w;
            global.insert(node.name.as_str(), g);
            weights.push(NodeWeight {
                name: node.name.clone(),
                parent: node.parent.clone(),
                local: local_w,
                global: g,
            });
        }
        layers.push(weights);
    }

    let leaves = hierarchy.leaf_criteria();
    let alternatives = hierarchy.alternatives();
    let n_alt = alternatives.len();
    let mut breakdown = vec![vec![0.0; leaves.len()]; n_alt];
    let mut leaf_weights = Vec::with_capacity(leaves.len());
    for (l, leaf) in leaves.iter().enumerate() {
        let lw = global[leaf];
        leaf_weights.push(lw);
        let v = local_vector(local, leaf, n_alt)?;
        for (a, row) in breakdown.iter_mut().enumerate() {
            row[l] = lw * v[a];
        }
    }
    let alternative_weights = breakdown.iter().map(|row| row.iter().sum()).collect();

    Ok(GlobalWeights {
        layers,
        leaf_criteria: leaves.iter().map(|s| s.to_string()).collect(),
        leaf_weights,
        alternatives: alternatives.to_vec(),
        alternative_weights,
        breakdown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{CriterionLayer, CriterionNode};

    fn pr(v: &[f64]) -> PriorityResult {
        PriorityResult {
            priorities: v.to_vec(),
            lambda_max: v.len() as f64,
            iterations: 1,
            residual: 0.0,
        }
    }

    fn flat(criteria: &[&str]) -> DecisionHierarchy {
        let layer = CriterionLayer {
            name: "criteria".into(),
            nodes: criteria
                .iter()
                .map(|c| CriterionNode {
                    name: c.to_string(),
                    parent: "goal".into(),
                })
                .collect(),
        };
        DecisionHierarchy::new("goal", vec![layer], vec!["x".into(), "y".into()]).unwrap()
    }

    #[test]
    fn single_criterion_is_identity() {
        let h = flat(&["only"]);
        let local = BTreeMap::from([("only".to_string(), pr(&[0.3, 0.7]))]);
        let g = synthesize(&h, &local).unwrap();
        assert_eq!(g.alternative_weights, vec![0.3, 0.7]);
        assert_eq!(g.layers[0][0].local, 1.0);
    }

    #[test]
    fn two_criteria_hand_arithmetic() {
        let h = flat(&["c1", "c2"]);
        let local = BTreeMap::from([
            ("goal".to_string(), pr(&[0.6, 0.4])),
            ("c1".to_string(), pr(&[0.5, 0.5])),
            ("c2".to_string(), pr(&[0.9, 0.1])),
        ]);
        let g = synthesize(&h, &local).unwrap();
        assert!((g.alternative_weights[0] - 0.66).abs() < 1e-12);
        assert!((g.alternative_weights[1] - 0.34).abs() < 1e-12);
        assert_eq!(g.ranking()[0].name, "x");
        assert!((g.breakdown[0][1] - 0.36).abs() < 1e-12);
    }

    #[test]
    fn missing_and_mismatched_contexts() {
        let h = flat(&["c1", "c2"]);
        let local = BTreeMap::from([("goal".to_string(), pr(&[0.6, 0.4]))]);
        assert_eq!(
            synthesize(&h, &local).unwrap_err(),
            SynthesisError::MissingContext {
                context: "c1".into()
            }
        );
        let local = BTreeMap::from([
            ("goal".to_string(), pr(&[0.6, 0.3, 0.1])),
            ("c1".to_string(), pr(&[0.5, 0.5])),
            ("c2".to_string(), pr(&[0.9, 0.1])),
        ]);
        assert!(matches!(
            synthesize(&h, &local).unwrap_err(),
            SynthesisError::DimensionMismatch { expected: 2, got: 3, .. }
        ));
    }
}
