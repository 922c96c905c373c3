//! Decision hierarchy: goal, criterion layers and the shared alternative set.

mod comparison;
mod document;
pub mod scale;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use comparison::{Cell, ComparisonMatrix, Completion};
pub use document::{HierarchyDocument, JudgmentRecord, LayerDocument, NodeDocument, Strictness};
pub use scale::{scale_label, Intensity, ScaleLabel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("duplicate node name '{name}'")]
    DuplicateName { name: String },
    #[error("node name must not be blank")]
    BlankName,
    #[error("node '{node}' in layer '{layer}' names parent '{parent}', which is not in the layer above")]
    OrphanNode {
        node: String,
        layer: String,
        parent: String,
    },
    #[error("criterion layer '{layer}' has no nodes")]
    EmptyLayer { layer: String },
    #[error("at least 2 alternatives are required, found {found}")]
    TooFewAlternatives { found: usize },
    #[error("grade {grade} is outside the 1..9 scale")]
    OutOfScale { grade: i64 },
    #[error("context '{context}': pair '{row}' vs '{col}' was judged twice with different values")]
    ConflictingJudgment {
        context: String,
        row: String,
        col: String,
    },
    #[error("context '{context}': pair '{row}' vs '{col}' has no judgment")]
    MissingPair {
        context: String,
        row: String,
        col: String,
    },
    #[error("context '{context}': '{node}' cannot be compared with itself")]
    SelfComparison { context: String, node: String },
    #[error("context '{context}': index {index} out of range for order {order}")]
    IndexOutOfRange {
        context: String,
        index: usize,
        order: usize,
    },
    #[error("context '{context}' has order {order}; a comparison matrix needs at least 2 elements")]
    OrderTooSmall { context: String, order: usize },
    #[error("unknown comparison context '{context}'")]
    UnknownContext { context: String },
    #[error("context '{context}' has no child named '{node}'")]
    UnknownNode { context: String, node: String },
    #[error("document error: {0}")]
    Document(String),
}

impl ModelError {
    /// Stable identifier of the variant, used in machine-readable error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Self::DuplicateName { .. } => "DuplicateName",
            Self::BlankName => "BlankName",
            Self::OrphanNode { .. } => "OrphanNode",
            Self::EmptyLayer { .. } => "EmptyLayer",
            Self::TooFewAlternatives { .. } => "TooFewAlternatives",
            Self::OutOfScale { .. } => "OutOfScale",
            Self::ConflictingJudgment { .. } => "ConflictingJudgment",
            Self::MissingPair { .. } => "MissingPair",
            Self::SelfComparison { .. } => "SelfComparison",
            Self::IndexOutOfRange { .. } => "IndexOutOfRange",
            Self::OrderTooSmall { .. } => "OrderTooSmall",
            Self::UnknownContext { .. } => "UnknownContext",
            Self::UnknownNode { .. } => "UnknownNode",
            Self::Document(..) => "Document",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionNode {
    pub name: String,
    pub parent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionLayer {
    pub name: String,
    pub nodes: Vec<CriterionNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextKind {
    /// Criteria (or the top layer) compared with respect to their parent.
    Criteria,
    /// The alternatives compared under one leaf criterion.
    Alternatives,
}

/// One parent node and the ordered children compared under it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonContext {
    pub name: String,
    pub kind: ContextKind,
    pub children: Vec<String>,
}

impl ComparisonContext {
    pub fn order(&self) -> usize {
        self.children.len()
    }

    pub fn index_of(&self, child: &str) -> Option<usize> {
        self.children.iter().position(|c| c == child)
    }
}

/// A validated goal → criteria → alternatives tree.
///
/// Every criterion has exactly one parent in the layer above (the goal for
/// the first layer). Criteria without children are leaf criteria; the full
/// alternative set is compared under each of them.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionHierarchy {
    goal: String,
    layers: Vec<CriterionLayer>,
    alternatives: Vec<String>,
    children: BTreeMap<String, Vec<String>>,
}

impl DecisionHierarchy {
    pub fn new(
        goal: impl Into<String>,
        layers: Vec<CriterionLayer>,
        alternatives: Vec<String>,
    ) -> Result<Self, ModelError> {
        let goal = goal.into();
        if alternatives.len() < 2 {
            return Err(ModelError::TooFewAlternatives {
                found: alternatives.len(),
            });
        }
        if layers.is_empty() {
            return Err(ModelError::EmptyLayer {
                layer: "criteria".to_string(),
            });
        }

        let mut seen = HashSet::new();
        let mut claim = |name: &str| -> Result<(), ModelError> {
            if name.trim().is_empty() {
                return Err(ModelError::BlankName);
            }
            if !seen.insert(name.to_string()) {
                return Err(ModelError::DuplicateName {
                    name: name.to_string(),
                });
            }
            Ok(())
        };
        claim(&goal)?;
        for layer in &layers {
            for node in &layer.nodes {
                claim(&node.name)?;
            }
        }
        for alt in &alternatives {
            claim(alt)?;
        }

        let mut children: BTreeMap<String, Vec<String>> = BTreeMap::new();
        children.insert(goal.clone(), Vec::new());
        let mut above: BTreeSet<&str> = BTreeSet::from([goal.as_str()]);
        for layer in &layers {
            if layer.nodes.is_empty() {
                return Err(ModelError::EmptyLayer {
                    layer: layer.name.clone(),
                });
            }
            for node in &layer.nodes {
                if !above.contains(node.parent.as_str()) {
                    return Err(ModelError::OrphanNode {
                        node: node.name.clone(),
                        layer: layer.name.clone(),
                        parent: node.parent.clone(),
                    });
                }
                children
                    .get_mut(&node.parent)
                    .expect("parent registered")
                    .push(node.name.clone());
            }
            for node in &layer.nodes {
                children.insert(node.name.clone(), Vec::new());
            }
            above = layer.nodes.iter().map(|n| n.name.as_str()).collect();
        }

        Ok(Self {
            goal,
            layers,
            alternatives,
            children,
        })
    }

    pub fn goal(&self) -> &str {
        &self.goal
    }

    pub fn layers(&self) -> &[CriterionLayer] {
        &self.layers
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    /// Criterion children of a node (empty for leaf criteria and unknown names).
    pub fn criterion_children(&self, name: &str) -> &[String] {
        self.children.get(name).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_criterion(&self, name: &str) -> bool {
        name != self.goal && self.children.contains_key(name)
    }

    /// Leaf criteria in layer order.
    pub fn leaf_criteria(&self) -> Vec<&str> {
        self.layers
            .iter()
            .flat_map(|l| l.nodes.iter())
            .filter(|n| self.criterion_children(&n.name).is_empty())
            .map(|n| n.name.as_str())
            .collect()
    }

    /// Parent chain from a criterion up to (excluding) the goal, nearest first.
    pub fn ancestors(&self, name: &str) -> Vec<&str> {
        let mut out = Vec::new();
        let mut current = name;
        'outer: loop {
            for layer in &self.layers {
                if let Some(node) = layer.nodes.iter().find(|n| n.name == current) {
                    if node.parent == self.goal {
                        break 'outer;
                    }
                    out.push(node.parent.as_str());
                    current = node.parent.as_str();
                    continue 'outer;
                }
            }
            break;
        }
        out
    }

    /// The top-layer criterion a node descends from (itself if top-layer).
    pub fn top_criterion<'a>(&'a self, name: &'a str) -> &'a str {
        self.ancestors(name).last().copied().unwrap_or(name)
    }

    /// Every comparison context, including single-child ones that need no matrix.
    pub fn all_contexts(&self) -> Vec<ComparisonContext> {
        let mut out = Vec::new();
        out.push(ComparisonContext {
            name: self.goal.clone(),
            kind: ContextKind::Criteria,
            children: self.criterion_children(&self.goal).to_vec(),
        });
        for layer in &self.layers {
            for node in &layer.nodes {
                let kids = self.criterion_children(&node.name);
                if kids.is_empty() {
                    out.push(ComparisonContext {
                        name: node.name.clone(),
                        kind: ContextKind::Alternatives,
                        children: self.alternatives.clone(),
                    });
                } else {
                    out.push(ComparisonContext {
                        name: node.name.clone(),
                        kind: ContextKind::Criteria,
                        children: kids.to_vec(),
                    });
                }
            }
        }
        out
    }

    /// Contexts with at least two children, i.e. the ones that need judgments.
    pub fn required_contexts(&self) -> Vec<ComparisonContext> {
        self.all_contexts()
            .into_iter()
            .filter(|c| c.order() >= 2)
            .collect()
    }

    pub fn context(&self, name: &str) -> Option<ComparisonContext> {
        self.all_contexts().into_iter().find(|c| c.name == name)
    }

    /// A copy without the given criteria (and their subtrees) and alternatives.
    pub fn without(
        &self,
        criteria: &HashSet<String>,
        alternatives: &HashSet<String>,
    ) -> Result<Self, ModelError> {
        let mut dropped: HashSet<&str> = criteria.iter().map(String::as_str).collect();
        let mut layers = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let mut nodes = Vec::new();
            for node in &layer.nodes {
                if dropped.contains(node.name.as_str()) || dropped.contains(node.parent.as_str()) {
                    dropped.insert(node.name.as_str());
                } else {
                    nodes.push(node.clone());
                }
            }
            layers.push(CriterionLayer {
                name: layer.name.clone(),
                nodes,
            });
        }
        // An emptied trailing layer is simply gone; an emptied middle layer is an error.
        while layers.last().is_some_and(|l| l.nodes.is_empty()) && layers.len() > 1 {
            layers.pop();
        }
        let alternatives = self
            .alternatives
            .iter()
            .filter(|a| !alternatives.contains(*a))
            .cloned()
            .collect();
        Self::new(self.goal.clone(), layers, alternatives)
    }

    pub fn to_document(&self, judgments: Vec<JudgmentRecord>) -> HierarchyDocument {
        HierarchyDocument {
            goal: self.goal.clone(),
            layers: self
                .layers
                .iter()
                .map(|l| LayerDocument {
                    name: l.name.clone(),
                    nodes: l
                        .nodes
                        .iter()
                        .map(|n| NodeDocument {
                            name: n.name.clone(),
                            parent: n.parent.clone(),
                        })
                        .collect(),
                })
                .collect(),
            alternatives: self.alternatives.clone(),
            judgments,
        }
    }
}
