//! Solving a whole hierarchy: per-context priorities, synthesis into global
//! weights, pruning with re-solve, and single-judgment what-if queries.

mod prune;
mod synthesis;
mod whatif;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hierarchy::{
    ComparisonContext, ComparisonMatrix, Completion, DecisionHierarchy, HierarchyDocument, Intensity,
    JudgmentRecord, ModelError,
};
use crate::priority::{
    consistency, principal_eigenvector, ConsistencyReport, PriorityError, PriorityResult, RandomIndex,
    SolverOptions,
};

pub use prune::{prune, rerun_after_prune, Eliminated, PruneError, PruneOutcome, PrunePolicy};
pub use synthesis::{synthesize, GlobalWeights, NodeWeight, RankedAlternative, SynthesisError, TopLevelBreakdown};
pub use whatif::{RankingDelta, SolvedModel, WeightChange};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("context '{context}': {source}")]
    Priority {
        context: String,
        #[source]
        source: PriorityError,
    },
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Prune(#[from] PruneError),
}

impl EngineError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::Model(e) => e.code(),
            Self::Priority { source, .. } => source.code(),
            Self::Synthesis(e) => e.code(),
            Self::Prune(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EngineOptions {
    pub solver: SolverOptions,
    pub random_index: RandomIndex,
    pub completion: Completion,
}

/// A hierarchy plus the judgments recorded against it.
///
/// Judgments are checked for addressing (context, node names, scale) on
/// construction; completeness and conflicts surface when a matrix is built.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    hierarchy: DecisionHierarchy,
    judgments: Vec<JudgmentRecord>,
}

impl Model {
    pub fn new(hierarchy: DecisionHierarchy, judgments: Vec<JudgmentRecord>) -> Result<Self, ModelError> {
        let contexts: BTreeMap<String, ComparisonContext> = hierarchy
            .required_contexts()
            .into_iter()
            .map(|c| (c.name.clone(), c))
            .collect();
        for j in &judgments {
            check_record(&contexts, j)?;
        }
        Ok(Self {
            hierarchy,
            judgments,
        })
    }

    pub fn from_document(doc: &HierarchyDocument) -> Result<Self, ModelError> {
        Self::new(doc.hierarchy()?, doc.judgments.clone())
    }

    pub fn hierarchy(&self) -> &DecisionHierarchy {
        &self.hierarchy
    }

    pub fn judgments(&self) -> &[JudgmentRecord] {
        &self.judgments
    }

    pub fn to_document(&self) -> HierarchyDocument {
        self.hierarchy.to_document(self.judgments.clone())
    }

    /// Judgments of one context as index triples.
    pub fn indexed_judgments(
        &self,
        context: &ComparisonContext,
    ) -> Result<Vec<(usize, usize, Intensity)>, ModelError> {
        self.judgments
            .iter()
            .filter(|j| j.context == context.name)
            .map(|j| {
                let row = context.index_of(&j.row).ok_or_else(|| ModelError::UnknownNode {
                    context: context.name.clone(),
                    node: j.row.clone(),
                })?;
                let col = context.index_of(&j.col).ok_or_else(|| ModelError::UnknownNode {
                    context: context.name.clone(),
                    node: j.col.clone(),
                })?;
                Ok((row, col, j.intensity()?))
            })
            .collect()
    }

    pub fn matrix(&self, context: &ComparisonContext, completion: Completion) -> Result<ComparisonMatrix, ModelError> {
        let judged = self.indexed_judgments(context)?;
        ComparisonMatrix::from_judgments(context.name.clone(), context.children.clone(), &judged, completion)
    }

    /// Unordered pairs of a context that have no judgment yet.
    pub fn missing_pairs(&self, context: &ComparisonContext) -> Vec<(String, String)> {
        let n = context.order();
        let mut judged = vec![false; n * n];
        for j in self.judgments.iter().filter(|j| j.context == context.name) {
            if let (Some(r), Some(c)) = (context.index_of(&j.row), context.index_of(&j.col)) {
                judged[r * n + c] = true;
                judged[c * n + r] = true;
            }
        }
        let mut out = Vec::new();
        for i in 0..n {
            for k in i + 1..n {
                if !judged[i * n + k] {
                    out.push((context.children[i].clone(), context.children[k].clone()));
                }
            }
        }
        out
    }

    /// A copy where `record` replaces any judgment on the same cell.
    pub fn with_judgment(&self, record: JudgmentRecord) -> Result<Self, ModelError> {
        let context = self
            .hierarchy
            .context(&record.context)
            .filter(|c| c.order() >= 2)
            .ok_or_else(|| ModelError::UnknownContext {
                context: record.context.clone(),
            })?;
        check_record(&BTreeMap::from([(context.name.clone(), context)]), &record)?;
        let mut judgments = Vec::with_capacity(self.judgments.len() + 1);
        let mut placed = false;
        for j in &self.judgments {
            if j.same_cell(&record) {
                if !placed {
                    judgments.push(record.clone());
                    placed = true;
                }
            } else {
                judgments.push(j.clone());
            }
        }
        if !placed {
            judgments.push(record);
        }
        Ok(Self {
            hierarchy: self.hierarchy.clone(),
            judgments,
        })
    }
}

fn check_record(contexts: &BTreeMap<String, ComparisonContext>, j: &JudgmentRecord) -> Result<(), ModelError> {
    let ctx = contexts.get(&j.context).ok_or_else(|| ModelError::UnknownContext {
        context: j.context.clone(),
    })?;
    for node in [&j.row, &j.col] {
        if ctx.index_of(node).is_none() {
            return Err(ModelError::UnknownNode {
                context: j.context.clone(),
                node: node.clone(),
            });
        }
    }
    if j.row == j.col {
        return Err(ModelError::SelfComparison {
            context: j.context.clone(),
            node: j.row.clone(),
        });
    }
    j.intensity()?;
    Ok(())
}

/// Matrix, priorities and consistency for one context.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextSolution {
    pub context: ComparisonContext,
    pub matrix: ComparisonMatrix,
    pub priority: PriorityResult,
    pub consistency: ConsistencyReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub contexts: BTreeMap<String, ContextSolution>,
    pub weights: GlobalWeights,
}

impl Solution {
    pub fn priorities(&self) -> BTreeMap<String, PriorityResult> {
        self.contexts
            .iter()
            .map(|(k, v)| (k.clone(), v.priority.clone()))
            .collect()
    }

    pub fn all_consistent(&self) -> bool {
        self.contexts.values().all(|c| c.consistency.pass)
    }

    /// Contexts whose consistency ratio is at or above the threshold.
    pub fn failing_contexts(&self) -> Vec<&str> {
        self.contexts
            .values()
            .filter(|c| !c.consistency.pass)
            .map(|c| c.context.name.as_str())
            .collect()
    }
}

pub fn solve_context(
    model: &Model,
    context: &ComparisonContext,
    options: &EngineOptions,
) -> Result<ContextSolution, EngineError> {
    let matrix = model.matrix(context, options.completion)?;
    let wrap = |source| EngineError::Priority {
        context: context.name.clone(),
        source,
    };
    let priority = principal_eigenvector(&matrix, &options.solver).map_err(wrap)?;
    let consistency = consistency(&matrix, &priority, &options.random_index).map_err(wrap)?;
    Ok(ContextSolution {
        context: context.clone(),
        matrix,
        priority,
        consistency,
    })
}

/// Solves every required context (in parallel) and synthesizes global weights.
pub fn solve(model: &Model, options: &EngineOptions) -> Result<Solution, EngineError> {
    let contexts = model.hierarchy().required_contexts();
    let solved: Vec<ContextSolution> = contexts
        .par_iter()
        .map(|c| solve_context(model, c, options))
        .collect::<Result<_, _>>()?;
    let contexts: BTreeMap<String, ContextSolution> = solved
        .into_iter()
        .map(|s| (s.context.name.clone(), s))
        .collect();
    assemble(model, contexts)
}

/// Synthesizes already-solved contexts, e.g. ones cached between edits.
pub fn assemble(model: &Model, contexts: BTreeMap<String, ContextSolution>) -> Result<Solution, EngineError> {
    let priorities = contexts
        .iter()
        .map(|(k, v)| (k.clone(), v.priority.clone()))
        .collect();
    let weights = synthesize(model.hierarchy(), &priorities)?;
    Ok(Solution { contexts, weights })
}
