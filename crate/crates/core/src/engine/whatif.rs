//! Non-mutating single-judgment sensitivity queries.

use serde::{Deserialize, Serialize};

use super::{solve, solve_context, synthesize, EngineError, EngineOptions, GlobalWeights, Model, Solution};
use crate::hierarchy::{JudgmentRecord, ModelError};
use crate::priority::ConsistencyReport;

use super::synthesis::RankedAlternative;

/// A model with its full solution, treated as an immutable value.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvedModel {
    model: Model,
    solution: Solution,
    options: EngineOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightChange {
    pub alternative: String,
    pub old: f64,
    pub new: f64,
    pub delta: f64,
}

/// Effect of one judgment edit on the final ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingDelta {
    pub context: String,
    /// Consistency of the edited matrix after the edit.
    pub consistency: ConsistencyReport,
    pub old_ranking: Vec<RankedAlternative>,
    pub new_ranking: Vec<RankedAlternative>,
    /// Alternatives whose global weight changed; empty for a no-op edit.
    pub changes: Vec<WeightChange>,
    pub leader_changed: bool,
    pub new_weights: GlobalWeights,
}

impl RankingDelta {
    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }
}

impl SolvedModel {
    pub fn solve(model: Model, options: EngineOptions) -> Result<Self, EngineError> {
        let solution = solve(&model, &options)?;
        Ok(Self {
            model,
            solution,
            options,
        })
    }

    /// Wraps a solution obtained elsewhere. `solution` must be what
    /// [`solve`] returns for `model` under `options`.
    pub fn from_parts(model: Model, solution: Solution, options: EngineOptions) -> Self {
        Self {
            model,
            solution,
            options,
        }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    pub fn options(&self) -> &EngineOptions {
        &self.options
    }

    /// Applies one edit, re-solving only the affected context and re-synthesizing.
    pub fn with_edit(&self, edit: &JudgmentRecord) -> Result<Self, EngineError> {
        let context = self
            .model
            .hierarchy()
            .context(&edit.context)
            .filter(|c| c.order() >= 2)
            .ok_or_else(|| ModelError::UnknownContext {
                context: edit.context.clone(),
            })?;
        let model = self.model.with_judgment(edit.clone())?;
        let updated = solve_context(&model, &context, &self.options)?;
        let mut contexts = self.solution.contexts.clone();
        contexts.insert(context.name.clone(), updated);
        let priorities = contexts
            .iter()
            .map(|(k, v)| (k.clone(), v.priority.clone()))
            .collect();
        let weights = synthesize(model.hierarchy(), &priorities)?;
        Ok(Self {
            model,
            solution: Solution { contexts, weights },
            options: self.options,
        })
    }

    /// What the ranking would become under `edit`; `self` is left untouched.
    pub fn what_if(&self, edit: &JudgmentRecord) -> Result<RankingDelta, EngineError> {
        let next = self.with_edit(edit)?;
        Ok(delta_between(&self.solution, &next.solution, &edit.context))
    }
}

pub(crate) fn delta_between(old: &Solution, new: &Solution, context: &str) -> RankingDelta {
    let ow = &old.weights;
    let nw = &new.weights;
    let changes = ow
        .alternatives
        .iter()
        .zip(ow.alternative_weights.iter().zip(&nw.alternative_weights))
        .filter(|(_, (a, b))| a.to_bits() != b.to_bits())
        .map(|(name, (&a, &b))| WeightChange {
            alternative: name.clone(),
            old: a,
            new: b,
            delta: b - a,
        })
        .collect();
    let old_ranking = ow.ranking();
    let new_ranking = nw.ranking();
    let leader_changed = old_ranking.first().map(|r| &r.name) != new_ranking.first().map(|r| &r.name);
    RankingDelta {
        context: context.to_string(),
        consistency: new.contexts[context].consistency,
        old_ranking,
        new_ranking,
        changes,
        leader_changed,
        new_weights: nw.clone(),
    }
}
