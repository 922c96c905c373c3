//! Session state: a model, its revision and a per-context solve cache.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use dfx_ahp::engine::{assemble, solve_context, ContextSolution, RankingDelta};
use dfx_ahp::hierarchy::{ComparisonContext, JudgmentRecord};
use dfx_ahp::report::SolveReport;
use dfx_ahp::{EngineError, EngineOptions, Model, SolvedModel};
use dfx_ahp_api::{ContextState, ContextStatus, SessionMeta, ILLUSTRATIVE_NOTICE};
use rayon::prelude::*;
use uuid::Uuid;

#[derive(Debug, Clone, PartialEq)]
pub enum CacheEntry {
    Pending {
        context: ComparisonContext,
        missing: Vec<(String, String)>,
    },
    Solved(ContextSolution),
}

impl CacheEntry {
    fn status(&self) -> ContextStatus {
        match self {
            Self::Pending { context, missing } => ContextStatus {
                context: context.name.clone(),
                kind: context.kind,
                children: context.children.clone(),
                status: ContextState::Pending,
                missing_pairs: missing.clone(),
                priorities: None,
                lambda_max: None,
                consistency: None,
            },
            Self::Solved(s) => ContextStatus {
                context: s.context.name.clone(),
                kind: s.context.kind,
                children: s.context.children.clone(),
                status: ContextState::Solved,
                missing_pairs: Vec::new(),
                priorities: Some(s.priority.priorities.clone()),
                lambda_max: Some(s.priority.lambda_max),
                consistency: Some(s.consistency),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Origin {
    pub preset: Option<String>,
    pub title: Option<String>,
    pub illustrative: bool,
}

/// An immutable snapshot; edits produce a new session with a higher revision.
#[derive(Debug, Clone)]
pub struct Session {
    pub id: Uuid,
    pub revision: u64,
    pub origin: Origin,
    pub model: Model,
    /// In hierarchy order.
    order: Vec<String>,
    cache: BTreeMap<String, Arc<CacheEntry>>,
}

/// Why results cannot be produced yet.
#[derive(Debug)]
pub enum ResultsError {
    Incomplete(Vec<ContextStatus>),
    Engine(EngineError),
}

fn compute(model: &Model, context: &ComparisonContext, options: &EngineOptions) -> Result<CacheEntry, EngineError> {
    let missing = model.missing_pairs(context);
    if missing.is_empty() || options.completion == dfx_ahp::hierarchy::Completion::Lenient {
        match solve_context(model, context, options) {
            Ok(s) => return Ok(CacheEntry::Solved(s)),
            Err(EngineError::Model(dfx_ahp::hierarchy::ModelError::MissingPair { .. })) => {}
            Err(e) => return Err(e),
        }
    }
    // still reject conflicting judgments in unfinished contexts
    match model.matrix(context, dfx_ahp::hierarchy::Completion::Lenient) {
        Ok(_) | Err(dfx_ahp::hierarchy::ModelError::MissingPair { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    Ok(CacheEntry::Pending {
        context: context.clone(),
        missing,
    })
}

impl Session {
    pub fn new(id: Uuid, origin: Origin, model: Model, options: &EngineOptions) -> Result<Self, EngineError> {
        let contexts = model.hierarchy().required_contexts();
        let entries: Vec<CacheEntry> = contexts
            .par_iter()
            .map(|c| compute(&model, c, options))
            .collect::<Result<_, _>>()?;
        let order: Vec<String> = contexts.iter().map(|c| c.name.clone()).collect();
        let cache = order.iter().cloned().zip(entries.into_iter().map(Arc::new)).collect();
        Ok(Self {
            id,
            revision: 0,
            origin,
            model,
            order,
            cache,
        })
    }

    pub fn meta(&self) -> SessionMeta {
        SessionMeta {
            id: self.id.to_string(),
            revision: self.revision,
            preset: self.origin.preset.clone(),
            title: self.origin.title.clone(),
            illustrative: self.origin.illustrative,
            notice: self.origin.illustrative.then(|| ILLUSTRATIVE_NOTICE.to_string()),
        }
    }

    pub fn statuses(&self) -> Vec<ContextStatus> {
        self.order.iter().map(|c| self.cache[c].status()).collect()
    }

    pub fn pending(&self) -> Vec<ContextStatus> {
        self.order
            .iter()
            .filter(|c| matches!(*self.cache[*c], CacheEntry::Pending { .. }))
            .map(|c| self.cache[c].status())
            .collect()
    }

    /// Applies judgments in order, re-solving only the contexts they touch.
    pub fn apply(
        &self,
        judgments: &[JudgmentRecord],
        options: &EngineOptions,
    ) -> Result<(Self, Vec<ContextStatus>), EngineError> {
        let mut model = self.model.clone();
        let mut touched = BTreeSet::new();
        for j in judgments {
            model = model.with_judgment(j.clone())?;
            touched.insert(j.context.clone());
        }
        let mut cache = self.cache.clone();
        let mut statuses = Vec::new();
        for name in self.order.iter().filter(|c| touched.contains(*c)) {
            let context = model.hierarchy().context(name).expect("validated by with_judgment");
            let entry = compute(&model, &context, options)?;
            statuses.push(entry.status());
            cache.insert(name.clone(), Arc::new(entry));
        }
        Ok((
            Self {
                id: self.id,
                revision: self.revision + 1,
                origin: self.origin.clone(),
                model,
                order: self.order.clone(),
                cache,
            },
            statuses,
        ))
    }

    fn solved(&self, options: &EngineOptions) -> Result<SolvedModel, ResultsError> {
        let pending = self.pending();
        if !pending.is_empty() {
            return Err(ResultsError::Incomplete(pending));
        }
        let contexts = self
            .cache
            .iter()
            .map(|(k, v)| match &**v {
                CacheEntry::Solved(s) => (k.clone(), s.clone()),
                CacheEntry::Pending { .. } => unreachable!("checked above"),
            })
            .collect();
        let solution = assemble(&self.model, contexts).map_err(ResultsError::Engine)?;
        Ok(SolvedModel::from_parts(self.model.clone(), solution, *options))
    }

    pub fn results(&self, options: &EngineOptions) -> Result<SolveReport, ResultsError> {
        let solved = self.solved(options)?;
        Ok(SolveReport::new(solved.model(), solved.solution()))
    }

    pub fn what_if(&self, edit: &JudgmentRecord, options: &EngineOptions) -> Result<RankingDelta, ResultsError> {
        self.solved(options)?.what_if(edit).map_err(ResultsError::Engine)
    }
}
