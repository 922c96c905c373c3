//! JSON bodies of the decision service. Field names inside documents and
//! judgments follow the hierarchy document schema.

use dfx_ahp::catalog::DfxEntry;
use dfx_ahp::engine::RankingDelta;
use dfx_ahp::hierarchy::{ContextKind, HierarchyDocument, JudgmentRecord};
use dfx_ahp::priority::ConsistencyReport;
use dfx_ahp::report::SolveReport;
use serde::{Deserialize, Serialize};

/// Shown with every session built from an illustrative preset.
pub const ILLUSTRATIVE_NOTICE: &str = "ILLUSTRATIVE: judgments are invented for demonstration, not measured data";

/// Error payload for every non-2xx response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(default)]
    pub details: serde_json::Value,
}

/// Exactly one of `preset` and `document` must be given.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub document: Option<serde_json::Value>,
    /// Ignore unknown fields in `document` instead of rejecting them.
    #[serde(default)]
    pub lenient: bool,
}

impl CreateSession {
    pub fn preset(name: impl Into<String>) -> Self {
        Self {
            preset: Some(name.into()),
            ..Self::default()
        }
    }

    pub fn document(doc: &HierarchyDocument) -> Self {
        Self {
            document: Some(serde_json::to_value(doc).expect("documents serialize")),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionMeta {
    pub id: String,
    pub revision: u64,
    pub preset: Option<String>,
    pub title: Option<String>,
    pub illustrative: bool,
    pub notice: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContextState {
    /// Some pairs are still unjudged.
    Pending,
    Solved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextStatus {
    pub context: String,
    pub kind: ContextKind,
    pub children: Vec<String>,
    pub status: ContextState,
    pub missing_pairs: Vec<(String, String)>,
    pub priorities: Option<Vec<f64>>,
    pub lambda_max: Option<f64>,
    pub consistency: Option<ConsistencyReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionCreated {
    #[serde(flatten)]
    pub meta: SessionMeta,
    pub contexts_total: usize,
    pub contexts_pending: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    #[serde(flatten)]
    pub meta: SessionMeta,
    pub document: HierarchyDocument,
    pub contexts: Vec<ContextStatus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmitJudgments {
    /// Revision the client last saw; a mismatch is rejected as stale.
    pub revision: u64,
    pub judgments: Vec<JudgmentRecord>,
}

/// Fresh status of every context the submission touched.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmitAck {
    pub revision: u64,
    pub contexts: Vec<ContextStatus>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsResponse {
    pub revision: u64,
    pub report: SolveReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIfRequest {
    pub edit: JudgmentRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfResponse {
    /// Revision the delta was computed against; unchanged by the query.
    pub revision: u64,
    pub delta: RankingDelta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogResponse {
    pub version: String,
    pub count: usize,
    pub entries: Vec<DfxEntry>,
}
