use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use dfx_ahp::catalog::CatalogError;
use dfx_ahp::presets::PresetError;
use dfx_ahp::EngineError;
use dfx_ahp_api::{ContextStatus, ErrorBody};
use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum ApiError {
    #[error("unknown session '{0}'")]
    UnknownSession(String),
    #[error("revision {given} is stale; the session is at revision {current}")]
    StaleRevision { given: u64, current: u64 },
    #[error("{} comparison contexts still have unjudged pairs", .0.len())]
    ContextsIncomplete(Vec<ContextStatus>),
    #[error("{0}")]
    BadRequest(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Preset(#[from] PresetError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("journal write failed: {0}")]
    Journal(String),
}

impl ApiError {
    fn parts(&self) -> (StatusCode, &'static str, serde_json::Value) {
        match self {
            Self::UnknownSession(id) => (StatusCode::NOT_FOUND, "UnknownSession", json!({ "id": id })),
            Self::StaleRevision { given, current } => (
                StatusCode::CONFLICT,
                "StaleRevision",
                json!({ "given": given, "current": current }),
            ),
            Self::ContextsIncomplete(pending) => (
                StatusCode::CONFLICT,
                "ContextsIncomplete",
                json!({ "contexts": pending.iter().map(|c| json!({
                    "context": c.context,
                    "missing_pairs": c.missing_pairs,
                })).collect::<Vec<_>>() }),
            ),
            Self::BadRequest(_) => (StatusCode::BAD_REQUEST, "BadRequest", json!(null)),
            Self::Engine(e) => (StatusCode::UNPROCESSABLE_ENTITY, e.code(), json!(null)),
            Self::Preset(e @ PresetError::UnknownPreset { available, .. }) => {
                (StatusCode::NOT_FOUND, e.code(), json!({ "available": available }))
            }
            Self::Preset(e) => (StatusCode::UNPROCESSABLE_ENTITY, e.code(), json!(null)),
            Self::Catalog(e @ (CatalogError::UnknownFilterField { .. } | CatalogError::InvalidFilterValue { .. })) => {
                (StatusCode::BAD_REQUEST, e.code(), json!(null))
            }
            Self::Catalog(e) => (StatusCode::INTERNAL_SERVER_ERROR, e.code(), json!(null)),
            Self::Journal(_) => (StatusCode::INTERNAL_SERVER_ERROR, "JournalWrite", json!(null)),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, code, details) = self.parts();
        let body = ErrorBody {
            code: code.to_string(),
            message: self.to_string(),
            details,
        };
        (status, Json(body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> Self {
        Self::BadRequest(r.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> Self {
        Self::BadRequest(r.body_text())
    }
}

impl From<dfx_ahp::hierarchy::ModelError> for ApiError {
    fn from(e: dfx_ahp::hierarchy::ModelError) -> Self {
        Self::Engine(e.into())
    }
}
