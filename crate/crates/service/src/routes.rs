use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::routing::{get, post, put};
use axum::{Json, Router};
use dfx_ahp::catalog::{gap_report, DfxFilter, GapReport};
use dfx_ahp::hierarchy::{HierarchyDocument, Strictness};
use dfx_ahp::presets::{list_bundled, PresetInfo};
use dfx_ahp_api::{
    CatalogResponse, CreateSession, ResultsResponse, SessionCreated, SessionView, SubmitAck, SubmitJudgments,
    WhatIfRequest, WhatIfResponse,
};

use crate::error::ApiError;
use crate::session::ResultsError;
use crate::AppState;

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(|| async { "ok" }))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/judgments", put(submit_judgments))
        .route("/sessions/{id}/results", get(get_results))
        .route("/sessions/{id}/whatif", post(post_whatif))
        .route("/catalog", get(get_catalog))
        .route("/catalog/gaps", get(get_gaps))
        .route("/presets", get(get_presets))
        .with_state(state)
}

/// Runs CPU-bound engine work off the async executor.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| Err(ApiError::BadRequest(format!("worker failed: {e}"))))
}

fn results_error(e: ResultsError) -> ApiError {
    match e {
        ResultsError::Incomplete(pending) => ApiError::ContextsIncomplete(pending),
        ResultsError::Engine(e) => ApiError::Engine(e),
    }
}

async fn create_session(
    State(state): State<AppState>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<SessionCreated>)> {
    let Json(req) = body?;
    let session = blocking(move || match (req.preset, req.document) {
        (Some(name), None) => state.store.create_from_preset(&name, &state.options),
        (None, Some(value)) => {
            let strictness = if req.lenient {
                Strictness::Lenient
            } else {
                Strictness::Strict
            };
            let doc = HierarchyDocument::from_value(value, strictness).map_err(dfx_ahp::EngineError::from)?;
            state.store.create_from_document(doc, &state.options)
        }
        _ => Err(ApiError::BadRequest("give exactly one of 'preset' and 'document'".into())),
    })
    .await?;
    let pending = session.pending().len();
    Ok((
        StatusCode::CREATED,
        Json(SessionCreated {
            meta: session.meta(),
            contexts_total: session.statuses().len(),
            contexts_pending: pending,
        }),
    ))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    let s = state.store.get(&id)?;
    Ok(Json(SessionView {
        meta: s.meta(),
        document: s.model.to_document(),
        contexts: s.statuses(),
    }))
}

async fn submit_judgments(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<SubmitJudgments>, JsonRejection>,
) -> ApiResult<Json<SubmitAck>> {
    let Json(req) = body?;
    let (session, contexts) =
        blocking(move || state.store.commit(&id, req.revision, &req.judgments, &state.options)).await?;
    Ok(Json(SubmitAck {
        revision: session.revision,
        contexts,
    }))
}

async fn get_results(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<ResultsResponse>> {
    let s = state.store.get(&id)?;
    let options = state.options;
    let report = blocking({
        let s = Arc::clone(&s);
        move || s.results(&options).map_err(results_error)
    })
    .await?;
    Ok(Json(ResultsResponse {
        revision: s.revision,
        report,
    }))
}

async fn post_whatif(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<WhatIfRequest>, JsonRejection>,
) -> ApiResult<Json<WhatIfResponse>> {
    let Json(req) = body?;
    let s = state.store.get(&id)?;
    let options = state.options;
    let delta = blocking({
        let s = Arc::clone(&s);
        move || s.what_if(&req.edit, &options).map_err(results_error)
    })
    .await?;
    Ok(Json(WhatIfResponse {
        revision: s.revision,
        delta,
    }))
}

async fn get_catalog(
    State(state): State<AppState>,
    query: Result<Query<Vec<(String, String)>>, QueryRejection>,
) -> ApiResult<Json<CatalogResponse>> {
    let Query(pairs) = query?;
    let filter = DfxFilter::from_pairs(&pairs)?;
    let entries: Vec<_> = state.kb.query(&filter).into_iter().cloned().collect();
    Ok(Json(CatalogResponse {
        version: state.kb.version.clone(),
        count: entries.len(),
        entries,
    }))
}

async fn get_gaps(State(state): State<AppState>) -> Json<GapReport> {
    Json(gap_report(&state.kb))
}

async fn get_presets() -> Json<Vec<PresetInfo>> {
    Json(list_bundled())
}
