//! HTTP/JSON decision service: judgment sessions with live consistency
//! feedback, results, what-if queries and catalog lookups.
//!
//! | Method | Path | |
//! |---|---|---|
//! | POST | `/sessions` | create from a preset or a hierarchy document |
//! | GET | `/sessions/{id}` | document, revision and per-context status |
//! | PUT | `/sessions/{id}/judgments` | submit judgments against a revision |
//! | GET | `/sessions/{id}/results` | global weights and consistency |
//! | POST | `/sessions/{id}/whatif` | ranking delta for one edit, without applying it |
//! | GET | `/catalog` | DfX entries, filtered by query parameters |
//! | GET | `/catalog/gaps` | strategies without an applicable DfX |
//! | GET | `/presets` | bundled presets |

mod error;
mod journal;
mod routes;
mod session;
mod store;

use std::sync::Arc;

use dfx_ahp::catalog::KnowledgeBase;
use dfx_ahp::EngineOptions;
use tokio::net::TcpListener;

pub use error::ApiError;
pub use journal::{Event, Journal};
pub use routes::router;
pub use session::{CacheEntry, Origin, ResultsError, Session};
pub use store::SessionStore;

#[derive(Debug, Clone)]
pub struct AppState {
    pub store: Arc<SessionStore>,
    pub kb: Arc<KnowledgeBase>,
    pub options: EngineOptions,
}

impl AppState {
    pub fn new(kb: KnowledgeBase, store: SessionStore, options: EngineOptions) -> Self {
        Self {
            store: Arc::new(store),
            kb: Arc::new(kb),
            options,
        }
    }

    /// Bundled knowledge base, no journal, default engine options.
    pub fn in_memory() -> Self {
        Self::new(KnowledgeBase::bundled(), SessionStore::in_memory(), EngineOptions::default())
    }
}

/// Serves until ctrl-c.
pub async fn serve(listener: TcpListener, state: AppState) -> std::io::Result<()> {
    serve_until(listener, state, async {
        let _ = tokio::signal::ctrl_c().await;
    })
    .await
}

/// Serves until `shutdown` resolves, then drains open connections.
pub async fn serve_until(
    listener: TcpListener,
    state: AppState,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "decision service listening");
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await
}
