//! Thin async client for the decision service.
//!
//! ```no_run
//! # async fn demo() -> Result<(), dfx_ahp_client::ClientError> {
//! let client = dfx_ahp_client::Client::new("http://127.0.0.1:8080")?;
//! let session = client.create_session(&dfx_ahp_api::CreateSession::preset("demo")).await?;
//! let results = client.results(&session.meta.id).await?;
//! println!("{}", results.report.ranking[0].name);
//! # Ok(())
//! # }
//! ```

use dfx_ahp::catalog::GapReport;
use dfx_ahp::hierarchy::JudgmentRecord;
use dfx_ahp::presets::PresetInfo;
use dfx_ahp_api::{
    CatalogResponse, CreateSession, ErrorBody, ResultsResponse, SessionCreated, SessionView, SubmitAck,
    SubmitJudgments, WhatIfRequest, WhatIfResponse,
};
use reqwest::{Method, RequestBuilder, Url};
use serde::de::DeserializeOwned;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("invalid server URL '{url}': {message}")]
    InvalidUrl { url: String, message: String },
    #[error("request failed: {0}")]
    Transport(#[from] reqwest::Error),
    /// The service answered with an error payload.
    #[error("server returned {status} {}: {}", .body.code, .body.message)]
    Api { status: u16, body: ErrorBody },
}

impl ClientError {
    /// The service's error code, if the service produced the error.
    pub fn code(&self) -> Option<&str> {
        match self {
            Self::Api { body, .. } => Some(&body.code),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Client {
    base: Url,
    http: reqwest::Client,
}

impl Client {
    pub fn new(base: &str) -> Result<Self, ClientError> {
        let mut base = Url::parse(base).map_err(|e| ClientError::InvalidUrl {
            url: base.to_string(),
            message: e.to_string(),
        })?;
        if !base.path().ends_with('/') {
            base.set_path(&format!("{}/", base.path()));
        }
        Ok(Self {
            base,
            http: reqwest::Client::new(),
        })
    }

    fn request(&self, method: Method, path: &str) -> Result<RequestBuilder, ClientError> {
        let url = self.base.join(path).map_err(|e| ClientError::InvalidUrl {
            url: path.to_string(),
            message: e.to_string(),
        })?;
        Ok(self.http.request(method, url))
    }

    async fn send<T: DeserializeOwned>(req: RequestBuilder) -> Result<T, ClientError> {
        let resp = req.send().await?;
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json().await?);
        }
        let text = resp.text().await?;
        let body = serde_json::from_str(&text).unwrap_or_else(|_| ErrorBody {
            code: "Http".into(),
            message: text,
            details: serde_json::Value::Null,
        });
        Err(ClientError::Api {
            status: status.as_u16(),
            body,
        })
    }

    pub async fn health(&self) -> Result<(), ClientError> {
        self.request(Method::GET, "health")?.send().await?.error_for_status()?;
        Ok(())
    }

    pub async fn create_session(&self, req: &CreateSession) -> Result<SessionCreated, ClientError> {
        Self::send(self.request(Method::POST, "sessions")?.json(req)).await
    }

    pub async fn session(&self, id: &str) -> Result<SessionView, ClientError> {
        Self::send(self.request(Method::GET, &format!("sessions/{id}"))?).await
    }

    pub async fn submit(
        &self,
        id: &str,
        revision: u64,
        judgments: Vec<JudgmentRecord>,
    ) -> Result<SubmitAck, ClientError> {
        let body = SubmitJudgments { revision, judgments };
        Self::send(self.request(Method::PUT, &format!("sessions/{id}/judgments"))?.json(&body)).await
    }

    pub async fn results(&self, id: &str) -> Result<ResultsResponse, ClientError> {
        Self::send(self.request(Method::GET, &format!("sessions/{id}/results"))?).await
    }

    pub async fn what_if(&self, id: &str, edit: JudgmentRecord) -> Result<WhatIfResponse, ClientError> {
        let body = WhatIfRequest { edit };
        Self::send(self.request(Method::POST, &format!("sessions/{id}/whatif"))?.json(&body)).await
    }

    /// `filter` takes the same field/value pairs as the catalog query string.
    pub async fn catalog(&self, filter: &[(&str, &str)]) -> Result<CatalogResponse, ClientError> {
        Self::send(self.request(Method::GET, "catalog")?.query(filter)).await
    }

    pub async fn gaps(&self) -> Result<GapReport, ClientError> {
        Self::send(self.request(Method::GET, "catalog/gaps")?).await
    }

    pub async fn presets(&self) -> Result<Vec<PresetInfo>, ClientError> {
        Self::send(self.request(Method::GET, "presets")?).await
    }
}
