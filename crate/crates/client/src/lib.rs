//! Async client for the evaluation service.

use reqwest::StatusCode;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tbm_core::report::{ApiError, BuiltinInfo, NetworkSummary, ObservationDelta, SessionView};
use tbm_core::EvaluationReport;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    /// The observations are in total conflict with the network (409).
    #[error("{}", .0.message)]
    Conflict(Box<ApiError>),
    #[error("server answered {status}: {}", body.message)]
    Api { status: u16, body: Box<ApiError> },
    #[error(transparent)]
    Transport(#[from] reqwest::Error),
}

impl ClientError {
    pub fn api_error(&self) -> Option<&ApiError> {
        match self {
            ClientError::Conflict(body) | ClientError::Api { body, .. } => Some(body),
            ClientError::Transport(_) => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, ClientError>;

#[derive(Clone, Debug)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// `base` is the service root, e.g. `http://127.0.0.1:8080`.
    pub fn new(base: impl Into<String>) -> Self {
        let base = base.into().trim_end_matches('/').to_owned();
        Client { base, http: reqwest::Client::new() }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    pub async fn builtins(&self) -> Result<Vec<BuiltinInfo>> {
        decode(self.http.get(self.url("/builtins")).send().await?).await
    }

    /// Uploads network-file text and opens a session on it.
    pub async fn create_network(&self, text: impl Into<String>) -> Result<NetworkSummary> {
        let req = self.http.post(self.url("/networks")).header("content-type", "text/plain").body(text.into());
        decode(req.send().await?).await
    }

    pub async fn create_builtin(&self, name: &str, mode: Option<&str>) -> Result<NetworkSummary> {
        let mut query = vec![("builtin", name)];
        query.extend(mode.map(|m| ("mode", m)));
        decode(self.http.post(self.url("/networks")).query(&query).send().await?).await
    }

    pub async fn get(&self, id: &str) -> Result<SessionView> {
        decode(self.http.get(self.url(&format!("/networks/{id}"))).send().await?).await
    }

    /// Applies the delta and returns the fresh evaluation.
    pub async fn observe(&self, id: &str, delta: &ObservationDelta) -> Result<EvaluationReport> {
        self.post_json(&format!("/networks/{id}/observations"), delta).await
    }

    fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    async fn post_json<B: Serialize, T: DeserializeOwned>(&self, path: &str, body: &B) -> Result<T> {
        decode(self.http.post(self.url(path)).json(body).send().await?).await
    }
}

async fn decode<T: DeserializeOwned>(resp: reqwest::Response) -> Result<T> {
    let status = resp.status();
    if status.is_success() {
        return Ok(resp.json().await?);
    }
    let text = resp.text().await?;
    let body: Box<ApiError> = serde_json::from_str(&text).unwrap_or_else(|_| Box::new(ApiError::new("http", text)));
    if status == StatusCode::CONFLICT {
        Err(ClientError::Conflict(body))
    } else {
        Err(ClientError::Api { status: status.as_u16(), body })
    }
}
