//! Retrieval clients for protein sequences, known-drug structures, and
//! external property/affinity prediction.
//!
//! Every client speaks through a [`Transport`]; tests and offline pipelines
//! inject [`ReplayTransport`], which serves canned fixtures and cannot open a
//! socket. Live HTTP exists behind the `live` feature and an explicit opt-in.

mod chembl;
mod predict;
mod transport;
mod uniprot;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::chembl::{drug_request, ChemblClient, DrugRecord};
pub use crate::predict::{
    affinity_request, properties_request, AffinityClient, Prediction, PredictionClient,
};
pub use crate::transport::{
    fixture_key, normalize_url, write_fixture, ReplayTransport, RecordTransport, Request,
    Response, Transport,
};
pub use crate::uniprot::{protein_request, validate_fasta, ProteinRecord, UniProtClient};

#[cfg(feature = "live")]
pub use crate::transport::LiveTransport;

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what} not found")]
    NotFound { what: String },
    #[error("name {name:?} matches several records: {candidates:?}")]
    AmbiguousName {
        name: String,
        candidates: Vec<String>,
    },
    #[error("network failure: {0}")]
    Network(String),
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("response missing required property {property}")]
    SchemaError { property: String },
    #[error("rate limited, retry-after {retry_after:?}s")]
    RateLimited { retry_after: Option<u64> },
    #[error("no fixture {key} for {url}")]
    FixtureMissing { key: String, url: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    /// Cap on honored retry-after waits.
    pub max_backoff_secs: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            max_backoff_secs: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EndpointConfig {
    pub uniprot_base: String,
    pub chembl_base: String,
    pub predict_url: String,
    pub affinity_url: String,
    /// Name of the environment variable holding a bearer token, if any.
    pub token_env: Option<String>,
    pub timeout_secs: u64,
    pub retry: RetryPolicy,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            uniprot_base: "https://rest.uniprot.org".to_string(),
            chembl_base: "https://www.ebi.ac.uk".to_string(),
            predict_url: "http://localhost:8701/predict".to_string(),
            affinity_url: "http://localhost:8702/affinity".to_string(),
            token_env: None,
            timeout_secs: 30,
            retry: RetryPolicy::default(),
        }
    }
}

impl EndpointConfig {
    pub fn auth_headers(&self) -> Vec<(String, String)> {
        self.token_env
            .as_deref()
            .and_then(|name| std::env::var(name).ok())
            .map(|token| vec![("authorization".to_string(), format!("Bearer {token}"))])
            .unwrap_or_default()
    }
}

/// Runs a request with 429 handling: waits out retry-after (capped) while
/// attempts remain, then surfaces RateLimited. Other non-2xx map to Network.
pub fn execute_with_policy(
    transport: &dyn Transport,
    req: &Request,
    retry: &RetryPolicy,
) -> Result<Response, ClientError> {
    let attempts = retry.max_attempts.max(1);
    for attempt in 1..=attempts {
        let resp = transport.execute(req)?;
        if resp.status == 429 {
            if attempt == attempts {
                return Err(ClientError::RateLimited {
                    retry_after: resp.retry_after,
                });
            }
            let wait = resp.retry_after.unwrap_or(1).min(retry.max_backoff_secs);
            std::thread::sleep(Duration::from_secs(wait));
            continue;
        }
        if resp.status >= 400 {
            return Err(ClientError::Network(format!(
                "HTTP {} from {}",
                resp.status, req.url
            )));
        }
        return Ok(resp);
    }
    unreachable!("loop always returns")
}
