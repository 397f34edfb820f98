use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ClientError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub method: String,
    pub url: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<String>,
    /// Auth and similar; never part of the fixture key, so recorded fixtures
    /// stay valid when tokens rotate.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub headers: Vec<(String, String)>,
}

impl Request {
    pub fn get(url: impl Into<String>) -> Self {
        Request {
            method: "GET".to_string(),
            url: url.into(),
            body: None,
            headers: Vec::new(),
        }
    }

    pub fn post_json(url: impl Into<String>, body: impl Into<String>) -> Self {
        Request {
            method: "POST".to_string(),
            url: url.into(),
            body: Some(body.into()),
            headers: vec![("content-type".to_string(), "application/json".to_string())],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Response {
    pub status: u16,
    pub body: String,
    /// Seconds, from a 429's retry-after header.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retry_after: Option<u64>,
}

/// Query parameters sort by key (then value), so two spellings of the same
/// request share one fixture.
pub fn normalize_url(url: &str) -> String {
    let Some((base, query)) = url.split_once('?') else {
        return url.to_string();
    };
    let mut params: Vec<&str> = query.split('&').filter(|p| !p.is_empty()).collect();
    params.sort_unstable();
    format!("{base}?{}", params.join("&"))
}

pub fn fixture_key(req: &Request) -> String {
    let mut hasher = Sha256::new();
    hasher.update(req.method.as_bytes());
    hasher.update(b"\n");
    hasher.update(normalize_url(&req.url).as_bytes());
    hasher.update(b"\n");
    hasher.update(req.body.as_deref().unwrap_or("").as_bytes());
    let digest = hasher.finalize();
    let mut key = String::with_capacity(16);
    for byte in &digest[..8] {
        key.push_str(&format!("{byte:02x}"));
    }
    key
}

pub trait Transport {
    fn execute(&self, req: &Request) -> Result<Response, ClientError>;
}

#[derive(Serialize, Deserialize)]
struct FixtureFile {
    request: Request,
    response: Response,
}

/// Serves responses from a fixture directory and never opens a socket.
pub struct ReplayTransport {
    dir: PathBuf,
}

impl ReplayTransport {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ReplayTransport { dir: dir.into() }
    }
}

impl Transport for ReplayTransport {
    fn execute(&self, req: &Request) -> Result<Response, ClientError> {
        let key = fixture_key(req);
        let path = self.dir.join(format!("{key}.json"));
        let text = fs::read_to_string(&path).map_err(|_| ClientError::FixtureMissing {
            key,
            url: req.url.clone(),
        })?;
        let fixture: FixtureFile = serde_json::from_str(&text)
            .map_err(|e| ClientError::MalformedResponse(format!("fixture {path:?}: {e}")))?;
        Ok(fixture.response)
    }
}

/// Delegates to an inner transport and writes each exchange down as a fixture.
pub struct RecordTransport<T> {
    dir: PathBuf,
    inner: T,
}

impl<T: Transport> RecordTransport<T> {
    pub fn new(dir: impl Into<PathBuf>, inner: T) -> Self {
        RecordTransport {
            dir: dir.into(),
            inner,
        }
    }
}

impl<T: Transport> Transport for RecordTransport<T> {
    fn execute(&self, req: &Request) -> Result<Response, ClientError> {
        let response = self.inner.execute(req)?;
        write_fixture(&self.dir, req, &response)?;
        Ok(response)
    }
}

/// Fixture files are sorted-key JSON, one per request hash.
pub fn write_fixture(
    dir: &std::path::Path,
    req: &Request,
    resp: &Response,
) -> Result<PathBuf, ClientError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.json", fixture_key(req)));
    let fixture = FixtureFile {
        request: req.clone(),
        response: resp.clone(),
    };
    let value = serde_json::to_value(&fixture).expect("fixtures serialize");
    fs::write(&path, format!("{value}\n"))?;
    Ok(path)
}

#[cfg(feature = "live")]
pub use live::LiveTransport;

#[cfg(feature = "live")]
mod live {
    use std::time::Duration;

    use super::{Request, Response, Transport};
    use crate::ClientError;

    pub struct LiveTransport {
        client: reqwest::blocking::Client,
    }

    impl LiveTransport {
        pub fn new(timeout_secs: u64) -> Result<Self, ClientError> {
            let client = reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(timeout_secs))
                .build()
                .map_err(|e| ClientError::Network(e.to_string()))?;
            Ok(LiveTransport { client })
        }
    }

    impl Transport for LiveTransport {
        fn execute(&self, req: &Request) -> Result<Response, ClientError> {
            let mut builder = match req.method.as_str() {
                "GET" => self.client.get(&req.url),
                "POST" => self.client.post(&req.url),
                other => {
                    return Err(ClientError::Network(format!(
                        "unsupported method {other}"
                    )))
                }
            };
            for (name, value) in &req.headers {
                builder = builder.header(name, value);
            }
            if let Some(body) = &req.body {
                builder = builder.body(body.clone());
            }
            let resp = builder
                .send()
                .map_err(|e| ClientError::Network(e.to_string()))?;
            let status = resp.status().as_u16();
            let retry_after = resp
                .headers()
                .get("retry-after")
                .and_then(|v| v.to_str().ok())
                .and_then(|v| v.parse().ok());
            let body = resp
                .text()
                .map_err(|e| ClientError::Network(e.to_string()))?;
            Ok(Response {
                status,
                body,
                retry_after,
            })
        }
    }
}
