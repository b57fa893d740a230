//! Client for the model service: JSON over HTTP POST on `/classify`, `/qa`
//! and `/embed`. Every response must carry an `X-Model-Version` header.

use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::backend::{Embedder, QaAnswer, QaBackend, ScoreRange, Scorer};
use crate::error::BackendError;
use crate::model::ScoredLabel;

pub const VERSION_HEADER: &str = "X-Model-Version";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyRequest {
    pub text: String,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyResponse {
    pub scores: Vec<ScoredLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<ScoreRange>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaRequest {
    pub context: String,
    pub question: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedRequest {
    pub texts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedResponse {
    pub vectors: Vec<Vec<f32>>,
}

/// Blocking client. Safe to share across threads.
#[derive(Debug)]
pub struct ServiceClient {
    base: String,
    agent: ureq::Agent,
    version: Mutex<Option<String>>,
    range: Mutex<ScoreRange>,
}

impl ServiceClient {
    pub fn new(base_url: &str, timeout: Duration) -> Self {
        ServiceClient {
            base: base_url.trim_end_matches('/').to_string(),
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
            version: Mutex::new(None),
            range: Mutex::new(ScoreRange::UNIT),
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    /// Model version from the most recent response.
    pub fn model_version(&self) -> Option<String> {
        self.version.lock().expect("version lock").clone()
    }

    fn post<T: Serialize, R: for<'de> Deserialize<'de>>(&self, path: &str, body: &T) -> Result<R, BackendError> {
        let url = format!("{}{path}", self.base);
        let resp = match self.agent.post(&url).send_json(body) {
            Ok(r) => r,
            Err(ureq::Error::Status(code, r)) => {
                let msg = r.into_string().unwrap_or_default();
                return Err(if code >= 500 || code == 429 {
                    BackendError::Unavailable(format!("{url}: HTTP {code}: {msg}"))
                } else {
                    BackendError::Other(format!("{url}: HTTP {code}: {msg}"))
                });
            }
            Err(e) => return Err(BackendError::Unavailable(format!("{url}: {e}"))),
        };
        let version = resp
            .header(VERSION_HEADER)
            .map(str::to_string)
            .ok_or_else(|| BackendError::Protocol(format!("{url}: missing {VERSION_HEADER} header")))?;
        *self.version.lock().expect("version lock") = Some(version);
        resp.into_json()
            .map_err(|e| BackendError::Protocol(format!("{url}: bad body: {e}")))
    }

    pub fn classify(&self, text: &str, labels: &[String]) -> Result<Vec<ScoredLabel>, BackendError> {
        if labels.is_empty() {
            return Ok(Vec::new());
        }
        let r: ClassifyResponse = self.post("/classify", &ClassifyRequest { text: text.into(), labels: labels.to_vec() })?;
        if let Some(range) = r.range {
            *self.range.lock().expect("range lock") = range;
        }
        Ok(r.scores)
    }

    pub fn qa(&self, context: &str, question: &str) -> Result<Option<QaAnswer>, BackendError> {
        self.post("/qa", &QaRequest { context: context.into(), question: question.into() })
    }

    pub fn embed_texts(&self, texts: &[&str]) -> Result<Vec<Vec<f32>>, BackendError> {
        let r: EmbedResponse = self.post("/embed", &EmbedRequest { texts: texts.iter().map(|t| t.to_string()).collect() })?;
        if r.vectors.len() != texts.len() {
            return Err(BackendError::Protocol(format!(
                "/embed returned {} vectors for {} texts",
                r.vectors.len(),
                texts.len()
            )));
        }
        if let Some(d) = r.vectors.first().map(Vec::len) {
            if r.vectors.iter().any(|v| v.len() != d) {
                return Err(BackendError::Protocol("/embed vectors differ in length".into()));
            }
        }
        Ok(r.vectors)
    }

    fn tag(&self) -> String {
        format!(
            "service:{}@{}",
            self.base,
            self.model_version().unwrap_or_else(|| "unknown".into())
        )
    }
}

impl Scorer for ServiceClient {
    fn id(&self) -> String {
        self.tag()
    }

    fn range(&self) -> ScoreRange {
        *self.range.lock().expect("range lock")
    }

    fn score(&self, text: &str, labels: &[String]) -> Result<Vec<ScoredLabel>, BackendError> {
        self.classify(text, labels)
    }
}

impl QaBackend for ServiceClient {
    fn id(&self) -> String {
        self.tag()
    }

    fn answer(&self, context: &str, question: &str) -> Result<Option<QaAnswer>, BackendError> {
        self.qa(context, question)
    }
}

impl Embedder for ServiceClient {
    fn id(&self) -> String {
        self.tag()
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f32>>, BackendError> {
        self.embed_texts(texts)
    }
}
