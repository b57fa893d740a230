//! Contracts for the pluggable backends: binary scorers, extractive QA,
//! text embedders, and the sentence/place annotators.
//!
//! Every backend must be shareable across worker threads. Implementations
//! that cannot serve concurrent requests should serialize internally.

use serde::{Deserialize, Serialize};

use crate::error::BackendError;
use crate::model::{ScoredLabel, Span};

/// Declared range of a scorer's output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreRange {
    pub min: f64,
    pub max: f64,
}

impl ScoreRange {
    pub const UNIT: ScoreRange = ScoreRange { min: 0.0, max: 1.0 };

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }
}

/// A bank of binary classifiers, one per label.
pub trait Scorer: Send + Sync {
    /// Identifier and version recorded in event provenance.
    fn id(&self) -> String;

    fn range(&self) -> ScoreRange {
        ScoreRange::UNIT
    }

    /// Score `text` for every label, in label order. The `positive` flag is the
    /// backend's own decision boundary.
    fn score(&self, text: &str, labels: &[String]) -> Result<Vec<ScoredLabel>, BackendError>;
}

/// An answer span with character offsets into the supplied context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaAnswer {
    pub answer_text: String,
    pub char_start: usize,
    pub char_end: usize,
    pub score: f64,
}

/// Extractive question answering.
pub trait QaBackend: Send + Sync {
    fn id(&self) -> String;

    /// `Ok(None)` means the question is unanswerable from `context`.
    fn answer(&self, context: &str, question: &str) -> Result<Option<QaAnswer>, BackendError>;
}

/// Fixed-length text embeddings.
pub trait Embedder: Send + Sync {
    fn id(&self) -> String;

    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f32>>, BackendError>;

    fn embed_one(&self, text: &str) -> Result<Vec<f32>, BackendError> {
        self.embed(&[text])?
            .pop()
            .ok_or_else(|| BackendError::Protocol("embedder returned no vectors".into()))
    }
}

/// A sentence with its byte range and whether its main verb is negated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceInfo {
    pub start: usize,
    pub end: usize,
    pub negated: bool,
}

/// Sentence segmentation plus verb-negation detection.
pub trait NegationAnnotator: Send + Sync {
    fn annotate(&self, text: &str) -> Result<Vec<SentenceInfo>, BackendError>;
}

/// Named-entity tagging restricted to places (geopolitical entities and locations).
pub trait PlaceAnnotator: Send + Sync {
    fn places(&self, text: &str) -> Result<Vec<Span>, BackendError>;
}
