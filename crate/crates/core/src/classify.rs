//! Label scoring, percentile calibration, thresholding, keyword post-filter,
//! consensus-model selection, and uncertainty sampling.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::backend::Scorer;
use crate::error::{read_file, BackendError, Error, Result};
use crate::lexicon::TermLists;
use crate::model::{Namespace, ScoredLabel};
use crate::text;

/// A scorer bound to the labels of one namespace.
#[derive(Clone)]
pub struct ScorerSet {
    pub namespace: Namespace,
    pub labels: Vec<String>,
    pub backend: Arc<dyn Scorer>,
}

impl ScorerSet {
    pub fn new(namespace: Namespace, labels: Vec<String>, backend: Arc<dyn Scorer>) -> Self {
        ScorerSet {
            namespace,
            labels,
            backend,
        }
    }

    pub fn version(&self) -> String {
        self.backend.id()
    }
}

/// Score `coded_text` for every label of the set. Responses that do not line
/// up with the requested labels, or carry non-finite scores, are protocol
/// errors.
pub fn score_labels(coded_text: &str, scorers: &ScorerSet) -> Result<Vec<ScoredLabel>, BackendError> {
    score_with(coded_text, &scorers.labels, scorers.backend.as_ref())
}

pub(crate) fn score_with(
    text: &str,
    labels: &[String],
    backend: &dyn Scorer,
) -> Result<Vec<ScoredLabel>, BackendError> {
    if labels.is_empty() {
        return Ok(Vec::new());
    }
    let out = backend.score(text, labels)?;
    if out.len() != labels.len() || out.iter().zip(labels).any(|(s, l)| &s.label != l) {
        return Err(BackendError::Protocol(format!(
            "{}: response labels do not match request",
            backend.id()
        )));
    }
    if let Some(bad) = out.iter().find(|s| !s.score.is_finite()) {
        return Err(BackendError::Protocol(format!(
            "{}: non-finite score for {}",
            backend.id(),
            bad.label
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationParams {
    /// Percentile in [0, 100].
    pub percentile: f64,
    /// Labels with fewer positive scores stay uncalibrated.
    pub min_sample: usize,
}

impl Default for CalibrationParams {
    fn default() -> Self {
        CalibrationParams {
            percentile: 90.0,
            min_sample: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelCutoff {
    pub label: String,
    /// `None` when the sample was too small; the backend's own decision is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    pub percentile: f64,
    pub sample_size: usize,
}

/// Per-label score cutoffs. Persisted as TOML (`[[label]]` array).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CalibrationTable {
    entries: BTreeMap<String, LabelCutoff>,
}

#[derive(Serialize, Deserialize)]
struct CalibrationFile {
    #[serde(default)]
    label: Vec<LabelCutoff>,
}

impl CalibrationTable {
    pub fn get(&self, label: &str) -> Option<&LabelCutoff> {
        self.entries.get(label)
    }

    /// Cutoff for `label`, if calibrated.
    pub fn cutoff(&self, label: &str) -> Option<f64> {
        self.entries.get(label).and_then(|e| e.cutoff)
    }

    pub fn insert(&mut self, entry: LabelCutoff) {
        self.entries.insert(entry.label.clone(), entry);
    }

    pub fn entries(&self) -> impl Iterator<Item = &LabelCutoff> {
        self.entries.values()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_toml(&self) -> String {
        let f = CalibrationFile {
            label: self.entries.values().cloned().collect(),
        };
        toml::to_string(&f).expect("calibration serializes")
    }

    pub fn from_toml(src: &str) -> Result<Self> {
        let f: CalibrationFile =
            toml::from_str(src).map_err(|e| Error::Parse(format!("calibration: {e}")))?;
        let mut t = CalibrationTable::default();
        for e in f.label {
            if e.cutoff.is_some_and(|c| !c.is_finite()) {
                return Err(Error::Parse(format!("calibration: bad cutoff for {}", e.label)));
            }
            t.insert(e);
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read_file(path)?)
    }
}

/// Nearest-rank percentile of an ascending-sorted, nonempty slice:
/// the element at rank `ceil(p/100 * n)` (1-based, clamped to [1, n]).
pub fn nearest_rank(sorted: &[f64], percentile: f64) -> f64 {
    assert!(!sorted.is_empty(), "nearest_rank of empty sample");
    let n = sorted.len();
    // guard against 0.9 * 100 = 90.00000000000001
    let x = percentile * n as f64 / 100.0;
    let rank = ((x - 1e-9).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

/// Build per-label cutoffs from samples of positive scores.
pub fn calibrate(
    sample_scores: &BTreeMap<String, Vec<f64>>,
    params: CalibrationParams,
) -> Result<CalibrationTable> {
    if !(0.0..=100.0).contains(&params.percentile) {
        return Err(Error::Invalid(format!(
            "percentile {} outside [0, 100]",
            params.percentile
        )));
    }
    let mut table = CalibrationTable::default();
    for (label, scores) in sample_scores {
        let mut sorted: Vec<f64> = scores.iter().copied().filter(|s| s.is_finite()).collect();
        sorted.sort_by(f64::total_cmp);
        let cutoff = (!sorted.is_empty() && sorted.len() >= params.min_sample.max(1))
            .then(|| nearest_rank(&sorted, params.percentile));
        table.insert(LabelCutoff {
            label: label.clone(),
            cutoff,
            percentile: params.percentile,
            sample_size: sorted.len(),
        });
    }
    Ok(table)
}

/// Result of thresholding: what is reported, and every backend-positive label
/// retained for storage.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Thresholded {
    pub reported: Vec<ScoredLabel>,
    pub stored: Vec<ScoredLabel>,
}

/// Keep labels scoring at or above their cutoff. Labels without a calibrated
/// cutoff fall back to the backend's decision.
pub fn apply_threshold(labels: &[ScoredLabel], calib: &CalibrationTable) -> Thresholded {
    let reported = labels
        .iter()
        .filter(|l| match calib.cutoff(&l.label) {
            Some(c) => l.score >= c,
            None => l.positive,
        })
        .cloned()
        .collect();
    let stored = labels.iter().filter(|l| l.positive).cloned().collect();
    Thresholded { reported, stored }
}

/// Per-label keyword lists used to veto over-assigned labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeywordFilter(pub TermLists);

impl KeywordFilter {
    pub fn parse(src: &str) -> Result<Self> {
        TermLists::parse(src).map(KeywordFilter)
    }

    pub fn load(path: &Path) -> Result<Self> {
        TermLists::load(path).map(KeywordFilter)
    }
}

/// Drop labels that have a keyword list none of whose entries occurs in
/// `text` (case-folded, whole-token). Labels without a list pass through.
pub fn keyword_postfilter(labels: &[ScoredLabel], text: &str, kf: &KeywordFilter) -> Vec<ScoredLabel> {
    let folded = text::folded_tokens(text);
    labels
        .iter()
        .filter(|l| kf.0.matches(&l.label, &folded).unwrap_or(true))
        .cloned()
        .collect()
}

/// Index of the model whose decisions are closest (Hamming) to the ensemble
/// majority vote. Majority ties count as positive; distance ties go to the
/// lowest index.
///
/// # Panics
/// If `assignments` is empty or ragged.
pub fn select_consensus_model(assignments: &[Vec<bool>]) -> usize {
    assert!(!assignments.is_empty(), "no models");
    let n = assignments[0].len();
    assert!(
        assignments.iter().all(|r| r.len() == n),
        "ragged assignment matrix"
    );
    let k = assignments.len();
    let majority: Vec<bool> = (0..n)
        .map(|j| 2 * assignments.iter().filter(|r| r[j]).count() >= k)
        .collect();
    let mut best = (usize::MAX, 0usize);
    for (i, row) in assignments.iter().enumerate() {
        let d = row.iter().zip(&majority).filter(|(a, b)| a != b).count();
        if d < best.0 {
            best = (d, i);
        }
    }
    best.1
}

/// The `n` documents whose score lies closest to `cutoff`, closest first;
/// ties keep document-id order.
pub fn select_uncertain(labels_by_doc: &BTreeMap<String, ScoredLabel>, cutoff: f64, n: usize) -> Vec<String> {
    let mut v: Vec<(f64, &String)> = labels_by_doc
        .iter()
        .map(|(id, l)| ((l.score - cutoff).abs(), id))
        .collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    v.into_iter().take(n).map(|(_, id)| id.clone()).collect()
}

/// Labels present in `reported`, as a set.
pub fn label_set(labels: &[ScoredLabel]) -> BTreeSet<String> {
    labels.iter().map(|l| l.label.clone()).collect()
}
