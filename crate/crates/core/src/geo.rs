//! Toponym resolution: find place mentions, rank gazetteer candidates with a
//! linear feature score, and pick the event location by overlap with the QA
//! location span.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::backend::PlaceAnnotator;
use crate::error::{read_file, BackendError, Error, Result};
use crate::kb::{Gazetteer, GazetteerEntry};
use crate::model::Span;
use crate::text::{self, Token};

/// Place mentions from `annotator`, deduplicated by offsets and sorted.
pub fn extract_place_mentions(text: &str, annotator: &dyn PlaceAnnotator) -> Vec<Span> {
    let spans = match annotator.places(text) {
        Ok(s) => s,
        Err(e) => {
            warn!("place annotator failed: {e}");
            return Vec::new();
        }
    };
    let mut seen = BTreeSet::new();
    let mut out: Vec<Span> = spans
        .into_iter()
        .filter(|s| s.range().map_or(true, |r| seen.insert(r)))
        .collect();
    out.sort_by_key(|s| s.range());
    out
}

const DIRECTIONS: &[&str] = &[
    "northern", "southern", "eastern", "western", "central", "northeastern", "northwestern",
    "southeastern", "southwestern", "north", "south", "east", "west",
];

const PLACE_TYPES: &[&str] = &[
    "province", "region", "district", "city", "governorate", "state", "county", "prefecture",
    "oblast", "valley",
];

/// Mention text with direction words and trailing place-type words removed:
/// "northern Afghanistan" → "Afghanistan", "Samangan province" → "Samangan".
pub fn core_name(mention: &str) -> &str {
    let toks = text::tokens(mention);
    let mut a = 0;
    let mut b = toks.len();
    while a < b && DIRECTIONS.contains(&toks[a].text.to_lowercase().as_str()) {
        a += 1;
    }
    while b > a + 1 && PLACE_TYPES.contains(&toks[b - 1].text.to_lowercase().as_str()) {
        b -= 1;
    }
    if a >= b {
        return mention.trim();
    }
    &mention[toks[a].start..toks[b - 1].end]
}

/// Annotator that tags runs of capitalized words found in the gazetteer,
/// widened by a leading direction word or a trailing place-type word.
#[derive(Debug, Clone)]
pub struct GazetteerAnnotator {
    gazetteer: Arc<Gazetteer>,
    max_words: usize,
}

impl GazetteerAnnotator {
    pub fn new(gazetteer: Arc<Gazetteer>) -> Self {
        GazetteerAnnotator {
            gazetteer,
            max_words: 4,
        }
    }
}

fn capitalized(t: &Token<'_>) -> bool {
    t.text.chars().next().is_some_and(char::is_uppercase)
}

impl PlaceAnnotator for GazetteerAnnotator {
    fn places(&self, text: &str) -> std::result::Result<Vec<Span>, BackendError> {
        let toks = text::tokens(text);
        let mut out = Vec::new();
        let mut i = 0;
        while i < toks.len() {
            if !capitalized(&toks[i]) {
                i += 1;
                continue;
            }
            // longest known name starting here, within the capitalized run
            let mut run = i;
            while run < toks.len() && capitalized(&toks[run]) && run - i < self.max_words {
                run += 1;
            }
            let found = (i + 1..=run)
                .rev()
                .find(|&j| self.gazetteer.knows(&text[toks[i].start..toks[j - 1].end]));
            let Some(j) = found else {
                i += 1;
                continue;
            };
            let mut b0 = toks[i].start;
            let mut b1 = toks[j - 1].end;
            if i > 0 && DIRECTIONS.contains(&toks[i - 1].text.to_lowercase().as_str()) && text[toks[i - 1].end..b0].trim().is_empty() {
                b0 = toks[i - 1].start;
            }
            if let Some(n) = toks.get(j) {
                if PLACE_TYPES.contains(&n.text.to_lowercase().as_str()) && text[b1..n.start].trim().is_empty() {
                    b1 = n.end;
                }
            }
            let s = text::char_offset(text, b0);
            out.push(Span::new(&text[b0..b1], s, s + text::char_len(&text[b0..b1])));
            i = j;
        }
        Ok(out)
    }
}

/// Feature weights for candidate ranking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeoWeights {
    pub name: f64,
    pub country: f64,
    pub feature: f64,
    pub population: f64,
}

impl Default for GeoWeights {
    fn default() -> Self {
        GeoWeights {
            name: 0.5,
            country: 0.2,
            feature: 0.2,
            population: 0.1,
        }
    }
}

impl GeoWeights {
    pub fn from_toml(src: &str) -> Result<Self> {
        let w: GeoWeights = toml::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        if [w.name, w.country, w.feature, w.population]
            .iter()
            .any(|x| !x.is_finite() || *x < 0.0)
        {
            return Err(Error::Config("geo weights must be finite and non-negative".into()));
        }
        Ok(w)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read_file(path)?)
    }

    pub fn scaled(self, k: f64) -> Self {
        GeoWeights {
            name: self.name * k,
            country: self.country * k,
            feature: self.feature * k,
            population: self.population * k,
        }
    }
}

/// Static prior by Geonames feature code: populated places over
/// administrative areas over everything else.
pub fn feature_prior(code: &str) -> f64 {
    match code {
        "PPLC" => 1.0,
        c if c.starts_with("PPLA") => 0.9,
        c if c.starts_with("PCL") => 0.85,
        c if c.starts_with("PPL") => 0.8,
        "ADM1" => 0.75,
        c if c.starts_with("ADM") => 0.6,
        "RGN" | "AREA" => 0.5,
        _ => 0.2,
    }
}

fn population_prior(pop: u64) -> f64 {
    ((1.0 + pop as f64).ln() / (1.0 + 1e8f64).ln()).min(1.0)
}

fn name_similarity(core: &str, e: &GazetteerEntry) -> f64 {
    let q = text::normalize_name(core);
    if text::normalize_name(&e.name) == q {
        return 1.0;
    }
    let alt = e.alt_names.iter().any(|a| text::normalize_name(a) == q);
    if alt {
        return 0.9;
    }
    std::iter::once(&e.name)
        .chain(&e.alt_names)
        .map(|n| strsim::normalized_levenshtein(&q, &text::normalize_name(n)) * 0.8)
        .fold(0.0, f64::max)
}

/// Most common country among the best exact matches of the other mentions;
/// ties go to the alphabetically first code.
pub fn modal_country(mention: &Span, doc_mentions: &[Span], gazetteer: &Gazetteer) -> Option<String> {
    let own = text::normalize_name(core_name(&mention.text));
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for m in doc_mentions {
        let core = core_name(&m.text);
        if text::normalize_name(core) == own {
            continue;
        }
        if let Some(h) = gazetteer
            .search_places(core, 1)
            .into_iter()
            .find(|h| h.tier != crate::kb::MatchTier::Fuzzy)
        {
            *counts.entry(h.entry.country_code).or_default() += 1;
        }
    }
    let max = counts.values().copied().max()?;
    counts.into_iter().find(|(_, n)| *n == max).map(|(c, _)| c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredPlace {
    pub entry: GazetteerEntry,
    pub score: f64,
    pub feature_breakdown: BTreeMap<String, f64>,
}

/// Score candidates for `mention`; descending, ties by geoname id.
pub fn rank_place_candidates(
    mention: &Span,
    modal: Option<&str>,
    candidates: &[GazetteerEntry],
    weights: &GeoWeights,
) -> Vec<ScoredPlace> {
    let core = core_name(&mention.text);
    let mut out: Vec<ScoredPlace> = candidates
        .iter()
        .map(|e| {
            let parts = [
                ("name", weights.name * name_similarity(core, e)),
                (
                    "country",
                    weights.country * if modal == Some(e.country_code.as_str()) { 1.0 } else { 0.0 },
                ),
                ("feature", weights.feature * feature_prior(&e.feature_code)),
                ("population", weights.population * population_prior(e.population)),
            ];
            ScoredPlace {
                entry: e.clone(),
                score: parts.iter().map(|(_, v)| v).sum(),
                feature_breakdown: parts.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.entry.geoname_id.cmp(&b.entry.geoname_id))
    });
    out
}

/// Payload handed to an external reranker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RerankRequest {
    pub mention: Span,
    pub doc_mentions: Vec<Span>,
    pub candidates: Vec<ScoredPlace>,
}

/// Replaces the linear score; must return a subset of the candidates.
pub trait PlaceReranker: Send + Sync {
    fn rerank(&self, request: &RerankRequest) -> std::result::Result<Vec<ScoredPlace>, BackendError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedLocation {
    pub mention: Span,
    /// Present iff `score` reaches the resolution floor.
    pub entry: Option<GazetteerEntry>,
    pub score: f64,
    pub feature_breakdown: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoParams {
    pub weights: GeoWeights,
    pub floor: f64,
    pub candidates: usize,
}

impl Default for GeoParams {
    fn default() -> Self {
        GeoParams {
            weights: GeoWeights::default(),
            floor: 0.5,
            candidates: 10,
        }
    }
}

/// Resolve every place mention in `text`.
pub fn resolve_places(
    text: &str,
    annotator: &dyn PlaceAnnotator,
    gazetteer: &Gazetteer,
    params: &GeoParams,
    reranker: Option<&dyn PlaceReranker>,
) -> Vec<ResolvedLocation> {
    let mentions = extract_place_mentions(text, annotator);
    mentions
        .iter()
        .map(|m| {
            let cands: Vec<GazetteerEntry> = gazetteer
                .search_places(core_name(&m.text), params.candidates)
                .into_iter()
                .map(|h| h.entry)
                .collect();
            let modal = modal_country(m, &mentions, gazetteer);
            let mut ranked = rank_place_candidates(m, modal.as_deref(), &cands, &params.weights);
            if let Some(r) = reranker {
                let req = RerankRequest {
                    mention: m.clone(),
                    doc_mentions: mentions.clone(),
                    candidates: ranked.clone(),
                };
                match r.rerank(&req) {
                    Ok(v) if v.iter().all(|p| cands.iter().any(|c| c.geoname_id == p.entry.geoname_id)) => ranked = v,
                    Ok(_) => warn!("reranker returned unknown candidates; keeping linear ranking"),
                    Err(e) => warn!("reranker failed: {e}; keeping linear ranking"),
                }
            }
            match ranked.into_iter().next() {
                Some(best) => ResolvedLocation {
                    mention: m.clone(),
                    entry: (best.score >= params.floor).then_some(best.entry),
                    score: best.score,
                    feature_breakdown: best.feature_breakdown,
                },
                None => ResolvedLocation {
                    mention: m.clone(),
                    entry: None,
                    score: 0.0,
                    feature_breakdown: BTreeMap::new(),
                },
            }
        })
        .collect()
}

/// The resolved location overlapping the QA location span; the best score
/// wins, then the earliest mention.
pub fn select_event_location<'a>(resolved: &'a [ResolvedLocation], qa_span: Option<&Span>) -> Option<&'a ResolvedLocation> {
    let qa = qa_span?;
    resolved
        .iter()
        .filter(|r| r.entry.is_some() && r.mention.overlaps(qa))
        .fold(None, |best: Option<&ResolvedLocation>, r| match best {
            Some(b) if b.score >= r.score => Some(b),
            _ => Some(r),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: u64, name: &str, cc: &str, code: &str, pop: u64) -> GazetteerEntry {
        GazetteerEntry {
            geoname_id: id,
            name: name.into(),
            alt_names: vec![],
            latitude: 0.0,
            longitude: 0.0,
            feature_code: code.into(),
            country_code: cc.into(),
            admin1: String::new(),
            population: pop,
        }
    }

    #[test]
    fn core_names() {
        assert_eq!(core_name("northern Afghanistan"), "Afghanistan");
        assert_eq!(core_name("Samangan province"), "Samangan");
        assert_eq!(core_name("Aybak"), "Aybak");
    }

    #[test]
    fn population_breaks_name_ties() {
        let m = Span::synthetic("Springfield");
        let c = [entry(1, "Springfield", "US", "PPL", 100), entry(2, "Springfield", "US", "PPL", 100_000)];
        let r = rank_place_candidates(&m, None, &c, &GeoWeights::default());
        assert_eq!(r[0].entry.geoname_id, 2);
        let sum: f64 = r[0].feature_breakdown.values().sum();
        assert!((sum - r[0].score).abs() < 1e-12);
    }

    #[test]
    fn country_agreement() {
        let m = Span::synthetic("Aybak");
        let c = [entry(1, "Aybak", "AF", "PPLA", 50_000), entry(2, "Aybak", "TR", "PPLA", 80_000)];
        let r = rank_place_candidates(&m, Some("AF"), &c, &GeoWeights::default());
        assert_eq!(r[0].entry.country_code, "AF");
    }

    #[test]
    fn overlap_selection() {
        let loc = |t: &str, s: usize, score: f64| ResolvedLocation {
            mention: Span::new(t, s, s + t.len()),
            entry: Some(entry(s as u64, t, "AF", "PPL", 1)),
            score,
            feature_breakdown: BTreeMap::new(),
        };
        let r = vec![loc("Kabul", 0, 0.9), loc("Aybak", 40, 0.8)];
        assert_eq!(select_event_location(&r, Some(&Span::new("Aybak", 40, 45))).unwrap().mention.text, "Aybak");
        assert!(select_event_location(&r, None).is_none());
        assert!(select_event_location(&r, Some(&Span::new("northern Afghanistan", 10, 30))).is_none());
    }

    #[test]
    fn weights_file() {
        let w = GeoWeights::from_toml("name = 1.0\ncountry = 0.0\nfeature = 0.5\npopulation = 0.5\n").unwrap();
        assert_eq!(w.name, 1.0);
        assert!(GeoWeights::from_toml("name = -1.0\ncountry = 0.0\nfeature = 0.5\npopulation = 0.5\n").is_err());
        assert!(GeoWeights::from_toml("name = 1.0\n").is_err());
    }
}
