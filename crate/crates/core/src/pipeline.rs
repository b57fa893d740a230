//! Document → event-record orchestration: configuration, the per-document
//! stage sequence, batch execution with retry and checkpoints, and the run
//! report.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::actor::{looks_proper, split_country, ActorCoder, AgentFile, CountryTable, NGRAM_AGENT_THRESHOLD};
use crate::attribute::{extract_attributes, ExtractParams, TemplateSet, DEFAULT_ATTRIBUTE_FLOOR};
use crate::backend::{Embedder, NegationAnnotator, PlaceAnnotator, QaBackend, Scorer};
use crate::classify::{apply_threshold, keyword_postfilter, score_labels, CalibrationTable, KeywordFilter, ScorerSet};
use crate::embed::NgramEmbedder;
use crate::entity::{resolve_entity, ResolveParams, ResolvedEntity};
use crate::error::{read_file, BackendError, Error, Result};
use crate::exec::map_ordered;
use crate::geo::{resolve_places, select_event_location, GazetteerAnnotator, GeoParams, GeoWeights, ResolvedLocation};
use crate::kb::{EntityIndex, Gazetteer};
use crate::lexicon::{LexiconScorer, TermLists};
use crate::model::{
    mode_label, validate_record, Attribute, CodedActor, Document, EventLocation, EventRecord, Namespace, Ontology,
    ScoredLabel, Span,
};
use crate::preprocess::{
    filter_story, prepare_text, remove_negated_sentences, set_cleaned_text, CleanRules, FilterReason, RuleNegation,
    StoryScorers,
};
use crate::qa::{HeuristicQa, RecordedQa};
use crate::service::ServiceClient;
use crate::temporal::resolve_date;

/// Which implementation backs a classifier namespace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ScorerSpec {
    /// Keyword lexicon scorer.
    #[default]
    Builtin,
    Service { url: String },
    /// Disabled; only valid for the story filters.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum QaSpec {
    #[default]
    Heuristic,
    Recorded {
        path: PathBuf,
        #[serde(default)]
        fallback: bool,
    },
    Service { url: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum EmbedderSpec {
    #[default]
    Ngram,
    Service { url: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct BackendsConfig {
    pub categories: ScorerSpec,
    pub modes: ScorerSpec,
    pub contexts: ScorerSpec,
    pub filters: ScorerSpec,
    pub qa: QaSpec,
    pub embedder: EmbedderSpec,
    pub timeout_secs: u64,
}

/// Lexicon files for the builtin scorers; bundled lists when unset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct LexiconPaths {
    pub categories: Option<PathBuf>,
    pub modes: Option<PathBuf>,
    pub contexts: Option<PathBuf>,
    pub filters: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub attribute_floor: f64,
    pub entity_similarity: f64,
    pub agent_similarity: f64,
    pub geo_floor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            attribute_floor: DEFAULT_ATTRIBUTE_FLOOR,
            entity_similarity: ResolveParams::default().threshold,
            agent_similarity: NGRAM_AGENT_THRESHOLD,
            geo_floor: GeoParams::default().floor,
        }
    }
}

/// Pipeline configuration. Relative paths are taken from the config file's
/// directory; unset paths fall back to the bundled data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub ontology: Option<PathBuf>,
    pub clean_rules: Option<PathBuf>,
    pub calibration: Option<PathBuf>,
    pub keyword_filter: Option<PathBuf>,
    pub templates: Option<PathBuf>,
    pub agents: Option<PathBuf>,
    pub countries: Option<PathBuf>,
    pub entity_index: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub geo_weights: Option<PathBuf>,
    pub lexicons: LexiconPaths,
    pub backends: BackendsConfig,
    pub thresholds: Thresholds,
    pub workers: usize,
    pub batch_size: usize,
    pub max_retries: u32,
    pub retry_backoff_ms: u64,
    /// Sort output records by doc id instead of input order.
    pub sort_by_doc_id: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            ontology: None,
            clean_rules: None,
            calibration: None,
            keyword_filter: None,
            templates: None,
            agents: None,
            countries: None,
            entity_index: None,
            gazetteer: None,
            geo_weights: None,
            lexicons: LexiconPaths::default(),
            backends: BackendsConfig::default(),
            thresholds: Thresholds::default(),
            workers: 1,
            batch_size: 500,
            max_retries: 3,
            retry_backoff_ms: 200,
            sort_by_doc_id: false,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(src: &str, base: &Path) -> Result<Self> {
        let mut c: PipelineConfig = toml::from_str(src).map_err(|e| Error::Config(e.to_string()))?;
        c.rebase(base);
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&read_file(path)?, base)
    }

    fn rebase(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(x) = p {
                if x.is_relative() {
                    *x = base.join(&*x);
                }
            }
        };
        for p in [
            &mut self.ontology,
            &mut self.clean_rules,
            &mut self.calibration,
            &mut self.keyword_filter,
            &mut self.templates,
            &mut self.agents,
            &mut self.countries,
            &mut self.entity_index,
            &mut self.gazetteer,
            &mut self.geo_weights,
            &mut self.lexicons.categories,
            &mut self.lexicons.modes,
            &mut self.lexicons.contexts,
            &mut self.lexicons.filters,
        ] {
            fix(p);
        }
        if let QaSpec::Recorded { path, .. } = &mut self.backends.qa {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }

    /// Worker count and referenced files.
    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch_size must be at least 1".into()));
        }
        let mut paths: Vec<&PathBuf> = [
            &self.ontology,
            &self.clean_rules,
            &self.calibration,
            &self.keyword_filter,
            &self.templates,
            &self.agents,
            &self.countries,
            &self.entity_index,
            &self.gazetteer,
            &self.geo_weights,
            &self.lexicons.categories,
            &self.lexicons.modes,
            &self.lexicons.contexts,
            &self.lexicons.filters,
        ]
        .into_iter()
        .flatten()
        .collect();
        if let QaSpec::Recorded { path, .. } = &self.backends.qa {
            paths.push(path);
        }
        if let Some(missing) = paths.into_iter().find(|p| !p.exists()) {
            return Err(Error::Config(format!("{} does not exist", missing.display())));
        }
        for (name, spec) in [
            ("categories", &self.backends.categories),
            ("modes", &self.backends.modes),
            ("contexts", &self.backends.contexts),
        ] {
            if *spec == ScorerSpec::None {
                return Err(Error::Config(format!("the {name} scorer cannot be disabled")));
            }
        }
        Ok(())
    }
}

/// Bundled lexicons for the builtin scorers.
pub fn bundled_lexicon(ns: &str) -> TermLists {
    let src = match ns {
        "categories" => include_str!("../data/lexicon/categories.txt"),
        "modes" => include_str!("../data/lexicon/modes.txt"),
        "contexts" => include_str!("../data/lexicon/contexts.txt"),
        "filters" => include_str!("../data/lexicon/filters.txt"),
        other => panic!("no bundled lexicon `{other}`"),
    };
    TermLists::parse(src).expect("bundled lexicon is valid")
}

pub fn bundled_keyword_filter() -> KeywordFilter {
    KeywordFilter::parse(include_str!("../data/keyword_filter.txt")).expect("bundled keyword filter is valid")
}

/// Everything a run needs, loaded once and shared read-only by all workers.
pub struct Engine {
    pub ontology: Ontology,
    pub clean_rules: CleanRules,
    pub categories: ScorerSet,
    pub modes: Arc<dyn Scorer>,
    pub contexts: ScorerSet,
    pub filters: Option<Arc<dyn Scorer>>,
    pub calibration: CalibrationTable,
    pub keyword_filter: KeywordFilter,
    pub templates: TemplateSet,
    pub qa: Arc<dyn QaBackend>,
    pub embedder: Arc<dyn Embedder>,
    pub negation: Arc<dyn NegationAnnotator>,
    pub agents: AgentFile,
    pub countries: CountryTable,
    pub kb: Option<EntityIndex>,
    pub gazetteer: Option<Arc<Gazetteer>>,
    pub places: Option<Arc<dyn PlaceAnnotator>>,
    pub geo: GeoParams,
    pub thresholds: Thresholds,
}

fn scorer_for(spec: &ScorerSpec, name: &str, lexicon: Option<&PathBuf>, timeout: Duration) -> Result<Option<Arc<dyn Scorer>>> {
    Ok(match spec {
        ScorerSpec::Builtin => {
            let lex = match lexicon {
                Some(p) => TermLists::load(p)?,
                None => bundled_lexicon(name),
            };
            let scorer = LexiconScorer::new(name, lex);
            // story filters need two hits before they drop anything
            Some(Arc::new(if name == "filters" { scorer.with_shape(2.0, 3.0) } else { scorer }))
        }
        ScorerSpec::Service { url } => Some(Arc::new(ServiceClient::new(url, timeout))),
        ScorerSpec::None => None,
    })
}

impl Engine {
    /// Bundled data, builtin scorers, heuristic QA and the n-gram embedder;
    /// no entity index or gazetteer.
    pub fn builtin() -> Self {
        Self::from_config(&PipelineConfig::default()).expect("bundled configuration loads")
    }

    pub fn from_config(c: &PipelineConfig) -> Result<Self> {
        c.validate()?;
        let timeout = Duration::from_secs(if c.backends.timeout_secs == 0 { 30 } else { c.backends.timeout_secs });
        let ontology = match &c.ontology {
            Some(p) => Ontology::load(p)?,
            None => Ontology::default_plover(),
        };
        let clean_rules = match &c.clean_rules {
            Some(p) => CleanRules::load(p)?,
            None => CleanRules::bundled(),
        };
        let cat = scorer_for(&c.backends.categories, "categories", c.lexicons.categories.as_ref(), timeout)?
            .expect("validated");
        let modes = scorer_for(&c.backends.modes, "modes", c.lexicons.modes.as_ref(), timeout)?.expect("validated");
        let ctx = scorer_for(&c.backends.contexts, "contexts", c.lexicons.contexts.as_ref(), timeout)?
            .expect("validated");
        let filters = scorer_for(&c.backends.filters, "filters", c.lexicons.filters.as_ref(), timeout)?;
        let calibration = match &c.calibration {
            Some(p) => CalibrationTable::load(p)?,
            None => CalibrationTable::default(),
        };
        let keyword_filter = match &c.keyword_filter {
            Some(p) => KeywordFilter::load(p)?,
            None => bundled_keyword_filter(),
        };
        let templates = match &c.templates {
            Some(p) => TemplateSet::load(p)?,
            None => TemplateSet::bundled(),
        };
        if let Some(missing) = ontology.categories().iter().find(|cat| !templates.covers(cat, None)) {
            warn!("no question templates for {missing}; global fallback questions apply");
        }
        let qa: Arc<dyn QaBackend> = match &c.backends.qa {
            QaSpec::Heuristic => Arc::new(HeuristicQa),
            QaSpec::Recorded { path, fallback } => {
                let r = RecordedQa::load(path)?;
                Arc::new(if *fallback { r.with_fallback(Arc::new(HeuristicQa)) } else { r })
            }
            QaSpec::Service { url } => Arc::new(ServiceClient::new(url, timeout)),
        };
        let embedder: Arc<dyn Embedder> = match &c.backends.embedder {
            EmbedderSpec::Ngram => Arc::new(NgramEmbedder::default()),
            EmbedderSpec::Service { url } => Arc::new(ServiceClient::new(url, timeout)),
        };
        let agents = match &c.agents {
            Some(p) => AgentFile::load(p, embedder.as_ref())?,
            None => AgentFile::bundled(embedder.as_ref()),
        };
        let countries = match &c.countries {
            Some(p) => CountryTable::load(p)?,
            None => CountryTable::bundled(),
        };
        let kb = c.entity_index.as_deref().map(EntityIndex::load).transpose()?;
        let gazetteer = c.gazetteer.as_deref().map(Gazetteer::load).transpose()?.map(Arc::new);
        let places = gazetteer
            .clone()
            .map(|g| Arc::new(GazetteerAnnotator::new(g)) as Arc<dyn PlaceAnnotator>);
        let weights = match &c.geo_weights {
            Some(p) => GeoWeights::load(p)?,
            None => GeoWeights::default(),
        };
        Ok(Engine {
            categories: ScorerSet::new(Namespace::Category, ontology.categories().to_vec(), cat),
            contexts: ScorerSet::new(Namespace::Context, ontology.contexts().to_vec(), ctx),
            modes,
            filters,
            ontology,
            clean_rules,
            calibration,
            keyword_filter,
            templates,
            qa,
            embedder,
            negation: Arc::new(RuleNegation::default()),
            agents,
            countries,
            kb,
            gazetteer,
            places,
            geo: GeoParams {
                weights,
                floor: c.thresholds.geo_floor,
                ..GeoParams::default()
            },
            thresholds: c.thresholds,
        })
    }

    /// Backend identifiers recorded in provenance and the run report.
    pub fn versions(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("categories".into(), self.categories.version());
        m.insert("modes".into(), self.modes.id());
        m.insert("contexts".into(), self.contexts.version());
        m.insert("qa".into(), self.qa.id());
        m.insert("embedder".into(), self.embedder.id());
        m
    }
}

/// What happened to one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "detail")]
pub enum DocStatus {
    Coded,
    Dropped(String),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocOutcome {
    pub doc_id: String,
    pub records: Vec<EventRecord>,
    pub status: DocStatus,
    pub partial: bool,
    pub invalid_records: usize,
    pub us_domestic_records: usize,
}

impl DocOutcome {
    fn new(doc_id: &str, status: DocStatus) -> Self {
        DocOutcome {
            doc_id: doc_id.to_string(),
            records: Vec::new(),
            status,
            partial: false,
            invalid_records: 0,
            us_domestic_records: 0,
        }
    }
}

fn threshold_and_filter(engine: &Engine, labels: &[ScoredLabel], text: &str) -> Vec<ScoredLabel> {
    let t = apply_threshold(labels, &engine.calibration);
    keyword_postfilter(&t.reported, text, &engine.keyword_filter)
}

/// The capitalized stretch of a mention after its country term is removed:
/// "Pentagon officials" → "Pentagon".
fn proper_part(mention: &str, countries: &CountryTable) -> Option<String> {
    let (_, residual) = split_country(mention, countries);
    let toks = crate::text::tokens(&residual);
    let caps: Vec<usize> = toks
        .iter()
        .enumerate()
        .filter(|(i, t)| {
            t.text.chars().next().is_some_and(char::is_uppercase)
                && !(*i == 0 && ["a", "an", "the"].contains(&t.text.to_lowercase().as_str()))
        })
        .map(|(i, _)| i)
        .collect();
    let (&a, &b) = (caps.first()?, caps.last()?);
    Some(residual[toks[a].start..toks[b].end].to_string())
}

impl Engine {
    /// Resolve and code one actor mention.
    pub fn code_mention(&self, span: &Span, story_date: chrono::NaiveDate) -> CodedActor {
        let coder = ActorCoder {
            agents: &self.agents,
            countries: &self.countries,
            kb: self.kb.as_ref(),
            embedder: self.embedder.as_ref(),
            threshold: self.thresholds.agent_similarity,
        };
        let resolved = self.resolve_mention(span);
        let code = coder.code_actor(&span.text, resolved.as_ref(), story_date);
        CodedActor {
            text: span.text.clone(),
            wiki: resolved.as_ref().and_then(|r| r.article_title.clone()),
            method: resolved
                .as_ref()
                .map_or(crate::entity::ResolutionMethod::Unresolved, |r| r.method),
            code,
        }
    }

    fn resolve_mention(&self, span: &Span) -> Option<ResolvedEntity> {
        let kb = self.kb.as_ref()?;
        if !looks_proper(&span.text) {
            return None;
        }
        let params = ResolveParams {
            threshold: self.thresholds.entity_similarity,
            ..ResolveParams::default()
        };
        let mut tries = vec![span.clone()];
        if let Some(p) = proper_part(&span.text, &self.countries).filter(|p| *p != span.text) {
            tries.push(Span::synthetic(p));
        }
        tries
            .iter()
            .map(|s| resolve_entity(s, kb, self.embedder.as_ref(), params))
            .find(|r| r.article_title.is_some())
            .map(|mut r| {
                r.mention = span.clone();
                r
            })
    }

    /// Run the full stage sequence on one document. `Err` is returned only
    /// for retryable backend failures.
    pub fn process_document(&self, doc: &Document) -> std::result::Result<DocOutcome, BackendError> {
        let mut doc = match prepare_text(doc, &self.clean_rules) {
            Ok(d) => d,
            Err(Error::EmptyText) => return Ok(DocOutcome::new(&doc.id, DocStatus::Dropped("empty_text".into()))),
            Err(e) => return Ok(DocOutcome::new(&doc.id, DocStatus::Failed(e.to_string()))),
        };
        let filters = self.filters.as_deref();
        let verdict = filter_story(
            &doc,
            &self.clean_rules,
            StoryScorers {
                financial: filters,
                crime: filters,
                disaster: filters,
            },
        );
        if !verdict.keep {
            return Ok(DocOutcome::new(&doc.id, DocStatus::Dropped(verdict.reason.as_str().into())));
        }
        let kept = remove_negated_sentences(&doc.cleaned_text, self.negation.as_ref());
        if kept.trim().is_empty() {
            return Ok(DocOutcome::new(&doc.id, DocStatus::Dropped("all_negated".into())));
        }
        set_cleaned_text(&mut doc, kept);
        let text = doc.coded_text.as_str();

        let fail = |e: BackendError| -> std::result::Result<DocOutcome, BackendError> {
            if e.is_retryable() {
                Err(e)
            } else {
                Ok(DocOutcome::new(&doc.id, DocStatus::Failed(e.to_string())))
            }
        };
        let cats = match score_labels(text, &self.categories) {
            Ok(s) => threshold_and_filter(self, &s, text),
            Err(e) => return fail(e),
        };
        if cats.is_empty() {
            return Ok(DocOutcome::new(&doc.id, DocStatus::Dropped("no_event".into())));
        }
        let mode_labels: Vec<String> = cats
            .iter()
            .flat_map(|c| self.ontology.mode_labels(&c.label))
            .collect();
        let modes = match crate::classify::score_with(text, &mode_labels, self.modes.as_ref()) {
            Ok(s) => threshold_and_filter(self, &s, text),
            Err(e) => return fail(e),
        };
        let contexts = match score_labels(text, &self.contexts) {
            Ok(s) => threshold_and_filter(self, &s, text),
            Err(e) => return fail(e),
        };

        let mut out = DocOutcome::new(&doc.id, DocStatus::Coded);
        let mut places: Option<Vec<ResolvedLocation>> = None;
        let versions = self.versions();
        for cat in &cats {
            let cat_modes: Vec<Option<String>> = {
                let v: Vec<Option<String>> = self
                    .ontology
                    .modes(&cat.label)
                    .iter()
                    .filter(|m| modes.iter().any(|s| s.label == mode_label(&cat.label, m)))
                    .map(|m| Some(m.clone()))
                    .collect();
                if v.is_empty() {
                    vec![None]
                } else {
                    v
                }
            };
            for mode in cat_modes {
                let mut rec = EventRecord::new(&doc.id, &cat.label);
                rec.mode = mode.clone();
                rec.category_score = cat.score;
                rec.contexts = contexts.iter().map(|c| c.label.clone()).collect();
                let ex = extract_attributes(
                    text,
                    &cat.label,
                    mode.as_deref(),
                    self.qa.as_ref(),
                    &self.templates,
                    self.ontology.rule(&cat.label),
                    ExtractParams {
                        floor: self.thresholds.attribute_floor,
                        ..ExtractParams::default()
                    },
                );
                if ex.partial {
                    out.partial = true;
                    rec.provenance.insert("qa_partial".into(), "true".into());
                }
                rec.attributes = ex.attributes;
                self.resolve_record(&doc, &mut rec, &mut places);
                rec.provenance.extend(versions.clone());

                if self.us_domestic(&rec) {
                    debug!("{}: dropping US-domestic {} record", doc.id, rec.category);
                    out.us_domestic_records += 1;
                    continue;
                }
                let violations = validate_record(&rec, &self.ontology);
                if !violations.is_empty() {
                    warn!("{}: invalid {} record: {violations:?}", doc.id, rec.category);
                    out.invalid_records += 1;
                    continue;
                }
                out.records.push(rec);
            }
        }
        if out.records.is_empty() && out.us_domestic_records > 0 {
            out.status = DocStatus::Dropped(FilterReason::UsDomesticPending.as_str().into());
        }
        Ok(out)
    }

    fn resolve_record(&self, doc: &Document, rec: &mut EventRecord, places: &mut Option<Vec<ResolvedLocation>>) {
        let date = doc.publication_date;
        for attr in [Attribute::Actor, Attribute::SecondActor, Attribute::Recipient] {
            let Some(slot) = rec.attributes.get(attr) else { continue };
            let coded = self.code_mention(&slot.span, date);
            match attr {
                Attribute::Actor => rec.resolutions.actor = Some(coded),
                Attribute::SecondActor => rec.resolutions.second_actor = Some(coded),
                _ => rec.resolutions.recipient = Some(coded),
            }
        }
        if let (Some(g), Some(ann)) = (&self.gazetteer, &self.places) {
            let resolved = places
                .get_or_insert_with(|| resolve_places(&doc.cleaned_text, ann.as_ref(), g, &self.geo, None));
            let qa_span = rec.attributes.location.as_ref().map(|s| &s.span);
            if let Some(loc) = select_event_location(resolved, qa_span) {
                let e = loc.entry.as_ref().expect("selected locations carry an entry");
                rec.resolutions.location = Some(EventLocation {
                    text: loc.mention.text.clone(),
                    geoname_id: e.geoname_id,
                    name: e.name.clone(),
                    country_code: e.country_code.clone(),
                    admin1: e.admin1.clone(),
                    lat: e.latitude,
                    lon: e.longitude,
                    score: loc.score,
                });
            }
        }
        if let Some(d) = &rec.attributes.date {
            rec.resolutions.date = resolve_date(&d.span.text, date);
        }
    }

    /// Every resolved actor country and the event location are USA.
    fn us_domestic(&self, rec: &EventRecord) -> bool {
        let r = &rec.resolutions;
        let mut countries: Vec<String> = [&r.actor, &r.second_actor, &r.recipient]
            .into_iter()
            .flatten()
            .map(|a| a.code.country.clone())
            .filter(|c| !c.is_empty())
            .collect();
        if let Some(l) = &r.location {
            countries.push(
                self.countries
                    .alpha3_for_alpha2(&l.country_code)
                    .unwrap_or(&l.country_code)
                    .to_string(),
            );
        }
        !countries.is_empty() && countries.iter().all(|c| c == "USA")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedDoc {
    pub doc_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedDoc {
    pub doc_id: String,
    pub error: String,
}

/// Summary of a run. Deterministic for a fixed input and configuration.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub documents: usize,
    pub coded_documents: usize,
    pub records: usize,
    pub dropped: Vec<DroppedDoc>,
    pub drop_counts: BTreeMap<String, usize>,
    pub failed: Vec<FailedDoc>,
    pub partial_documents: usize,
    pub invalid_records: usize,
    pub us_domestic_records: usize,
    pub retries: usize,
    pub resumed_from: usize,
    pub backends: BTreeMap<String, String>,
}

impl RunReport {
    fn absorb(&mut self, o: &DocOutcome) {
        self.documents += 1;
        self.records += o.records.len();
        self.invalid_records += o.invalid_records;
        self.us_domestic_records += o.us_domestic_records;
        if o.partial {
            self.partial_documents += 1;
        }
        match &o.status {
            DocStatus::Coded => self.coded_documents += 1,
            DocStatus::Dropped(r) => {
                *self.drop_counts.entry(r.clone()).or_default() += 1;
                self.dropped.push(DroppedDoc {
                    doc_id: o.doc_id.clone(),
                    reason: r.clone(),
                });
            }
            DocStatus::Failed(e) => self.failed.push(FailedDoc {
                doc_id: o.doc_id.clone(),
                error: e.clone(),
            }),
        }
    }
}

/// Resume point written after every completed batch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub docs_done: usize,
    pub bytes_written: u64,
    pub report: RunReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub workers: usize,
    pub batch_size: usize,
    pub max_retries: u32,
    pub retry_backoff: Duration,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: 1,
            batch_size: 500,
            max_retries: 3,
            retry_backoff: Duration::from_millis(200),
        }
    }
}

impl From<&PipelineConfig> for RunOptions {
    fn from(c: &PipelineConfig) -> Self {
        RunOptions {
            workers: c.workers,
            batch_size: c.batch_size,
            max_retries: c.max_retries,
            retry_backoff: Duration::from_millis(c.retry_backoff_ms),
        }
    }
}

/// Why a run stopped early. The last checkpoint is where to resume.
#[derive(Debug)]
pub enum RunError {
    Backend {
        error: BackendError,
        checkpoint: Option<Checkpoint>,
    },
    Io(std::io::Error),
    Checkpoint(Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Backend { error, checkpoint } => write!(
                f,
                "backend failure after retries: {error} (resume from document {})",
                checkpoint.as_ref().map_or(0, |c| c.docs_done)
            ),
            RunError::Io(e) => write!(f, "writing output: {e}"),
            RunError::Checkpoint(e) => write!(f, "writing checkpoint: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

/// Process one batch, retrying retryable backend failures with exponential
/// backoff. Outcomes come back in input order.
fn run_batch(engine: &Engine, docs: &[Document], opts: &RunOptions, report: &mut RunReport) -> std::result::Result<Vec<DocOutcome>, BackendError> {
    let mut results: Vec<std::result::Result<DocOutcome, BackendError>> =
        map_ordered(docs, opts.workers, |d| engine.process_document(d));
    let mut attempt = 0;
    loop {
        let pending: Vec<usize> = (0..docs.len()).filter(|&i| results[i].is_err()).collect();
        if pending.is_empty() {
            break;
        }
        if attempt >= opts.max_retries {
            let e = results[pending[0]].as_ref().err().cloned().expect("pending is an error");
            return Err(e);
        }
        std::thread::sleep(opts.retry_backoff * 2u32.saturating_pow(attempt));
        attempt += 1;
        report.retries += pending.len();
        let retried: Vec<Document> = pending.iter().map(|&i| docs[i].clone()).collect();
        let again = map_ordered(&retried, opts.workers, |d| engine.process_document(d));
        for (i, r) in pending.into_iter().zip(again) {
            results[i] = r;
        }
    }
    Ok(results.into_iter().map(|r| r.expect("all resolved")).collect())
}

/// Run the pipeline, streaming one JSON record per line to `out`.
/// `resume` skips the documents a previous run completed; `on_checkpoint`
/// is called after every batch.
pub fn run_pipeline<W: Write>(
    docs: &[Document],
    engine: &Engine,
    opts: &RunOptions,
    out: &mut W,
    resume: Option<Checkpoint>,
    on_checkpoint: &mut dyn FnMut(&Checkpoint) -> Result<()>,
) -> std::result::Result<RunReport, RunError> {
    let (start, mut report, mut bytes) = match resume {
        Some(c) => {
            let mut r = c.report;
            r.resumed_from = c.docs_done;
            (c.docs_done.min(docs.len()), r, c.bytes_written)
        }
        None => (0, RunReport::default(), 0),
    };
    report.backends = engine.versions();
    let mut last: Option<Checkpoint> = None;
    let mut done = start;
    for batch in docs[start..].chunks(opts.batch_size.max(1)) {
        let outcomes = match run_batch(engine, batch, opts, &mut report) {
            Ok(o) => o,
            Err(error) => return Err(RunError::Backend { error, checkpoint: last }),
        };
        for o in &outcomes {
            for r in &o.records {
                let line = serde_json::to_string(r).expect("records serialize") + "\n";
                out.write_all(line.as_bytes()).map_err(RunError::Io)?;
                bytes += line.len() as u64;
            }
            report.absorb(o);
        }
        out.flush().map_err(RunError::Io)?;
        done += batch.len();
        let cp = Checkpoint {
            docs_done: done,
            bytes_written: bytes,
            report: report.clone(),
        };
        on_checkpoint(&cp).map_err(RunError::Checkpoint)?;
        last = Some(cp);
    }
    Ok(report)
}

/// Run over an in-memory batch and collect records.
pub fn run_collect(docs: &[Document], engine: &Engine, opts: &RunOptions) -> std::result::Result<(Vec<EventRecord>, RunReport), BackendError> {
    let mut report = RunReport {
        backends: engine.versions(),
        ..RunReport::default()
    };
    let mut records = Vec::new();
    for batch in docs.chunks(opts.batch_size.max(1)) {
        for o in run_batch(engine, batch, opts, &mut report)? {
            report.absorb(&o);
            records.extend(o.records);
        }
    }
    Ok((records, report))
}

/// Parse a JSON-lines document stream; reports the first bad line.
pub fn read_documents(src: &str) -> Result<Vec<Document>> {
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Line {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Stable ordering used by the sort-by-doc-id output mode.
pub fn sort_records(records: &mut [EventRecord]) {
    records.sort_by(|a, b| {
        (&a.doc_id, &a.category, &a.mode).cmp(&(&b.doc_id, &b.category, &b.mode))
    });
}
