//! Shared data model: documents, spans, scored labels, event records, and the
//! data-driven ontology with record validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::actor::ActorCode;
use crate::entity::ResolutionMethod;
use crate::error::{read_file, Error, Result};
use crate::temporal::ResolvedDate;
use crate::text;

/// A news story. Input lines carry `id`, `date`, `source`, `headline`, `text`;
/// `cleaned_text` and `coded_text` are filled by preprocessing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    #[serde(rename = "date")]
    pub publication_date: NaiveDate,
    #[serde(default)]
    pub source: String,
    #[serde(default)]
    pub headline: String,
    #[serde(rename = "text")]
    pub raw_text: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub cleaned_text: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub coded_text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, date: NaiveDate, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            publication_date: date,
            source: String::new(),
            headline: String::new(),
            raw_text: text.into(),
            cleaned_text: String::new(),
            coded_text: String::new(),
        }
    }
}

/// A piece of text, optionally anchored by character offsets into a document.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<usize>,
}

impl Span {
    pub fn new(text: impl Into<String>, start: usize, end: usize) -> Self {
        Span {
            text: text.into(),
            start: Some(start),
            end: Some(end),
        }
    }

    /// A span with no anchor in any document.
    pub fn synthetic(text: impl Into<String>) -> Self {
        Span {
            text: text.into(),
            start: None,
            end: None,
        }
    }

    pub fn range(&self) -> Option<(usize, usize)> {
        self.start.zip(self.end)
    }

    /// Whether the two spans share at least one character position.
    pub fn overlaps(&self, other: &Span) -> bool {
        match (self.range(), other.range()) {
            (Some((a0, a1)), Some((b0, b1))) => a0 < b1 && b0 < a1,
            _ => false,
        }
    }

    /// Checks the offset invariant against the text the span points into.
    pub fn is_consistent_with(&self, source: &str) -> bool {
        match self.range() {
            None => true,
            Some((s, e)) => s < e && text::char_slice(source, s, e) == Some(self.text.as_str()),
        }
    }
}

/// Output of one binary classifier for one label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredLabel {
    pub label: String,
    pub score: f64,
    /// Backend's own decision, before any calibration.
    pub positive: bool,
}

impl ScoredLabel {
    pub fn new(label: impl Into<String>, score: f64, positive: bool) -> Self {
        ScoredLabel {
            label: label.into(),
            score,
            positive,
        }
    }
}

/// Which label namespace a scorer serves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Namespace {
    Category,
    Mode,
    Context,
}

/// Event attribute slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Attribute {
    #[serde(rename = "ACTOR")]
    Actor,
    #[serde(rename = "SECOND_ACTOR")]
    SecondActor,
    #[serde(rename = "RECIP")]
    Recipient,
    #[serde(rename = "LOCATION")]
    Location,
    #[serde(rename = "DATE")]
    Date,
}

impl Attribute {
    /// Attributes that questions are asked about.
    pub const ASKED: [Attribute; 4] = [
        Attribute::Actor,
        Attribute::Recipient,
        Attribute::Location,
        Attribute::Date,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Attribute::Actor => "ACTOR",
            Attribute::SecondActor => "SECOND_ACTOR",
            Attribute::Recipient => "RECIP",
            Attribute::Location => "LOCATION",
            Attribute::Date => "DATE",
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Attribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "ACTOR" => Ok(Attribute::Actor),
            "SECOND_ACTOR" => Ok(Attribute::SecondActor),
            "RECIP" | "RECIPIENT" => Ok(Attribute::Recipient),
            "LOC" | "LOCATION" => Ok(Attribute::Location),
            "DATE" => Ok(Attribute::Date),
            other => Err(Error::Parse(format!("unknown attribute `{other}`"))),
        }
    }
}

/// A span chosen for an attribute together with its aggregated QA score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSlot {
    pub span: Span,
    pub score: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AttributeSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actor: Option<AttributeSlot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_actor: Option<AttributeSlot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipient: Option<AttributeSlot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<AttributeSlot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<AttributeSlot>,
    pub assignment_score: f64,
}

impl AttributeSet {
    pub fn get(&self, attr: Attribute) -> Option<&AttributeSlot> {
        match attr {
            Attribute::Actor => self.actor.as_ref(),
            Attribute::SecondActor => self.second_actor.as_ref(),
            Attribute::Recipient => self.recipient.as_ref(),
            Attribute::Location => self.location.as_ref(),
            Attribute::Date => self.date.as_ref(),
        }
    }

    pub fn slot_mut(&mut self, attr: Attribute) -> &mut Option<AttributeSlot> {
        match attr {
            Attribute::Actor => &mut self.actor,
            Attribute::SecondActor => &mut self.second_actor,
            Attribute::Recipient => &mut self.recipient,
            Attribute::Location => &mut self.location,
            Attribute::Date => &mut self.date,
        }
    }

    /// Filled slots in a fixed attribute order.
    pub fn filled(&self) -> impl Iterator<Item = (Attribute, &AttributeSlot)> {
        [
            Attribute::Actor,
            Attribute::SecondActor,
            Attribute::Recipient,
            Attribute::Location,
            Attribute::Date,
        ]
        .into_iter()
        .filter_map(move |a| self.get(a).map(|s| (a, s)))
    }

    pub fn is_empty(&self) -> bool {
        self.filled().next().is_none()
    }
}

/// Resolution of an actor or recipient mention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodedActor {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wiki: Option<String>,
    pub method: ResolutionMethod,
    pub code: ActorCode,
}

/// Geocoded event location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventLocation {
    pub text: String,
    pub geoname_id: u64,
    pub name: String,
    pub country_code: String,
    pub admin1: String,
    pub lat: f64,
    pub lon: f64,
    pub score: f64,
}

/// Actor/place/date resolutions attached to an event.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Resolutions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actor: Option<CodedActor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_actor: Option<CodedActor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recipient: Option<CodedActor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<EventLocation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<ResolvedDate>,
}

/// One coded event. Serialized field names are stable; consumers join on
/// `doc_id` + `category` + `mode`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub doc_id: String,
    pub category: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default)]
    pub contexts: BTreeSet<String>,
    #[serde(default)]
    pub attributes: AttributeSet,
    #[serde(default)]
    pub resolutions: Resolutions,
    #[serde(default)]
    pub category_score: f64,
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
}

impl EventRecord {
    pub fn new(doc_id: impl Into<String>, category: impl Into<String>) -> Self {
        EventRecord {
            doc_id: doc_id.into(),
            category: category.into(),
            mode: None,
            contexts: BTreeSet::new(),
            attributes: AttributeSet::default(),
            resolutions: Resolutions::default(),
            category_score: 0.0,
            provenance: BTreeMap::new(),
        }
    }
}

/// Per-category attribute multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeRule {
    /// A second actor may fill the recipient's place (e.g. two parties meeting).
    #[serde(default)]
    pub second_actor: bool,
    #[serde(default = "yes")]
    pub recipient: bool,
}

fn yes() -> bool {
    true
}

impl Default for AttributeRule {
    fn default() -> Self {
        AttributeRule {
            second_actor: false,
            recipient: true,
        }
    }
}

/// Event categories, their modes, contexts, and attribute rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    categories: Vec<String>,
    modes: BTreeMap<String, Vec<String>>,
    contexts: Vec<String>,
    rules: BTreeMap<String, AttributeRule>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OntologyFile {
    categories: Vec<String>,
    contexts: Vec<String>,
    modes: BTreeMap<String, Vec<String>>,
    attribute_rules: BTreeMap<String, AttributeRule>,
}

impl Ontology {
    /// Parse and validate an ontology configuration (TOML).
    pub fn from_toml(src: &str) -> Result<Self> {
        let file: OntologyFile =
            toml::from_str(src).map_err(|e| Error::Parse(format!("ontology: {e}")))?;
        Self::build(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read_file(path)?)
    }

    /// The bundled default (PLOVER-style) ontology.
    pub fn default_plover() -> Self {
        Self::from_toml(include_str!("../data/ontology.toml"))
            .expect("bundled ontology is valid")
    }

    fn build(file: OntologyFile) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in file.categories.iter().chain(&file.contexts) {
            check_name(name)?;
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let categories: BTreeSet<&str> = file.categories.iter().map(String::as_str).collect();

        let mut modes = BTreeMap::new();
        for (category, list) in file.modes {
            if !categories.contains(category.as_str()) {
                let mode = list.first().cloned().unwrap_or_default();
                return Err(Error::OrphanMode {
                    mode: format!("{category}-{}", strip_mode_prefix(&category, &mode)),
                    category,
                });
            }
            let mut names = Vec::with_capacity(list.len());
            let mut local = BTreeSet::new();
            for raw in &list {
                if let Some((prefix, _)) = raw.split_once('-') {
                    if categories.contains(prefix) && prefix != category {
                        return Err(Error::OrphanMode {
                            category: category.clone(),
                            mode: raw.clone(),
                        });
                    }
                }
                let mode = strip_mode_prefix(&category, raw).to_string();
                check_name(&mode)?;
                if !local.insert(mode.clone()) {
                    return Err(Error::DuplicateName(format!("{category}-{mode}")));
                }
                names.push(mode);
            }
            if !names.is_empty() {
                modes.insert(category, names);
            }
        }

        let default_rule = file.attribute_rules.get("default").copied().unwrap_or_default();
        let mut rules = BTreeMap::new();
        for (key, rule) in &file.attribute_rules {
            if key != "default" && !categories.contains(key.as_str()) {
                return Err(Error::Config(format!(
                    "attribute rule for unknown category `{key}`"
                )));
            }
            if key != "default" {
                rules.insert(key.clone(), *rule);
            }
        }
        for c in &file.categories {
            rules.entry(c.clone()).or_insert(default_rule);
        }

        Ok(Ontology {
            categories: file.categories,
            modes,
            contexts: file.contexts,
            rules,
        })
    }

    /// Serialize with every category's rule spelled out; parses back equal.
    pub fn to_toml(&self) -> String {
        let file = OntologyFile {
            categories: self.categories.clone(),
            contexts: self.contexts.clone(),
            modes: self.modes.clone(),
            attribute_rules: self.rules.clone(),
        };
        toml::to_string(&file).expect("ontology serializes")
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn contexts(&self) -> &[String] {
        &self.contexts
    }

    pub fn has_category(&self, c: &str) -> bool {
        self.categories.iter().any(|x| x == c)
    }

    pub fn has_context(&self, c: &str) -> bool {
        self.contexts.iter().any(|x| x == c)
    }

    /// Modes of `category` (empty when it has none).
    pub fn modes(&self, category: &str) -> &[String] {
        self.modes.get(category).map_or(&[], Vec::as_slice)
    }

    pub fn has_mode(&self, category: &str, mode: &str) -> bool {
        self.modes(category).iter().any(|m| m == mode)
    }

    pub fn rule(&self, category: &str) -> AttributeRule {
        self.rules.get(category).copied().unwrap_or_default()
    }

    /// Scorer labels for the modes of `category` (`CATEGORY-mode`).
    pub fn mode_labels(&self, category: &str) -> Vec<String> {
        self.modes(category)
            .iter()
            .map(|m| mode_label(category, m))
            .collect()
    }
}

/// Scorer label for a mode.
pub fn mode_label(category: &str, mode: &str) -> String {
    format!("{category}-{mode}")
}

fn strip_mode_prefix<'a>(category: &str, mode: &'a str) -> &'a str {
    mode.strip_prefix(category)
        .and_then(|m| m.strip_prefix('-'))
        .unwrap_or(mode)
}

fn check_name(name: &str) -> Result<()> {
    if name.trim().is_empty() || name.trim() != name {
        return Err(Error::Config(format!("invalid name `{name}`")));
    }
    Ok(())
}

/// One broken rule found by [`validate_record`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownCategory(String),
    UnknownMode { category: String, mode: String },
    UnknownContext(String),
    SecondActorNotAllowed,
    RecipientNotAllowed,
    SecondActorWithRecipient,
    SpanReused { text: String },
    BadOffsets(Attribute),
}

/// Check membership and attribute multiplicity; returns all violations found
/// (an empty list means the record is valid).
pub fn validate_record(rec: &EventRecord, ont: &Ontology) -> Vec<Violation> {
    let mut out = Vec::new();
    if !ont.has_category(&rec.category) {
        out.push(Violation::UnknownCategory(rec.category.clone()));
    }
    if let Some(mode) = &rec.mode {
        if !ont.has_mode(&rec.category, mode) {
            out.push(Violation::UnknownMode {
                category: rec.category.clone(),
                mode: mode.clone(),
            });
        }
    }
    for c in &rec.contexts {
        if !ont.has_context(c) {
            out.push(Violation::UnknownContext(c.clone()));
        }
    }

    let rule = ont.rule(&rec.category);
    let attrs = &rec.attributes;
    if attrs.second_actor.is_some() {
        if !rule.second_actor {
            out.push(Violation::SecondActorNotAllowed);
        } else if attrs.recipient.is_some() {
            out.push(Violation::SecondActorWithRecipient);
        }
    }
    if attrs.recipient.is_some() && !rule.recipient {
        out.push(Violation::RecipientNotAllowed);
    }

    let mut seen = BTreeSet::new();
    for (attr, slot) in attrs.filled() {
        if !seen.insert(slot.span.text.as_str()) {
            out.push(Violation::SpanReused {
                text: slot.span.text.clone(),
            });
        }
        if let Some((s, e)) = slot.span.range() {
            if s >= e {
                out.push(Violation::BadOffsets(attr));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slot(text: &str) -> Option<AttributeSlot> {
        Some(AttributeSlot {
            span: Span::synthetic(text),
            score: 1.0,
        })
    }

    #[test]
    fn default_ontology_has_sixteen_categories() {
        let ont = Ontology::default_plover();
        assert_eq!(ont.categories().len(), 16);
        assert_eq!(ont.modes("ACCUSE"), ["allege", "disapprove", "investigate"]);
        assert!(ont.has_mode("PROTEST", "riot"));
        assert!(ont.rule("CONSULT").second_actor);
        assert!(!ont.rule("PROTEST").second_actor);
    }

    #[test]
    fn orphan_mode_rejected() {
        let src = r#"
            categories = ["PROTEST"]
            contexts = []
            [modes]
            X = ["X-foo"]
            [attribute_rules.default]
        "#;
        match Ontology::from_toml(src) {
            Err(Error::OrphanMode { category, mode }) => {
                assert_eq!(category, "X");
                assert_eq!(mode, "X-foo");
            }
            other => panic!("expected orphan mode, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_names_rejected() {
        let src = r#"
            categories = ["PROTEST", "PROTEST"]
            contexts = []
            [modes]
            [attribute_rules.default]
        "#;
        assert!(matches!(Ontology::from_toml(src), Err(Error::DuplicateName(n)) if n == "PROTEST"));
        let src = r#"
            categories = ["PROTEST"]
            contexts = []
            [modes]
            PROTEST = ["riot", "PROTEST-riot"]
            [attribute_rules.default]
        "#;
        assert!(matches!(Ontology::from_toml(src), Err(Error::DuplicateName(_))));
    }

    #[test]
    fn missing_section_is_parse_error() {
        let src = r#"categories = ["A"]
            contexts = []"#;
        assert!(matches!(Ontology::from_toml(src), Err(Error::Parse(_))));
    }

    #[test]
    fn consult_with_two_actors_is_valid() {
        let ont = Ontology::default_plover();
        let mut rec = EventRecord::new("d1", "CONSULT");
        rec.attributes.actor = slot("President Obama");
        rec.attributes.second_actor = slot("Emmanuel Macron");
        assert!(validate_record(&rec, &ont).is_empty());

        rec.attributes.recipient = slot("reporters");
        assert_eq!(
            validate_record(&rec, &ont),
            [Violation::SecondActorWithRecipient]
        );
    }

    #[test]
    fn protest_riot_valid_and_bad_context_reported() {
        let ont = Ontology::default_plover();
        let mut rec = EventRecord::new("d1", "PROTEST");
        rec.mode = Some("riot".into());
        assert!(validate_record(&rec, &ont).is_empty());
        rec.contexts.insert("astrology".into());
        rec.attributes.second_actor = slot("x");
        let v = validate_record(&rec, &ont);
        assert!(v.contains(&Violation::UnknownContext("astrology".into())));
        assert!(v.contains(&Violation::SecondActorNotAllowed));
    }

    #[test]
    fn reused_span_is_a_violation() {
        let ont = Ontology::default_plover();
        let mut rec = EventRecord::new("d1", "PROTEST");
        rec.attributes.actor = slot("police");
        rec.attributes.recipient = slot("police");
        assert_eq!(
            validate_record(&rec, &ont),
            [Violation::SpanReused {
                text: "police".into()
            }]
        );
    }

    #[test]
    fn span_overlap_and_consistency() {
        let a = Span::new("Aybak", 10, 15);
        assert!(a.overlaps(&Span::new("in Aybak", 7, 15)));
        assert!(!a.overlaps(&Span::new("x", 15, 16)));
        assert!(!a.overlaps(&Span::synthetic("Aybak")));
        assert!(Span::new("cd", 2, 4).is_consistent_with("abcdef"));
        assert!(!Span::new("cx", 2, 4).is_consistent_with("abcdef"));
    }
}
