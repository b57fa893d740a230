//! Story cleaning, story-level keep/drop filters, and negated-sentence removal.

use std::path::Path;

use log::warn;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::backend::{NegationAnnotator, Scorer, SentenceInfo};
use crate::error::{read_file, BackendError, Error, Result};
use crate::model::Document;
use crate::text;

/// Characters of cleaned text fed to the classifiers.
pub const CODED_CHARS: usize = 1024;

const MAX_CLEAN_PASSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterReason {
    Ok,
    TooLong,
    TooShort,
    MostlyNumeric,
    Composite,
    Crime,
    Disaster,
    Financial,
    /// Not decided at story level; applied after actor/place resolution.
    UsDomesticPending,
}

impl FilterReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterReason::Ok => "ok",
            FilterReason::TooLong => "too_long",
            FilterReason::TooShort => "too_short",
            FilterReason::MostlyNumeric => "mostly_numeric",
            FilterReason::Composite => "composite",
            FilterReason::Crime => "crime",
            FilterReason::Disaster => "disaster",
            FilterReason::Financial => "financial",
            FilterReason::UsDomesticPending => "us_domestic_pending",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub keep: bool,
    pub reason: FilterReason,
}

impl FilterVerdict {
    pub const KEEP: FilterVerdict = FilterVerdict {
        keep: true,
        reason: FilterReason::Ok,
    };

    fn drop(reason: FilterReason) -> Self {
        FilterVerdict {
            keep: false,
            reason,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CleanRulesFile {
    #[serde(default)]
    dateline_patterns: Vec<String>,
    #[serde(default)]
    boilerplate_patterns: Vec<String>,
    #[serde(default = "default_min")]
    min_chars: usize,
    #[serde(default = "default_max")]
    max_chars: usize,
    #[serde(default = "default_numeric")]
    numeric_ratio_limit: f64,
    #[serde(default)]
    composite_markers: Vec<String>,
}

fn default_min() -> usize {
    100
}
fn default_max() -> usize {
    12_000
}
fn default_numeric() -> f64 {
    0.5
}

/// Compiled cleaning and filtering rules. Patterns use the `regex` crate
/// dialect (RE2-like; no look-around or backreferences).
#[derive(Debug, Clone)]
pub struct CleanRules {
    pub dateline_patterns: Vec<Regex>,
    pub boilerplate_patterns: Vec<Regex>,
    pub min_chars: usize,
    pub max_chars: usize,
    pub numeric_ratio_limit: f64,
    pub composite_markers: Vec<Regex>,
}

impl CleanRules {
    pub fn from_toml(src: &str) -> Result<Self> {
        let f: CleanRulesFile =
            toml::from_str(src).map_err(|e| Error::Parse(format!("clean rules: {e}")))?;
        let compile = |pats: &[String]| -> Result<Vec<Regex>> {
            pats.iter()
                .map(|p| Regex::new(p).map_err(|e| Error::Parse(format!("pattern `{p}`: {e}"))))
                .collect()
        };
        if f.min_chars >= f.max_chars {
            return Err(Error::Config("min_chars must be below max_chars".into()));
        }
        if !(f.numeric_ratio_limit > 0.0 && f.numeric_ratio_limit < 1.0) {
            return Err(Error::Config("numeric_ratio_limit must lie in (0, 1)".into()));
        }
        Ok(CleanRules {
            dateline_patterns: compile(&f.dateline_patterns)?,
            boilerplate_patterns: compile(&f.boilerplate_patterns)?,
            min_chars: f.min_chars,
            max_chars: f.max_chars,
            numeric_ratio_limit: f.numeric_ratio_limit,
            composite_markers: compile(&f.composite_markers)?,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&read_file(path)?)
    }

    /// The bundled rule set.
    pub fn bundled() -> Self {
        Self::from_toml(include_str!("../data/clean_rules.toml")).expect("bundled rules are valid")
    }

    /// Strip boilerplate and datelines, normalize whitespace. Repeats until
    /// nothing changes so that cleaning is idempotent.
    pub fn clean(&self, raw: &str) -> String {
        let mut cur = text::squeeze_whitespace(raw);
        for _ in 0..MAX_CLEAN_PASSES {
            let mut next = cur.clone();
            for re in &self.boilerplate_patterns {
                next = re.replace_all(&next, "").into_owned();
            }
            for re in &self.dateline_patterns {
                next = re.replace(&next, "").into_owned();
            }
            let next = text::squeeze_whitespace(&next);
            if next == cur {
                break;
            }
            cur = next;
        }
        cur
    }
}

/// Fill `cleaned_text` and `coded_text` (first 1024 characters of the cleaned
/// text). Derived from `raw_text` only, so repeated calls agree.
pub fn prepare_text(doc: &Document, rules: &CleanRules) -> Result<Document> {
    if doc.raw_text.trim().is_empty() {
        return Err(Error::EmptyText);
    }
    let cleaned = rules.clean(&doc.raw_text);
    if cleaned.is_empty() {
        return Err(Error::EmptyText);
    }
    let mut out = doc.clone();
    out.coded_text = text::char_prefix(&cleaned, CODED_CHARS).to_string();
    out.cleaned_text = cleaned;
    Ok(out)
}

/// Replace the cleaned text (e.g. after negation removal) and recompute the
/// coded prefix.
pub fn set_cleaned_text(doc: &mut Document, cleaned: String) {
    doc.coded_text = text::char_prefix(&cleaned, CODED_CHARS).to_string();
    doc.cleaned_text = cleaned;
}

/// Optional binary scorers for the content filters. Each is asked for its own
/// label (`financial`, `crime`, `disaster`).
#[derive(Clone, Copy, Default)]
pub struct StoryScorers<'a> {
    pub financial: Option<&'a dyn Scorer>,
    pub crime: Option<&'a dyn Scorer>,
    pub disaster: Option<&'a dyn Scorer>,
}

/// Share of digit characters among non-whitespace characters.
pub fn numeric_ratio(s: &str) -> f64 {
    let mut digits = 0usize;
    let mut total = 0usize;
    for c in s.chars().filter(|c| !c.is_whitespace()) {
        total += 1;
        if c.is_ascii_digit() {
            digits += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        digits as f64 / total as f64
    }
}

/// Apply the story filters in fixed order: too_short, too_long,
/// mostly_numeric, composite, financial, crime, disaster. The first failing
/// rule is returned. A scorer error lets the story through (logged).
pub fn filter_story(doc: &Document, rules: &CleanRules, scorers: StoryScorers<'_>) -> FilterVerdict {
    let body = if doc.cleaned_text.is_empty() {
        &doc.coded_text
    } else {
        &doc.cleaned_text
    };
    let n = text::char_len(body);
    if n < rules.min_chars {
        return FilterVerdict::drop(FilterReason::TooShort);
    }
    if n > rules.max_chars {
        return FilterVerdict::drop(FilterReason::TooLong);
    }
    if numeric_ratio(body) > rules.numeric_ratio_limit {
        return FilterVerdict::drop(FilterReason::MostlyNumeric);
    }
    if rules.composite_markers.iter().any(|re| re.is_match(body)) {
        return FilterVerdict::drop(FilterReason::Composite);
    }
    let checks = [
        (scorers.financial, "financial", FilterReason::Financial),
        (scorers.crime, "crime", FilterReason::Crime),
        (scorers.disaster, "disaster", FilterReason::Disaster),
    ];
    for (scorer, label, reason) in checks {
        let Some(scorer) = scorer else { continue };
        match scorer.score(&doc.coded_text, &[label.to_string()]) {
            Ok(scores) if scores.first().is_some_and(|s| s.positive) => {
                return FilterVerdict::drop(reason)
            }
            Ok(_) => {}
            Err(e) => warn!("{}: {label} filter unavailable, keeping story: {e}", doc.id),
        }
    }
    FilterVerdict::KEEP
}

/// Delete sentences whose main verb is negated ("will not sign"). Sentence
/// order is preserved and the result is never longer than the input. On
/// annotator failure the input is returned unchanged.
pub fn remove_negated_sentences(text: &str, annotator: &dyn NegationAnnotator) -> String {
    let sentences = match annotator.annotate(text) {
        Ok(s) => s,
        Err(e) => {
            warn!("negation annotator failed, text left unchanged: {e}");
            return text.to_string();
        }
    };
    if !sentences.iter().any(|s| s.negated) {
        return text.to_string();
    }
    let mut out = String::with_capacity(text.len());
    let mut prev_end = 0usize;
    let mut wrote = false;
    for s in &sentences {
        if !s.negated {
            if wrote {
                out.push_str(&text[prev_end..s.start]);
            }
            out.push_str(&text[s.start..s.end]);
            wrote = true;
        }
        prev_end = s.end;
    }
    out
}

/// Rule-based sentence splitter and negation detector.
///
/// A sentence counts as negated when an auxiliary or modal is directly
/// negated ("will not", "didn't", "cannot", "has never"). Lexically negative
/// verbs ("denied", "rejected") are not negation.
#[derive(Debug, Clone)]
pub struct RuleNegation {
    cue: Regex,
}

const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "st", "gen", "col", "lt", "sgt", "capt", "gov", "sen", "rep",
    "prof", "jr", "sr", "no", "vs", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep",
    "sept", "oct", "nov", "dec", "inc", "corp", "co", "ltd", "maj", "adm", "cmdr", "pres",
];

impl Default for RuleNegation {
    fn default() -> Self {
        let aux = "will|would|shall|should|can|could|may|might|must|do|does|did|is|are|was|were|has|have|had|be";
        let contracted = "won|wouldn|shan|shouldn|couldn|mustn|don|doesn|didn|isn|aren|wasn|weren|hasn|haven|hadn|can|ain";
        let pattern = format!(
            r"(?i)\b(?:(?:{aux})\s+(?:not|never)\b|(?:{contracted})['’]t\b|cannot\b)"
        );
        RuleNegation {
            cue: Regex::new(&pattern).expect("negation cue pattern"),
        }
    }
}

impl RuleNegation {
    pub fn sentences(text: &str) -> Vec<(usize, usize)> {
        let bytes = text.as_bytes();
        let mut out = Vec::new();
        let mut start = None::<usize>;
        let mut i = 0usize;
        while i < text.len() {
            let c = text[i..].chars().next().expect("in bounds");
            let clen = c.len_utf8();
            if start.is_none() {
                if !c.is_whitespace() {
                    start = Some(i);
                }
                i += clen;
                continue;
            }
            let st = start.expect("checked");
            if c == '\n' && bytes.get(i + 1) == Some(&b'\n') {
                out.push((st, trim_end_idx(text, st, i)));
                start = None;
                i += clen;
                continue;
            }
            if matches!(c, '.' | '!' | '?') {
                // absorb closing quotes/brackets
                let mut j = i + clen;
                while let Some(q) = text[j..].chars().next() {
                    if matches!(q, '"' | '\'' | '’' | '”' | ')' | ']') {
                        j += q.len_utf8();
                    } else {
                        break;
                    }
                }
                let next = text[j..].chars().next();
                let boundary = match next {
                    None => true,
                    Some(n) if n.is_whitespace() => {
                        let after = text[j..].trim_start().chars().next();
                        after.map_or(true, |a| {
                            a.is_uppercase() || a.is_ascii_digit() || matches!(a, '"' | '“' | '\'' | '‘' | '(')
                        }) && !(c == '.' && is_abbreviation(&text[st..i]))
                    }
                    _ => false,
                };
                if boundary {
                    out.push((st, j));
                    start = None;
                    i = j;
                    continue;
                }
            }
            i += clen;
        }
        if let Some(st) = start {
            out.push((st, trim_end_idx(text, st, text.len())));
        }
        out
    }
}

fn trim_end_idx(text: &str, start: usize, end: usize) -> usize {
    start + text[start..end].trim_end().len()
}

fn is_abbreviation(before: &str) -> bool {
    let word = before
        .rsplit(|c: char| c.is_whitespace() || c == '(')
        .next()
        .unwrap_or("");
    let bare = word.trim_start_matches(|c: char| !c.is_alphanumeric());
    if bare.is_empty() {
        return false;
    }
    // initials and dotted acronyms: "U.S", "J"
    if bare.split('.').all(|p| p.chars().count() == 1) {
        return true;
    }
    ABBREVIATIONS.contains(&bare.to_lowercase().as_str())
}

impl NegationAnnotator for RuleNegation {
    fn annotate(&self, text: &str) -> Result<Vec<SentenceInfo>, BackendError> {
        Ok(Self::sentences(text)
            .into_iter()
            .map(|(start, end)| SentenceInfo {
                start,
                end,
                negated: self.cue.is_match(&text[start..end]),
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{LexiconScorer, TermLists};
    use chrono::NaiveDate;

    fn doc(text: &str) -> Document {
        Document::new("d", NaiveDate::from_ymd_opt(2022, 11, 30).unwrap(), text)
    }

    fn prepared(text: &str) -> Document {
        prepare_text(&doc(text), &CleanRules::bundled()).unwrap()
    }

    #[test]
    fn strips_reuters_dateline() {
        let d = prepared("LONDON (Reuters) - Talks began on Monday between the two sides.");
        assert!(d.cleaned_text.starts_with("Talks began"), "{}", d.cleaned_text);
    }

    #[test]
    fn truncates_to_1024_chars() {
        let body = "Talks continued for another day. ".repeat(100);
        let d = prepared(&body);
        assert!(text::char_len(&d.cleaned_text) > 3000);
        assert_eq!(text::char_len(&d.coded_text), CODED_CHARS);
        assert!(d.cleaned_text.starts_with(&d.coded_text));
    }

    #[test]
    fn short_text_is_not_truncated() {
        let body = "x".repeat(500);
        let d = prepared(&body);
        assert_eq!(d.coded_text, d.cleaned_text);
    }

    #[test]
    fn empty_after_cleaning_is_error() {
        let r = prepare_text(&doc("PHOTO: file image\n"), &CleanRules::bundled());
        assert!(matches!(r, Err(Error::EmptyText)));
        assert!(matches!(prepare_text(&doc("  "), &CleanRules::bundled()), Err(Error::EmptyText)));
    }

    #[test]
    fn filter_order_examples() {
        let rules = CleanRules::bundled();
        let v = filter_story(&prepared("Forty characters of a broken headline."), &rules, StoryScorers::default());
        assert_eq!(v, FilterVerdict { keep: false, reason: FilterReason::TooShort });

        let numeric = "12 34 56 78 90 12 34 56 scores ".repeat(8);
        assert!(numeric_ratio(&numeric) > 0.5);
        let v = filter_story(&prepared(&numeric), &rules, StoryScorers::default());
        assert_eq!(v.reason, FilterReason::MostlyNumeric);

        let composite = "TOP STORIES: • Headline one about the budget • Headline two about a strike • Headline three about floods in the north of the country";
        let v = filter_story(&prepared(composite), &rules, StoryScorers::default());
        assert_eq!(v.reason, FilterReason::Composite);
    }

    #[test]
    fn scorer_filters_follow_fixed_order() {
        let lex = TermLists::parse("[crime]\nmurder*\n[disaster]\nearthquake\n[financial]\nshares\n").unwrap();
        let s = LexiconScorer::new("filters", lex);
        let scorers = StoryScorers { financial: Some(&s), crime: Some(&s), disaster: Some(&s) };
        let rules = CleanRules::bundled();
        let text = "Police said the murder happened hours after the earthquake struck the coastal town, and shares in local firms slid.";
        assert_eq!(filter_story(&prepared(text), &rules, scorers).reason, FilterReason::Financial);
        let text = "Police said the murder happened hours after the earthquake struck the coastal town where residents gathered.";
        assert_eq!(filter_story(&prepared(text), &rules, scorers).reason, FilterReason::Crime);
        let ok = "Ministers from both countries met in the capital to discuss a new trade arrangement and border security.";
        assert_eq!(filter_story(&prepared(ok), &rules, scorers), FilterVerdict::KEEP);
    }

    struct Broken;
    impl Scorer for Broken {
        fn id(&self) -> String {
            "broken".into()
        }
        fn score(&self, _: &str, _: &[String]) -> Result<Vec<crate::model::ScoredLabel>, BackendError> {
            Err(BackendError::Unavailable("down".into()))
        }
    }

    #[test]
    fn scorer_failure_fails_open() {
        let text = "Ministers from both countries met in the capital to discuss a new trade arrangement and border security.";
        let v = filter_story(
            &prepared(text),
            &CleanRules::bundled(),
            StoryScorers { crime: Some(&Broken), ..Default::default() },
        );
        assert_eq!(v, FilterVerdict::KEEP);
    }

    #[test]
    fn negated_sentence_removed() {
        let neg = RuleNegation::default();
        assert_eq!(
            remove_negated_sentences("They will not sign the treaty. They met Tuesday.", &neg),
            "They met Tuesday."
        );
        let plain = "They met Tuesday. Talks went on.";
        assert_eq!(remove_negated_sentences(plain, &neg), plain);
        let denied = "He denied the attack occurred.";
        assert_eq!(remove_negated_sentences(denied, &neg), denied);
        assert_eq!(
            remove_negated_sentences("Officials didn't comment. Mr. Smith arrived.", &neg),
            "Mr. Smith arrived."
        );
    }

    #[test]
    fn sentence_splitter_respects_abbreviations() {
        let s = "U.S. troops arrived. Gen. Smith said so! Was it \"true?\" Yes.";
        let parts: Vec<_> = RuleNegation::sentences(s).into_iter().map(|(a, b)| &s[a..b]).collect();
        assert_eq!(parts, ["U.S. troops arrived.", "Gen. Smith said so!", "Was it \"true?\"", "Yes."]);
    }

    struct FailingAnnotator;
    impl NegationAnnotator for FailingAnnotator {
        fn annotate(&self, _: &str) -> Result<Vec<SentenceInfo>, BackendError> {
            Err(BackendError::Other("nope".into()))
        }
    }

    #[test]
    fn annotator_failure_returns_input() {
        let t = "They will not sign. Fine.";
        assert_eq!(remove_negated_sentences(t, &FailingAnnotator), t);
    }
}
