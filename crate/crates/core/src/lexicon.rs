//! Stanza-format term lists and the baseline lexicon scorer.
//!
//! File format: a `[label]` header line opens a stanza; each following
//! non-blank line is one keyword or phrase. `#` starts a comment line.
//! Matching is case-folded over word tokens; a trailing `*` on a word matches
//! any suffix (`riot*` matches "rioted").

use std::collections::BTreeMap;
use std::path::Path;

use crate::backend::Scorer;
use crate::error::{read_file, BackendError, Error, Result};
use crate::model::ScoredLabel;
use crate::text;

/// Per-label keyword lists, in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermLists {
    lists: BTreeMap<String, Vec<Vec<String>>>,
}

impl TermLists {
    pub fn parse(src: &str) -> Result<Self> {
        let mut lists: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (i, raw) in src.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(label) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let label = label.trim();
                if label.is_empty() {
                    return Err(Error::Line {
                        line: i + 1,
                        message: "empty stanza label".into(),
                    });
                }
                if lists.contains_key(label) {
                    return Err(Error::Line {
                        line: i + 1,
                        message: format!("duplicate stanza `{label}`"),
                    });
                }
                lists.insert(label.to_string(), Vec::new());
                current = Some(label.to_string());
                continue;
            }
            let Some(label) = &current else {
                return Err(Error::Line {
                    line: i + 1,
                    message: "keyword outside of a [label] stanza".into(),
                });
            };
            let toks: Vec<String> = line
                .split_whitespace()
                .map(|w| {
                    let star = w.ends_with('*');
                    let mut t = text::folded_tokens(w).join(" ");
                    if star {
                        t.push('*');
                    }
                    t
                })
                .filter(|t| !t.is_empty() && t != "*")
                .collect();
            if toks.is_empty() {
                return Err(Error::Line {
                    line: i + 1,
                    message: format!("unusable keyword `{line}`"),
                });
            }
            lists.get_mut(label).expect("stanza exists").push(toks);
        }
        if let Some((label, _)) = lists.iter().find(|(_, v)| v.is_empty()) {
            return Err(Error::Parse(format!("stanza `{label}` has no keywords")));
        }
        Ok(TermLists { lists })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_file(path)?)
    }

    pub fn get(&self, label: &str) -> Option<&[Vec<String>]> {
        self.lists.get(label).map(Vec::as_slice)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.lists.keys().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// Any keyword of `label` occurs in the folded tokens. `None` when the
    /// label has no list.
    pub fn matches(&self, label: &str, folded: &[String]) -> Option<bool> {
        self.get(label)
            .map(|terms| terms.iter().any(|t| text::contains_token_seq(folded, t)))
    }

    /// Total keyword occurrences for `label` (0 when it has no list).
    pub fn hits(&self, label: &str, folded: &[String]) -> usize {
        self.get(label).map_or(0, |terms| {
            terms
                .iter()
                .map(|t| text::count_token_seq(folded, t))
                .sum()
        })
    }
}

/// Keyword scorer: `score = 1 / (1 + exp(-(slope * hits - offset)))`, where
/// `hits` counts lexicon occurrences. Positive iff score ≥ 0.5.
#[derive(Debug, Clone)]
pub struct LexiconScorer {
    lexicon: TermLists,
    name: String,
    slope: f64,
    offset: f64,
}

impl LexiconScorer {
    pub fn new(name: impl Into<String>, lexicon: TermLists) -> Self {
        LexiconScorer {
            lexicon,
            name: name.into(),
            slope: 2.0,
            offset: 1.0,
        }
    }

    pub fn with_shape(mut self, slope: f64, offset: f64) -> Self {
        self.slope = slope;
        self.offset = offset;
        self
    }

    pub fn lexicon(&self) -> &TermLists {
        &self.lexicon
    }

    /// Score for a given hit count.
    pub fn logistic(&self, hits: usize) -> f64 {
        1.0 / (1.0 + (-(self.slope * hits as f64 - self.offset)).exp())
    }
}

impl Scorer for LexiconScorer {
    fn id(&self) -> String {
        format!("lexicon:{}@1", self.name)
    }

    fn score(&self, text: &str, labels: &[String]) -> Result<Vec<ScoredLabel>, BackendError> {
        let folded = text::folded_tokens(text);
        Ok(labels
            .iter()
            .map(|l| {
                let s = self.logistic(self.lexicon.hits(l, &folded));
                ScoredLabel::new(l.clone(), s, s >= 0.5)
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = "# test\n[PROTEST]\ndemonstration\nriot*\nhunger strike\n\n[military]\ntroops\n";

    #[test]
    fn parses_stanzas() {
        let t = TermLists::parse(SRC).unwrap();
        assert_eq!(t.labels().collect::<Vec<_>>(), ["PROTEST", "military"]);
        assert_eq!(t.get("PROTEST").unwrap()[2], ["hunger", "strike"]);
        assert_eq!(t.get("PROTEST").unwrap()[1], ["riot*"]);
    }

    #[test]
    fn rejects_orphan_keyword_and_empty_stanza() {
        assert!(matches!(
            TermLists::parse("troops\n"),
            Err(Error::Line { line: 1, .. })
        ));
        assert!(TermLists::parse("[a]\n[b]\nx\n").is_err());
        assert!(TermLists::parse("[a]\nx\n[a]\ny\n").is_err());
    }

    #[test]
    fn demonstration_scores_positive_for_protest() {
        let s = LexiconScorer::new("test", TermLists::parse(SRC).unwrap());
        let out = s
            .score(
                "Thousands joined a demonstration in the capital.",
                &["PROTEST".into(), "military".into()],
            )
            .unwrap();
        assert!(out[0].score > 0.5 && out[0].positive);
        assert!(out[1].score < 0.5 && !out[1].positive);
    }

    #[test]
    fn empty_label_list_gives_empty_result() {
        let s = LexiconScorer::new("test", TermLists::parse(SRC).unwrap());
        assert!(s.score("anything", &[]).unwrap().is_empty());
    }

    #[test]
    fn score_increases_with_hits() {
        let s = LexiconScorer::new("test", TermLists::default());
        assert!(s.logistic(0) < s.logistic(1) && s.logistic(1) < s.logistic(2));
        assert!((s.logistic(0) - 0.2689414213699951).abs() < 1e-12);
    }
}
