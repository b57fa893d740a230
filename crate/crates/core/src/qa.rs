//! QA backends that run without a model service: replay of recorded answers,
//! and a rule-based baseline.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::Arc;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::backend::{QaAnswer, QaBackend};
use crate::error::{read_file, BackendError, Error, Result};
use crate::preprocess::RuleNegation;
use crate::temporal::find_dates;
use crate::text::{self, Token};

/// One line of a recording file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaRecord {
    pub context: String,
    pub question: String,
    pub answer: Option<QaAnswer>,
}

/// Replays answers captured from a reference QA model. Questions not in the
/// recording go to the fallback backend, or are unanswerable without one.
#[derive(Clone, Default)]
pub struct RecordedQa {
    name: String,
    answers: HashMap<(String, String), Option<QaAnswer>>,
    fallback: Option<Arc<dyn QaBackend>>,
}

impl RecordedQa {
    pub fn from_records(name: impl Into<String>, records: impl IntoIterator<Item = QaRecord>) -> Self {
        RecordedQa {
            name: name.into(),
            answers: records
                .into_iter()
                .map(|r| ((r.context, r.question), r.answer))
                .collect(),
            fallback: None,
        }
    }

    pub fn parse(name: impl Into<String>, jsonl: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (i, line) in jsonl.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let r: QaRecord = serde_json::from_str(line).map_err(|e| Error::Line {
                line: i + 1,
                message: e.to_string(),
            })?;
            records.push(r);
        }
        Ok(Self::from_records(name, records))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let name = path
            .file_stem()
            .map_or_else(|| "recorded".to_string(), |s| s.to_string_lossy().into_owned());
        Self::parse(name, &read_file(path)?)
    }

    pub fn with_fallback(mut self, fallback: Arc<dyn QaBackend>) -> Self {
        self.fallback = Some(fallback);
        self
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }
}

impl QaBackend for RecordedQa {
    fn id(&self) -> String {
        match &self.fallback {
            Some(f) => format!("recorded:{}+{}", self.name, f.id()),
            None => format!("recorded:{}", self.name),
        }
    }

    fn answer(&self, context: &str, question: &str) -> Result<Option<QaAnswer>, BackendError> {
        match self.answers.get(&(context.to_string(), question.to_string())) {
            Some(a) => Ok(a.clone()),
            None => match &self.fallback {
                Some(f) => f.answer(context, question),
                None => Ok(None),
            },
        }
    }
}

/// Rule-based extractive baseline. Reads the first sentence as
/// subject-verb-object, takes places from preposition phrases and dates from
/// the date finder. Scores are fixed per rule.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeuristicQa;

const SUBJECT_SCORE: f64 = 0.7;
const OBJECT_SCORE: f64 = 0.6;
const PLACE_SCORE: f64 = 0.8;
const DATE_SCORE: f64 = 0.7;

const VERBS: &[&str] = &[
    "said", "says", "held", "holds", "met", "meet", "meets", "is", "are", "was", "were", "will",
    "would", "has", "have", "had", "attack", "attacks", "killed", "kills", "struck", "strikes",
    "threatened", "threatens", "signed", "signs", "accused", "accuses", "demanded", "demands",
    "rejected", "rejects", "urged", "urges", "called", "calls", "sent", "sends", "gave", "gives",
    "took", "takes", "fought", "fight", "fights", "shot", "seized", "seizes", "marched", "march",
    "protest", "protested", "rallied", "rioted", "arrested", "arrests", "detained", "bombed",
    "agreed", "agrees", "talked", "talks", "visited", "visits", "withdrew", "withdraws",
    "imposed", "imposes", "condemned", "condemns", "denied", "denies", "pledged", "pledges",
    "deployed", "deploys", "announced", "announces", "launched", "launches", "expelled",
    "began", "begin", "begins", "hit", "hits", "can", "could", "may", "might", "must", "did",
];

const LINKS: &[&str] = &["against", "with", "on", "to", "at", "into", "upon", "toward", "towards"];

const STOPS: &[&str] = &[
    "in", "at", "on", "near", "during", "after", "before", "over", "for", "from", "last", "this",
    "next", "and", "but", "as", "while", "when", "where", "which", "who", "that", "by", "outside",
    "across", "amid", "following", "early", "late", "earlier", "later", "since", "until",
];

const PLACE_PREPS: &[&str] = &["in", "at", "near", "outside", "across", "throughout", "around"];

const RECIPIENT_CUES: &[&str] = &[
    "against", "target", "targeted", "directed", "whom", "victim", "victims", "attacked",
    "receive", "received", "recipient",
];

fn verbish(t: &str) -> bool {
    let f = t.to_lowercase();
    VERBS.contains(&f.as_str())
        || (t.chars().next().is_some_and(char::is_lowercase) && f.len() > 4 && f.ends_with("ed"))
}

fn capitalized(t: &str) -> bool {
    t.chars().next().is_some_and(char::is_uppercase)
}

/// Byte ranges of the first sentence's subject and object.
fn svo(sentence: &str) -> (Option<(usize, usize)>, Option<(usize, usize)>) {
    let toks = text::tokens(sentence);
    // skip a leading adverbial such as "On Tuesday," up to the first comma
    let mut first = 0;
    if toks
        .first()
        .is_some_and(|t| STOPS.contains(&t.text.to_lowercase().as_str()))
    {
        if let Some(c) = sentence.find(',') {
            first = toks.iter().position(|t| t.start > c).unwrap_or(toks.len());
        }
    }
    let Some(v) = (first..toks.len()).find(|&i| verbish(toks[i].text)) else {
        return (None, None);
    };
    let subject = (v > first).then(|| (toks[first].start, toks[v - 1].end));
    (subject, object_after(sentence, &toks, v))
}

/// Split "X and Y" into its two conjuncts.
fn conjuncts(sentence: &str, range: (usize, usize)) -> ((usize, usize), Option<(usize, usize)>) {
    let toks = text::tokens(&sentence[range.0..range.1]);
    match toks.iter().position(|t| t.text == "and") {
        Some(k) if k > 0 && k + 1 < toks.len() => (
            (range.0, range.0 + toks[k - 1].end),
            Some((range.0 + toks[k + 1].start, range.1)),
        ),
        _ => (range, None),
    }
}

/// Noun phrase right after the first `cue` word.
fn phrase_after(sentence: &str, cues: &[&str], skip_the: bool) -> Option<(usize, usize)> {
    let toks = text::tokens(sentence);
    let i = toks.iter().position(|t| cues.contains(&t.text.to_lowercase().as_str()))?;
    let mut j = i + 1;
    if skip_the && toks.get(j).is_some_and(|t| t.text.eq_ignore_ascii_case("the")) {
        j += 1;
    }
    let start = j;
    while j < toks.len() {
        let f = toks[j].text.to_lowercase();
        if STOPS.contains(&f.as_str()) || verbish(toks[j].text) || is_date_word(toks[j].text) {
            break;
        }
        if j > start && sentence[toks[j - 1].end..toks[j].start].contains([',', ';', ':', '(']) {
            break;
        }
        j += 1;
    }
    (j > start).then(|| (toks[start].start, toks[j - 1].end))
}

/// Agent of a passive clause: "carried out by the Damascus regime".
fn passive_agent(sentence: &str) -> Option<(usize, usize)> {
    let toks = text::tokens(sentence);
    let by = toks.iter().enumerate().position(|(i, t)| {
        t.text == "by" && i > 0 && (verbish(toks[i - 1].text) || toks[i - 1].text == "out")
    })?;
    phrase_after(&sentence[toks[by].start..], &["by"], true).map(|(x, y)| (toks[by].start + x, toks[by].start + y))
}

fn object_after(sentence: &str, toks: &[Token<'_>], v: usize) -> Option<(usize, usize)> {
    let mut j = v + 1;
    while j < toks.len() && (verbish(toks[j].text) || LINKS.contains(&toks[j].text.to_lowercase().as_str())) {
        j += 1;
    }
    while j < toks.len() && is_date_word(toks[j].text) {
        j += 1;
    }
    let obj_start = j;
    while j < toks.len() {
        let f = toks[j].text.to_lowercase();
        if STOPS.contains(&f.as_str()) || verbish(toks[j].text) || is_date_word(toks[j].text) {
            break;
        }
        // stop at clause punctuation
        if sentence[toks[j - 1].end..toks[j].start].contains([',', ';', ':', '(']) && j > obj_start {
            break;
        }
        j += 1;
    }
    (j > obj_start).then(|| (toks[obj_start].start, toks[j - 1].end))
}

fn place(sentence: &str) -> Option<(usize, usize)> {
    let toks: Vec<Token<'_>> = text::tokens(sentence);
    for (i, t) in toks.iter().enumerate() {
        if !PLACE_PREPS.contains(&t.text.to_lowercase().as_str()) {
            continue;
        }
        let mut j = i + 1;
        if toks.get(j).is_some_and(|t| t.text.eq_ignore_ascii_case("the")) {
            j += 1;
        }
        // optional lowercase direction word: "in northern Afghanistan"
        let start = j;
        if toks.get(j).is_some_and(|t| {
            let f = t.text.to_lowercase();
            ["northern", "southern", "eastern", "western", "central"].contains(&f.as_str())
        }) {
            j += 1;
        }
        let name_start = j;
        while toks.get(j).is_some_and(|t| capitalized(t.text) && !is_date_word(t.text)) {
            j += 1;
        }
        if j > name_start {
            return Some((toks[start].start, toks[j - 1].end));
        }
    }
    None
}

fn is_date_word(t: &str) -> bool {
    let probe = NaiveDate::from_ymd_opt(2000, 6, 15).expect("valid date");
    !find_dates(t, probe).is_empty()
}

fn answer(context: &str, range: (usize, usize), score: f64) -> QaAnswer {
    let (b0, b1) = range;
    let s = text::char_offset(context, b0);
    QaAnswer {
        answer_text: context[b0..b1].to_string(),
        char_start: s,
        char_end: s + text::char_len(&context[b0..b1]),
        score,
    }
}

impl QaBackend for HeuristicQa {
    fn id(&self) -> String {
        "heuristic-qa@1".into()
    }

    fn answer(&self, context: &str, question: &str) -> Result<Option<QaAnswer>, BackendError> {
        let q = question.to_lowercase();
        let sentences = RuleNegation::sentences(context);
        if sentences.is_empty() {
            return Ok(None);
        }
        let order = sentence_order(context, &sentences, &q);
        let probe = NaiveDate::from_ymd_opt(2000, 6, 15).expect("valid date");
        if q.starts_with("where") {
            return Ok(order.iter().find_map(|&(a, b)| {
                place(&context[a..b]).map(|(x, y)| answer(context, (a + x, a + y), PLACE_SCORE))
            }));
        }
        if q.starts_with("when") {
            return Ok(order.iter().find_map(|&(a, b)| {
                find_dates(&context[a..b], probe).first().map(|(span, _)| {
                    let x = text::byte_offset(&context[a..b], span.start.unwrap_or(0));
                    answer(context, (a + x, a + x + span.text.len()), DATE_SCORE)
                })
            }));
        }

        let (s0, s1) = order[0];
        let sent = &context[s0..s1];
        let (subject, object) = svo(sent);
        let (lead, partner) = match subject {
            Some(r) => {
                let (a, b) = conjuncts(sent, r);
                (Some(a), b)
            }
            None => (None, None),
        };
        let actor = passive_agent(sent).or(lead);
        let recipient = phrase_after(sent, &["against"], false).or(object).or(partner);
        let slice = |r: Option<(usize, usize)>| r.map(|(x, y)| sent[x..y].to_lowercase());
        let mentions = |r: Option<(usize, usize)>| slice(r).is_some_and(|t| q.contains(t.as_str()));
        let want_recipient = if mentions(actor) {
            true
        } else if mentions(recipient) {
            false
        } else {
            RECIPIENT_CUES.iter().any(|c| q.split(|ch: char| !ch.is_alphanumeric()).any(|w| w == *c))
        };
        let (range, score) = if want_recipient {
            (recipient, OBJECT_SCORE)
        } else {
            (actor, SUBJECT_SCORE)
        };
        Ok(range.map(|(x, y)| answer(context, (s0 + x, s0 + y), score)))
    }
}

const QUESTION_WORDS: &[&str] = &[
    "who", "whom", "what", "where", "when", "did", "does", "was", "were", "the", "take", "place",
    "someone", "something", "against", "with",
];

const IRREGULAR: &[(&str, &str)] = &[
    ("met", "meet"), ("held", "hold"), ("fought", "fight"), ("struck", "strike"), ("took", "take"),
    ("gave", "give"), ("sent", "send"), ("shot", "shoot"), ("began", "begin"), ("led", "lead"),
];

fn stem(w: &str) -> String {
    let w = IRREGULAR.iter().find(|(f, _)| *f == w).map_or(w, |(_, base)| base);
    w.chars().take(4).collect()
}

/// Sentences ranked by how many content words of the question they share
/// (four-letter stems); ties keep document order.
fn sentence_order(context: &str, sentences: &[(usize, usize)], q: &str) -> Vec<(usize, usize)> {
    let stems: BTreeSet<String> = text::folded_tokens(q)
        .into_iter()
        .filter(|w| w.len() >= 3 && !QUESTION_WORDS.contains(&w.as_str()))
        .map(|w| stem(&w))
        .collect();
    let mut ranked: Vec<(usize, (usize, usize))> = sentences
        .iter()
        .map(|&(a, b)| {
            let words: BTreeSet<String> = text::folded_tokens(&context[a..b]).iter().map(|w| stem(w)).collect();
            let hits = stems.intersection(&words).count();
            (hits, (a, b))
        })
        .collect();
    ranked.sort_by(|x, y| y.0.cmp(&x.0));
    ranked.into_iter().map(|(_, r)| r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const RIOT: &str = "A group of Hindu nationalists rioted against Muslim shops in Dehli last week. Police said the violence lasted for hours.";

    fn ask(q: &str) -> Option<String> {
        HeuristicQa.answer(RIOT, q).unwrap().map(|a| {
            assert_eq!(text::char_slice(RIOT, a.char_start, a.char_end), Some(a.answer_text.as_str()));
            a.answer_text
        })
    }

    #[test]
    fn heuristic_reads_simple_lede() {
        assert_eq!(ask("Who engaged in the riot?").as_deref(), Some("A group of Hindu nationalists"));
        assert_eq!(ask("Who was the riot directed against?").as_deref(), Some("Muslim shops"));
        assert_eq!(ask("Where did the riot take place?").as_deref(), Some("Dehli"));
        assert_eq!(ask("When did the riot take place?").as_deref(), Some("last week"));
        assert_eq!(
            ask("Who did A group of Hindu nationalists riot against?").as_deref(),
            Some("Muslim shops")
        );
        assert_eq!(ask("Who rioted against Muslim shops?").as_deref(), Some("A group of Hindu nationalists"));
    }

    #[test]
    fn heuristic_follows_the_question_across_sentences() {
        let ctx = "President Obama and Emmanuel Macron met Tuesday in Paris to discuss the war in Syria. \
                   The meeting follows a chemical weapons attack last week against Syrian civilians in Aleppo \
                   carried out by the Damascus regime.";
        let ask = |q: &str| HeuristicQa.answer(ctx, q).unwrap().map(|a| a.answer_text);
        assert_eq!(ask("Who held the meeting?").as_deref(), Some("President Obama"));
        assert_eq!(ask("Who did President Obama meet with?").as_deref(), Some("Emmanuel Macron"));
        assert_eq!(ask("When did the meeting take place?").as_deref(), Some("Tuesday"));
        assert_eq!(ask("Who carried out the attack?").as_deref(), Some("Damascus regime"));
        assert_eq!(ask("Who was the target of the attack?").as_deref(), Some("Syrian civilians"));
        assert_eq!(ask("Where did the attack take place?").as_deref(), Some("Aleppo"));
        assert_eq!(ask("When did the attack take place?").as_deref(), Some("last week"));
    }

    #[test]
    fn recorded_replay_and_fallback() {
        let line = r#"{"context":"c","question":"q","answer":{"answer_text":"c","char_start":0,"char_end":1,"score":0.5}}"#;
        let none = r#"{"context":"c","question":"q2","answer":null}"#;
        let r = RecordedQa::parse("t", &format!("{line}\n{none}\n")).unwrap();
        assert_eq!(r.answer("c", "q").unwrap().unwrap().score, 0.5);
        assert_eq!(r.answer("c", "q2").unwrap(), None);
        assert_eq!(r.answer("c", "other").unwrap(), None);
        let r = r.with_fallback(Arc::new(HeuristicQa));
        assert!(r.answer(RIOT, "Where did it happen?").unwrap().is_some());
        assert!(RecordedQa::parse("t", "{bad").is_err());
    }
}
