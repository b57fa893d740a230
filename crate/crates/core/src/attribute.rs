//! Attribute extraction: question templates, three rounds of extractive QA,
//! score aggregation over identical spans, and optimal span assignment.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::assign::max_weight_assignment;
use crate::backend::QaBackend;
use crate::error::{read_file, BackendError, Error, Result};
use crate::model::{Attribute, AttributeRule, AttributeSet, AttributeSlot, Span};
use crate::text;

const ACTOR_PH: &str = "{actor_text}";
const RECIP_PH: &str = "{recip_text}";

/// One question template row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionTemplate {
    /// `None` matches any category (global fallback).
    pub category: Option<String>,
    /// `None` is the category-level generic (`*`).
    pub mode: Option<String>,
    pub attribute: Attribute,
    pub round: u8,
    pub text: String,
}

impl QuestionTemplate {
    fn uses_actor(&self) -> bool {
        self.text.contains(ACTOR_PH)
    }

    fn uses_recip(&self) -> bool {
        self.text.contains(RECIP_PH)
    }
}

/// Question templates loaded from the tab-separated template file:
/// `category <TAB> mode|* <TAB> attribute <TAB> round <TAB> question`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemplateSet {
    templates: Vec<QuestionTemplate>,
}

impl TemplateSet {
    pub fn parse(src: &str) -> Result<Self> {
        let mut templates = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Line { line: line_no, message };
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 5 {
                return Err(err(format!("expected 5 tab-separated columns, found {}", cols.len())));
            }
            let star = |s: &str| (s.trim() != "*").then(|| s.trim().to_string());
            let attribute: Attribute = cols[2].parse().map_err(|e: Error| err(e.to_string()))?;
            if attribute == Attribute::SecondActor {
                return Err(err("SECOND_ACTOR is derived from ACTOR questions".into()));
            }
            let round: u8 = cols[3]
                .trim()
                .parse()
                .ok()
                .filter(|r| (1..=3).contains(r))
                .ok_or_else(|| err(format!("round must be 1, 2 or 3, got `{}`", cols[3])))?;
            let text = cols[4].trim().to_string();
            let t = QuestionTemplate {
                category: star(cols[0]),
                mode: star(cols[1]),
                attribute,
                round,
                text,
            };
            let stripped = t.text.replace(ACTOR_PH, "").replace(RECIP_PH, "");
            if stripped.contains('{') || stripped.contains('}') {
                return Err(err(format!("unknown placeholder in `{}`", t.text)));
            }
            let has_ph = t.uses_actor() || t.uses_recip();
            if round == 1 && has_ph {
                return Err(err("round-1 questions take no placeholders".into()));
            }
            if round > 1 && !has_ph {
                return Err(err(format!("round-{round} questions need a placeholder")));
            }
            templates.push(t);
        }
        Ok(TemplateSet { templates })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_file(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/templates.tsv")).expect("bundled templates are valid")
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    /// Templates for `category`/`mode`, falling back to the category-level
    /// generic set and then to the global generic set.
    pub fn select(&self, category: &str, mode: Option<&str>) -> Vec<&QuestionTemplate> {
        let cat = |t: &&QuestionTemplate| t.category.as_deref() == Some(category);
        if let Some(m) = mode {
            let v: Vec<_> = self
                .templates
                .iter()
                .filter(cat)
                .filter(|t| t.mode.as_deref() == Some(m))
                .collect();
            if !v.is_empty() {
                return v;
            }
        }
        let v: Vec<_> = self.templates.iter().filter(cat).filter(|t| t.mode.is_none()).collect();
        if !v.is_empty() {
            return v;
        }
        self.templates
            .iter()
            .filter(|t| t.category.is_none() && t.mode.is_none())
            .collect()
    }

    /// Whether `category`/`mode` has templates of its own (no fallback).
    pub fn covers(&self, category: &str, mode: Option<&str>) -> bool {
        self.templates.iter().any(|t| {
            t.category.as_deref() == Some(category)
                && (t.mode.is_none() || t.mode.as_deref() == mode)
        })
    }
}

/// A rendered question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub attribute: Attribute,
    pub round: u8,
    pub text: String,
}

/// Earlier answers available to conditioned questions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Prior {
    pub actors: Vec<String>,
    pub recipients: Vec<String>,
}

impl From<&AttributeSet> for Prior {
    fn from(a: &AttributeSet) -> Self {
        Prior {
            actors: a
                .actor
                .iter()
                .chain(&a.second_actor)
                .map(|s| s.span.text.clone())
                .collect(),
            recipients: a.recipient.iter().map(|s| s.span.text.clone()).collect(),
        }
    }
}

/// Render the templates of one round. Placeholders take each available prior
/// answer in turn; templates whose placeholders have no prior are skipped.
pub fn render_questions(
    category: &str,
    mode: Option<&str>,
    round: u8,
    prior: &Prior,
    templates: &TemplateSet,
) -> Vec<Question> {
    let mut out = Vec::new();
    for (ti, t) in templates
        .select(category, mode)
        .into_iter()
        .enumerate()
        .filter(|(_, t)| t.round == round)
    {
        let actors: Vec<Option<&str>> = if t.uses_actor() {
            prior.actors.iter().map(|s| Some(s.as_str())).collect()
        } else {
            vec![None]
        };
        let recips: Vec<Option<&str>> = if t.uses_recip() {
            prior.recipients.iter().map(|s| Some(s.as_str())).collect()
        } else {
            vec![None]
        };
        for (ai, a) in actors.iter().enumerate() {
            for (ri, r) in recips.iter().enumerate() {
                let mut q = t.text.clone();
                if let Some(a) = a {
                    q = q.replace(ACTOR_PH, a);
                }
                if let Some(r) = r {
                    q = q.replace(RECIP_PH, r);
                }
                out.push(Question {
                    id: format!(
                        "{category}-{}/{}/r{round}/t{ti}/a{ai}r{ri}",
                        mode.unwrap_or("*"),
                        t.attribute
                    ),
                    attribute: t.attribute,
                    round,
                    text: q,
                });
            }
        }
    }
    out
}

/// One QA answer for one attribute question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaCandidate {
    pub span: Span,
    pub attribute: Attribute,
    pub score: f64,
    pub question_id: String,
    pub round: u8,
}

/// Candidates from one batch of questions plus the backend errors met.
#[derive(Debug, Clone, Default)]
pub struct Collected {
    pub candidates: Vec<QaCandidate>,
    pub errors: Vec<BackendError>,
}

/// Ask every question against `coded_text`; at most one candidate per
/// question. Answers whose offsets do not slice to the answer text are
/// re-anchored at the first occurrence, or dropped if absent.
pub fn collect_candidates(coded_text: &str, questions: &[Question], qa: &dyn QaBackend) -> Collected {
    let mut out = Collected::default();
    for q in questions {
        match qa.answer(coded_text, &q.text) {
            Ok(None) => {}
            Ok(Some(a)) => {
                if !a.score.is_finite() || a.answer_text.trim().is_empty() {
                    continue;
                }
                let Some(span) = anchor(coded_text, &a.answer_text, a.char_start, a.char_end) else {
                    warn!("{}: answer `{}` not found in context", qa.id(), a.answer_text);
                    continue;
                };
                out.candidates.push(QaCandidate {
                    span,
                    attribute: q.attribute,
                    score: a.score.clamp(0.0, 1.0),
                    question_id: q.id.clone(),
                    round: q.round,
                });
            }
            Err(e) => {
                warn!("{}: question `{}` failed: {e}", qa.id(), q.text);
                out.errors.push(e);
            }
        }
    }
    out
}

fn anchor(context: &str, answer: &str, start: usize, end: usize) -> Option<Span> {
    if text::char_slice(context, start, end) == Some(answer) && start < end {
        return Some(Span::new(answer, start, end));
    }
    let b = context.find(answer)?;
    let s = text::char_offset(context, b);
    Some(Span::new(answer, s, s + text::char_len(answer)))
}

/// Summed QA scores: one row per distinct span text (lexicographic order),
/// one column per asked attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    pub spans: Vec<Span>,
    pub attributes: Vec<Attribute>,
    pub cells: Vec<Vec<f64>>,
}

impl ScoreMatrix {
    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn cell(&self, span_text: &str, attr: Attribute) -> f64 {
        let Some(r) = self.spans.iter().position(|s| s.text == span_text) else {
            return 0.0;
        };
        let Some(c) = self.attributes.iter().position(|a| *a == attr) else {
            return 0.0;
        };
        self.cells[r][c]
    }

    fn column(&self, attr: Attribute) -> Option<usize> {
        self.attributes.iter().position(|a| *a == attr)
    }
}

/// Sum candidate scores per (span text, attribute). Spans are identified by
/// exact string; the earliest offsets seen are kept for each row.
pub fn aggregate_scores(candidates: &[QaCandidate]) -> ScoreMatrix {
    let attributes = Attribute::ASKED.to_vec();
    let mut rows: BTreeMap<&str, (Span, Vec<f64>)> = BTreeMap::new();
    for c in candidates {
        let col = attributes
            .iter()
            .position(|a| *a == c.attribute)
            .expect("candidates carry asked attributes");
        let entry = rows
            .entry(c.span.text.as_str())
            .or_insert_with(|| (c.span.clone(), vec![0.0; attributes.len()]));
        if c.span.start < entry.0.start && c.span.start.is_some() || entry.0.start.is_none() {
            entry.0 = c.span.clone();
        }
        entry.1[col] += c.score;
    }
    let (spans, cells) = rows.into_values().unzip();
    ScoreMatrix {
        spans,
        attributes,
        cells,
    }
}

/// Minimum summed score before a span may fill an attribute.
pub const DEFAULT_ATTRIBUTE_FLOOR: f64 = 0.1;

/// Assign spans to attributes maximizing the total summed score, one span per
/// attribute and one attribute per span. Cells below `floor` are ineligible.
/// When the rule allows a second actor, the layout where a second actor takes
/// the recipient's place is also solved and kept if strictly better.
pub fn assign_spans(matrix: &ScoreMatrix, rule: AttributeRule, floor: f64) -> AttributeSet {
    if matrix.is_empty() {
        return AttributeSet::default();
    }
    let mut layouts = Vec::new();
    let mut base = vec![Attribute::Actor];
    if rule.recipient {
        base.push(Attribute::Recipient);
    }
    base.extend([Attribute::Location, Attribute::Date]);
    layouts.push(base);
    if rule.second_actor {
        layouts.push(vec![
            Attribute::Actor,
            Attribute::SecondActor,
            Attribute::Location,
            Attribute::Date,
        ]);
    }

    let mut best: Option<AttributeSet> = None;
    for layout in layouts {
        let set = solve_layout(matrix, &layout, floor);
        if best
            .as_ref()
            .map_or(true, |b| set.assignment_score > b.assignment_score + 1e-12)
        {
            best = Some(set);
        }
    }
    best.expect("at least one layout")
}

fn solve_layout(matrix: &ScoreMatrix, layout: &[Attribute], floor: f64) -> AttributeSet {
    let source_col = |a: Attribute| {
        let src = if a == Attribute::SecondActor { Attribute::Actor } else { a };
        matrix.column(src)
    };
    let weights: Vec<Vec<f64>> = matrix
        .cells
        .iter()
        .map(|row| {
            layout
                .iter()
                .map(|a| {
                    let w = source_col(*a).map_or(0.0, |c| row[c]);
                    if w >= floor && w > 0.0 {
                        w
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let assignment = max_weight_assignment(&weights);
    let mut set = AttributeSet::default();
    let mut total = 0.0;
    for (r, col) in assignment.iter().enumerate() {
        let Some(c) = *col else { continue };
        let w = weights[r][c];
        if w <= 0.0 {
            continue;
        }
        total += w;
        *set.slot_mut(layout[c]) = Some(AttributeSlot {
            span: matrix.spans[r].clone(),
            score: w,
        });
    }
    // a second actor is only meaningful alongside a first
    if set.actor.is_none() && set.second_actor.is_some() {
        set.actor = set.second_actor.take();
    }
    // both columns carry the same weights; the stronger span leads
    if let (Some(a), Some(b)) = (&set.actor, &set.second_actor) {
        if b.score > a.score || (b.score == a.score && b.span.start < a.span.start) {
            std::mem::swap(&mut set.actor, &mut set.second_actor);
        }
    }
    set.assignment_score = total;
    set
}

/// Settings for [`extract_attributes`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractParams {
    pub floor: f64,
    /// Provisional actors/recipients used to seed conditioned rounds.
    pub max_seeds: usize,
}

impl Default for ExtractParams {
    fn default() -> Self {
        ExtractParams {
            floor: DEFAULT_ATTRIBUTE_FLOOR,
            max_seeds: 2,
        }
    }
}

/// Output of [`extract_attributes`].
#[derive(Debug, Clone, Default)]
pub struct Extraction {
    pub attributes: AttributeSet,
    /// Pooled candidates from all rounds.
    pub candidates: Vec<QaCandidate>,
    /// Set when the QA backend failed on some questions.
    pub partial: bool,
    pub round1_score: f64,
}

/// Three rounds of questions: generic, actor-conditioned, then
/// recipient-conditioned. All candidates are pooled for the final assignment.
pub fn extract_attributes(
    coded_text: &str,
    category: &str,
    mode: Option<&str>,
    qa: &dyn QaBackend,
    templates: &TemplateSet,
    rule: AttributeRule,
    params: ExtractParams,
) -> Extraction {
    let mut pool = Vec::new();
    let mut partial = false;
    let mut ask = |round: u8, prior: &Prior, pool: &mut Vec<QaCandidate>| {
        let qs = render_questions(category, mode, round, prior, templates);
        let got = collect_candidates(coded_text, &qs, qa);
        partial |= !got.errors.is_empty();
        pool.extend(got.candidates);
    };

    ask(1, &Prior::default(), &mut pool);
    let provisional = assign_spans(&aggregate_scores(&pool), rule, params.floor);
    let round1_score = provisional.assignment_score;

    let prior = Prior {
        actors: seeds(&pool, &provisional, Attribute::Actor, params),
        recipients: Vec::new(),
    };
    if !prior.actors.is_empty() {
        ask(2, &prior, &mut pool);
    }

    let provisional = assign_spans(&aggregate_scores(&pool), rule, params.floor);
    let prior = Prior {
        actors: prior.actors,
        recipients: seeds(&pool, &provisional, Attribute::Recipient, params),
    };
    if !prior.recipients.is_empty() {
        ask(3, &prior, &mut pool);
    }

    let attributes = assign_spans(&aggregate_scores(&pool), rule, params.floor);
    Extraction {
        attributes,
        candidates: pool,
        partial,
        round1_score,
    }
}

/// Top spans for `attr` by summed score, skipping spans the provisional
/// assignment gave to a different attribute.
fn seeds(pool: &[QaCandidate], provisional: &AttributeSet, attr: Attribute, params: ExtractParams) -> Vec<String> {
    let m = aggregate_scores(pool);
    let Some(col) = m.column(attr) else {
        return Vec::new();
    };
    let taken_elsewhere: BTreeSet<&str> = provisional
        .filled()
        .filter(|(a, _)| {
            let same = *a == attr
                || (attr == Attribute::Actor && *a == Attribute::SecondActor);
            !same
        })
        .map(|(_, s)| s.span.text.as_str())
        .collect();
    let mut ranked: Vec<(f64, &str)> = m
        .spans
        .iter()
        .zip(&m.cells)
        .filter(|(s, row)| row[col] >= params.floor && !taken_elsewhere.contains(s.text.as_str()))
        .map(|(s, row)| (row[col], s.text.as_str()))
        .collect();
    ranked.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    ranked
        .into_iter()
        .take(params.max_seeds)
        .map(|(_, t)| t.to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(text: &str, attr: Attribute, score: f64) -> QaCandidate {
        QaCandidate {
            span: Span::synthetic(text),
            attribute: attr,
            score,
            question_id: "q".into(),
            round: 1,
        }
    }

    const RIOT: &str = "PROTEST\triot\tACTOR\t1\tWho engaged in the riot?\n\
PROTEST\triot\tACTOR\t3\tWho rioted against {recip_text}?\n\
PROTEST\triot\tRECIP\t1\tWho was the riot directed against?\n\
PROTEST\triot\tRECIP\t2\tWho did {actor_text} riot against?\n\
PROTEST\triot\tLOCATION\t1\tWhere did the riot take place?\n\
PROTEST\tdemo\tACTOR\t1\tWho held a demonstration?\n\
PROTEST\t*\tACTOR\t1\tWho protested?\n\
*\t*\tACTOR\t1\tWho carried out the event?\n";

    #[test]
    fn template_parsing_rules() {
        assert!(TemplateSet::parse(RIOT).is_ok());
        assert!(TemplateSet::parse("A\t*\tACTOR\t1\tWho did {actor_text} meet?\n").is_err());
        assert!(TemplateSet::parse("A\t*\tACTOR\t2\tWho met?\n").is_err());
        assert!(TemplateSet::parse("A\t*\tACTOR\t4\tWho met?\n").is_err());
        assert!(TemplateSet::parse("A\t*\tACTOR\t2\tWho met {who}?\n").is_err());
        assert!(TemplateSet::parse("A\t*\tACTOR\tWho met?\n").is_err());
    }

    #[test]
    fn renders_table_questions() {
        let t = TemplateSet::parse(RIOT).unwrap();
        let q = render_questions("PROTEST", Some("demo"), 1, &Prior::default(), &t);
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].text, "Who held a demonstration?");

        let prior = Prior { actors: vec!["Hindu nationalists".into()], recipients: vec![] };
        let q = render_questions("PROTEST", Some("riot"), 2, &prior, &t);
        assert_eq!(q.iter().map(|q| q.text.as_str()).collect::<Vec<_>>(), ["Who did Hindu nationalists riot against?"]);

        // no prior recipient: recipient-conditioned templates are skipped
        let q = render_questions("PROTEST", Some("riot"), 3, &prior, &t);
        assert!(q.is_empty());
    }

    #[test]
    fn template_fallbacks() {
        let t = TemplateSet::parse(RIOT).unwrap();
        let q = render_questions("PROTEST", Some("boycott"), 1, &Prior::default(), &t);
        assert_eq!(q[0].text, "Who protested?");
        let q = render_questions("AID", None, 1, &Prior::default(), &t);
        assert_eq!(q[0].text, "Who carried out the event?");
        assert!(t.covers("PROTEST", Some("boycott")));
        assert!(!t.covers("AID", None));
    }

    #[test]
    fn aggregation_sums_identical_spans() {
        let c = vec![
            cand("Muslim shops", Attribute::Recipient, 0.179),
            cand("Muslim shops", Attribute::Recipient, 0.755),
            cand("Muslim shops", Attribute::Recipient, 0.131),
            cand("Muslim shops", Attribute::Recipient, 0.103),
            cand("A group of Hindu nationalists", Attribute::Actor, 0.433),
            cand("A group of Hindu nationalists", Attribute::Actor, 0.502),
            cand("Hindu nationalists", Attribute::Actor, 0.452),
        ];
        let m = aggregate_scores(&c);
        assert_eq!(m.spans.len(), 3);
        assert!((m.cell("Muslim shops", Attribute::Recipient) - 1.168).abs() < 1e-12);
        assert!((m.cell("A group of Hindu nationalists", Attribute::Actor) - 0.935).abs() < 1e-12);
        assert_eq!(m.cell("Hindu nationalists", Attribute::Actor), 0.452);
    }

    #[test]
    fn single_candidate_matrix() {
        let m = aggregate_scores(&[cand("x", Attribute::Location, 0.9)]);
        let nonzero: Vec<f64> = m.cells.iter().flatten().copied().filter(|v| *v != 0.0).collect();
        assert_eq!(nonzero, [0.9]);
        let a = assign_spans(&m, AttributeRule::default(), DEFAULT_ATTRIBUTE_FLOOR);
        assert_eq!(a.location.unwrap().span.text, "x");
    }

    #[test]
    fn floor_leaves_attribute_unfilled() {
        let m = aggregate_scores(&[cand("noise", Attribute::Date, 0.05)]);
        let a = assign_spans(&m, AttributeRule::default(), 0.1);
        assert!(a.is_empty());
        assert_eq!(a.assignment_score, 0.0);
        assert!(assign_spans(&aggregate_scores(&[]), AttributeRule::default(), 0.1).is_empty());
    }

    #[test]
    fn dual_actor_layout() {
        let m = aggregate_scores(&[
            cand("President Obama", Attribute::Actor, 0.8),
            cand("Emmanuel Macron", Attribute::Actor, 0.7),
            cand("Paris", Attribute::Location, 0.9),
        ]);
        let rule = AttributeRule { second_actor: true, recipient: true };
        let a = assign_spans(&m, rule, 0.1);
        assert_eq!(a.actor.as_ref().unwrap().span.text, "President Obama");
        assert_eq!(a.second_actor.as_ref().unwrap().span.text, "Emmanuel Macron");
        assert!(a.recipient.is_none());
        // without the rule the second actor stays unassigned
        let a = assign_spans(&m, AttributeRule::default(), 0.1);
        assert!(a.second_actor.is_none());
    }
}
