//! Entity resolution against the offline entity index.

use std::collections::BTreeMap;
use std::fmt;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::backend::Embedder;
use crate::kb::{EntityIndex, KbArticle};
use crate::model::Span;
use crate::text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolutionMethod {
    Exact,
    Similarity,
    /// Not linked to an article; generic mentions are coded from the agent file.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedEntity {
    pub mention: Span,
    pub article_title: Option<String>,
    pub confidence: f64,
    pub method: ResolutionMethod,
}

impl ResolvedEntity {
    fn unresolved(mention: &Span) -> Self {
        ResolvedEntity {
            mention: mention.clone(),
            article_title: None,
            confidence: 0.0,
            method: ResolutionMethod::Unresolved,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolveParams {
    /// Candidates fetched from fuzzy search.
    pub k: usize,
    pub fuzziness: usize,
    /// Minimum cosine for a similarity resolution.
    pub threshold: f64,
}

impl Default for ResolveParams {
    fn default() -> Self {
        ResolveParams {
            k: 10,
            fuzziness: 2,
            threshold: 0.6,
        }
    }
}

/// Text embedded for a candidate article.
pub fn candidate_text(a: &KbArticle) -> String {
    if a.short_summary.is_empty() {
        a.title.clone()
    } else {
        format!("{} {}", a.title, a.short_summary)
    }
}

/// Resolve `mention`: a single exact title/redirect match wins outright;
/// otherwise candidates are reranked by embedding similarity.
pub fn resolve_entity(
    mention: &Span,
    kb: &EntityIndex,
    embedder: &dyn Embedder,
    params: ResolveParams,
) -> ResolvedEntity {
    let exact = kb.exact_matches(&mention.text);
    if exact.len() == 1 {
        return ResolvedEntity {
            mention: mention.clone(),
            article_title: Some(exact[0].title.clone()),
            confidence: 1.0,
            method: ResolutionMethod::Exact,
        };
    }
    let candidates: Vec<&KbArticle> = if exact.len() > 1 {
        exact
    } else {
        kb.search_entities(&mention.text, params.fuzziness, params.k)
            .iter()
            .filter_map(|h| kb.get(&h.title))
            .collect()
    };
    if candidates.is_empty() {
        return ResolvedEntity::unresolved(mention);
    }

    let mut texts = vec![mention.text.clone()];
    texts.extend(candidates.iter().map(|a| candidate_text(a)));
    let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
    let vecs = match embedder.embed(&refs) {
        Ok(v) if v.len() == refs.len() => v,
        Ok(_) => {
            warn!("{}: wrong number of vectors", embedder.id());
            return ResolvedEntity::unresolved(mention);
        }
        Err(e) => {
            warn!("{}: {e}; leaving `{}` unresolved", embedder.id(), mention.text);
            return ResolvedEntity::unresolved(mention);
        }
    };
    // first maximum wins, so ties keep search order
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in vecs[1..].iter().enumerate() {
        let c = text::cosine(&vecs[0], v);
        if best.map_or(true, |(_, b)| c > b) {
            best = Some((i, c));
        }
    }
    match best {
        Some((i, c)) if c >= params.threshold => ResolvedEntity {
            mention: mention.clone(),
            article_title: Some(candidates[i].title.clone()),
            confidence: c.clamp(0.0, 1.0),
            method: ResolutionMethod::Similarity,
        },
        _ => ResolvedEntity::unresolved(mention),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairLabel {
    Positive,
    Negative,
}

impl fmt::Display for PairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairLabel::Positive => "positive",
            PairLabel::Negative => "negative",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedirectPair {
    pub query: String,
    pub target_title: String,
    pub label: PairLabel,
}

impl RedirectPair {
    /// `query <TAB> target <TAB> label`.
    pub fn to_tsv(&self) -> String {
        format!("{}\t{}\t{}", self.query, self.target_title, self.label)
    }
}

/// Similarity used to pick hard negatives: normalized Levenshtein over folded
/// names plus a bonus for shared tokens ("Joseph Biden" vs "Jill Biden").
pub fn lexical_similarity(a: &str, b: &str) -> f64 {
    let (na, nb) = (text::normalize_name(a), text::normalize_name(b));
    let lev = strsim::normalized_levenshtein(&na, &nb);
    let ta: Vec<&str> = na.split(' ').collect();
    let shared = nb.split(' ').filter(|t| ta.contains(t)).count();
    lev + shared as f64
}

/// One positive pair per redirect plus up to `negatives_per_positive` hard
/// negatives: the non-target titles most similar to the query.
pub fn build_redirect_pairs(
    redirect_map: &BTreeMap<String, String>,
    titles: &[String],
    negatives_per_positive: usize,
    selector: &dyn Fn(&str, &str) -> f64,
) -> Vec<RedirectPair> {
    let mut out = Vec::new();
    for (query, target) in redirect_map {
        out.push(RedirectPair {
            query: query.clone(),
            target_title: target.clone(),
            label: PairLabel::Positive,
        });
        let mut others: Vec<(f64, &String)> = titles
            .iter()
            .filter(|t| *t != target)
            .map(|t| (selector(query, t), t))
            .collect();
        others.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        others.dedup_by(|a, b| a.1 == b.1);
        out.extend(others.into_iter().take(negatives_per_positive).map(|(_, t)| RedirectPair {
            query: query.clone(),
            target_title: t.clone(),
            label: PairLabel::Negative,
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::NgramEmbedder;
    use crate::error::BackendError;
    use crate::kb::{KbArticle, PageKind};
    use std::sync::atomic::{AtomicUsize, Ordering};

    struct Counting(AtomicUsize, NgramEmbedder);

    impl Embedder for Counting {
        fn id(&self) -> String {
            "counting".into()
        }
        fn embed(&self, t: &[&str]) -> Result<Vec<Vec<f32>>, BackendError> {
            self.0.fetch_add(1, Ordering::SeqCst);
            self.1.embed(t)
        }
    }

    fn kb() -> EntityIndex {
        let mut obama = KbArticle::new("Barack Obama");
        obama.short_summary = "44th president of the United States".into();
        let mut is = KbArticle::new("Islamic State");
        is.short_summary = "Salafi jihadist militant group".into();
        let isil = KbArticle {
            page_kind: PageKind::Redirect,
            redirect_to: Some("Islamic State".into()),
            ..KbArticle::new("ISIL")
        };
        EntityIndex::ingest_articles(vec![obama, is, isil, KbArticle::new("Michelle Obama")]).0
    }

    #[test]
    fn exact_short_circuits_embedder() {
        let e = Counting(AtomicUsize::new(0), NgramEmbedder::default());
        let r = resolve_entity(&Span::synthetic("ISIL"), &kb(), &e, ResolveParams::default());
        assert_eq!(r.method, ResolutionMethod::Exact);
        assert_eq!(r.article_title.as_deref(), Some("Islamic State"));
        assert_eq!(e.0.load(Ordering::SeqCst), 0);
    }

    #[test]
    fn absent_is_unresolved() {
        let r = resolve_entity(
            &Span::synthetic("Zorblatt Quxon"),
            &kb(),
            &NgramEmbedder::default(),
            ResolveParams::default(),
        );
        assert_eq!(r.method, ResolutionMethod::Unresolved);
        assert!(r.article_title.is_none());
    }

    #[test]
    fn redirect_pairs_exhaust() {
        let map: BTreeMap<String, String> = [("Joseph Biden".to_string(), "Joe Biden".to_string())].into();
        let titles: Vec<String> = ["Joe Biden", "Jill Biden", "Paris"].map(String::from).to_vec();
        let pairs = build_redirect_pairs(&map, &titles, 3, &lexical_similarity);
        assert_eq!(pairs.len(), 3);
        assert_eq!(pairs[0].label, PairLabel::Positive);
        assert_eq!(pairs[1].target_title, "Jill Biden");
        assert_eq!(pairs[1].to_tsv(), "Joseph Biden\tJill Biden\tnegative");
        assert!(pairs[1..].iter().all(|p| p.target_title != "Joe Biden"));
    }
}
