//! Actor coding: country plus actor-category codes for generic mentions (via
//! the agent file) and for resolved entities (via their dated roles).

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use chrono::NaiveDate;
use log::warn;
use serde::{Deserialize, Serialize};

use crate::backend::Embedder;
use crate::entity::{ResolutionMethod, ResolvedEntity};
use crate::error::{read_file, Error, Result};
use crate::kb::{EntityIndex, KbArticle};
use crate::text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActorBasis {
    Generic,
    KbOffice,
    KbSummary,
    KbInfoboxType,
    KbIntro,
    Uncoded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActorCode {
    /// ISO 3166 alpha-3, or empty.
    pub country: String,
    /// Actor category such as GOV or CVL, or empty.
    pub category: String,
    pub basis: ActorBasis,
}

impl ActorCode {
    pub fn uncoded() -> Self {
        ActorCode {
            country: String::new(),
            category: String::new(),
            basis: ActorBasis::Uncoded,
        }
    }

    pub fn is_coded(&self) -> bool {
        self.basis != ActorBasis::Uncoded
    }
}

impl fmt::Display for ActorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.country.is_empty(), self.category.is_empty()) {
            (false, false) => write!(f, "{} {}", self.country, self.category),
            (false, true) => f.write_str(&self.country),
            (true, false) => f.write_str(&self.category),
            (true, true) => f.write_str("-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentEntry {
    pub pattern: String,
    pub code: String,
    #[serde(skip)]
    pub embedding: Vec<f32>,
}

/// Parsed agent file with cached pattern embeddings.
#[derive(Debug, Clone, Default)]
pub struct AgentFile {
    entries: Vec<AgentEntry>,
    by_pattern: HashMap<String, usize>,
    norms: Vec<f64>,
    embedder_id: String,
}

/// Parse "NAME [~CODE]" lines. Blank lines and `#` comments are ignored.
pub fn parse_agent_lines(src: &str) -> Result<Vec<AgentEntry>> {
    let mut out: Vec<AgentEntry> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, raw) in src.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Line { line: line_no, message };
        let (name, rest) = line
            .split_once("[~")
            .ok_or_else(|| err(format!("expected `NAME [~CODE]`, got `{line}`")))?;
        let code = rest
            .strip_suffix(']')
            .map(str::trim)
            .filter(|c| !c.is_empty() && c.chars().all(|ch| ch.is_ascii_alphanumeric()))
            .ok_or_else(|| err(format!("bad code in `{line}`")))?;
        let pattern = text::normalize_name(name);
        if pattern.is_empty() {
            return Err(err("empty name".into()));
        }
        if let Some(prev) = seen.insert(pattern.clone(), line_no) {
            return Err(err(format!("`{pattern}` already defined on line {prev}")));
        }
        out.push(AgentEntry {
            pattern,
            code: code.to_string(),
            embedding: Vec::new(),
        });
    }
    Ok(out)
}

impl AgentFile {
    /// Parse and embed every pattern with `embedder`.
    pub fn load_agent_file(src: &str, embedder: &dyn Embedder) -> Result<Self> {
        let mut entries = parse_agent_lines(src)?;
        let patterns: Vec<&str> = entries.iter().map(|e| e.pattern.as_str()).collect();
        let vecs = embedder.embed(&patterns)?;
        if vecs.len() != entries.len() {
            return Err(Error::Invalid(format!("{} returned {} vectors for {} patterns", embedder.id(), vecs.len(), entries.len())));
        }
        for (e, v) in entries.iter_mut().zip(vecs) {
            e.embedding = v;
        }
        let by_pattern = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.pattern.clone(), i))
            .collect();
        let norms = entries.iter().map(|e| norm(&e.embedding)).collect();
        Ok(AgentFile {
            entries,
            by_pattern,
            norms,
            embedder_id: embedder.id(),
        })
    }

    pub fn load(path: &Path, embedder: &dyn Embedder) -> Result<Self> {
        Self::load_agent_file(&read_file(path)?, embedder)
    }

    pub fn bundled(embedder: &dyn Embedder) -> Self {
        Self::load_agent_file(include_str!("../data/agents.txt"), embedder).expect("bundled agent file is valid")
    }

    pub fn entries(&self) -> &[AgentEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn exact(&self, text: &str) -> Option<&AgentEntry> {
        self.by_pattern.get(&text::normalize_name(text)).map(|&i| &self.entries[i])
    }

    /// Nearest entry by cosine; ties go to the earlier line.
    pub fn nearest(&self, vector: &[f32]) -> Option<(&AgentEntry, f64)> {
        // hashed n-gram vectors are sparse: only the query's nonzeros matter
        let nz: Vec<usize> = (0..vector.len()).filter(|&i| vector[i] != 0.0).collect();
        let qn = norm(vector);
        let mut best: Option<(usize, f64)> = None;
        for (i, e) in self.entries.iter().enumerate() {
            let dot: f64 = nz
                .iter()
                .map(|&j| vector[j] as f64 * e.embedding.get(j).copied().unwrap_or(0.0) as f64)
                .sum();
            let c = if qn == 0.0 || self.norms[i] == 0.0 { 0.0 } else { dot / (qn * self.norms[i]) };
            if best.map_or(true, |(_, b)| c > b) {
                best = Some((i, c));
            }
        }
        best.map(|(i, c)| (&self.entries[i], c))
    }

    /// Category for `text`: exact pattern match, else the nearest entry at or
    /// above `threshold`.
    pub fn categorize(&self, text: &str, embedder: &dyn Embedder, threshold: f64) -> Option<String> {
        if text.trim().is_empty() {
            return None;
        }
        if let Some(e) = self.exact(text) {
            return Some(e.code.clone());
        }
        if embedder.id() != self.embedder_id {
            warn!("agent embeddings came from {}, query uses {}", self.embedder_id, embedder.id());
        }
        let v = match embedder.embed_one(&text::normalize_name(text)) {
            Ok(v) => v,
            Err(e) => {
                warn!("{}: {e}", embedder.id());
                return None;
            }
        };
        self.nearest(&v)
            .filter(|(_, c)| *c >= threshold)
            .map(|(e, _)| e.code.clone())
    }
}

fn norm(v: &[f32]) -> f64 {
    v.iter().map(|&x| x as f64 * x as f64).sum::<f64>().sqrt()
}

/// Country names, demonyms and capitals mapped to ISO codes.
#[derive(Debug, Clone, Default)]
pub struct CountryTable {
    /// folded term tokens -> alpha-3
    terms: HashMap<Vec<String>, String>,
    max_len: usize,
    alpha2: HashMap<String, String>,
}

impl CountryTable {
    /// Tab-separated `alpha3 alpha2 kind term`, kind one of name, demonym,
    /// capital, alias.
    pub fn parse(src: &str) -> Result<Self> {
        let mut t = CountryTable::default();
        for (i, raw) in src.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Line { line: i + 1, message };
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [a3, a2, kind, term] = cols[..] else {
                return Err(err(format!("expected 4 columns, found {}", cols.len())));
            };
            if a3.len() != 3 || a2.len() != 2 {
                return Err(err(format!("bad ISO codes `{a3}`/`{a2}`")));
            }
            if !matches!(kind, "name" | "demonym" | "capital" | "alias") {
                return Err(err(format!("unknown kind `{kind}`")));
            }
            let key = text::folded_tokens(term);
            if key.is_empty() {
                return Err(err("empty term".into()));
            }
            t.max_len = t.max_len.max(key.len());
            if let Some(prev) = t.terms.insert(key, a3.to_string()) {
                if prev != a3 {
                    return Err(err(format!("`{term}` maps to both {prev} and {a3}")));
                }
            }
            t.alpha2.insert(a2.to_string(), a3.to_string());
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_file(path)?)
    }

    pub fn bundled() -> Self {
        Self::parse(include_str!("../data/countries.tsv")).expect("bundled country table is valid")
    }

    /// Alpha-3 for an exact country term ("Syria", "Syrian", "Damascus").
    pub fn lookup(&self, term: &str) -> Option<&str> {
        self.terms.get(&text::folded_tokens(term)).map(String::as_str)
    }

    pub fn alpha3_for_alpha2(&self, a2: &str) -> Option<&str> {
        self.alpha2.get(a2).map(String::as_str)
    }
}

fn strip_possessive(t: &str) -> &str {
    t.strip_suffix("'s")
        .or_else(|| t.strip_suffix("’s"))
        .or_else(|| t.strip_suffix('\''))
        .unwrap_or(t)
}

const DANGLING: &[&str] = &["of", "the", "for", "in", "and", "from", "to", "a", "an"];

/// Remove the first country term from `mention`. The residual keeps its
/// remaining tokens in order, minus dangling function words at either end.
pub fn split_country(mention: &str, table: &CountryTable) -> (Option<String>, String) {
    let toks = text::tokens(mention);
    let folded: Vec<String> = toks.iter().map(|t| strip_possessive(&t.text.to_lowercase()).to_string()).collect();
    for i in 0..toks.len() {
        for n in (1..=table.max_len.min(toks.len() - i)).rev() {
            let Some(code) = table.terms.get(&folded[i..i + n]) else {
                continue;
            };
            let joined = format!("{} {}", &mention[..toks[i].start], &mention[toks[i + n - 1].end..]);
            return (Some(code.clone()), trim_residual(&joined));
        }
    }
    (None, trim_residual(mention))
}

fn trim_residual(s: &str) -> String {
    let toks = text::tokens(s);
    let mut a = 0;
    let mut b = toks.len();
    while a < b && DANGLING.contains(&toks[a].text.to_lowercase().as_str()) {
        a += 1;
    }
    while b > a && DANGLING.contains(&toks[b - 1].text.to_lowercase().as_str()) {
        b -= 1;
    }
    if a == b {
        return String::new();
    }
    s[toks[a].start..toks[b - 1].end].split_whitespace().collect::<Vec<_>>().join(" ")
}

fn first_sentence(s: &str) -> &str {
    let s = s.trim();
    let mut prev = ' ';
    for (i, c) in s.char_indices() {
        if c == '.' && prev.is_lowercase() && s[i + 1..].starts_with(' ') {
            return &s[..i];
        }
        prev = c;
    }
    s.trim_end_matches('.')
}

/// The role text of an article at `story_date` and which field supplied it.
pub fn role_for_entity(article: &KbArticle, story_date: NaiveDate) -> (String, ActorBasis) {
    if let Some(o) = article.infobox.offices.iter().find(|o| o.held_on(story_date)) {
        return (o.title.clone(), ActorBasis::KbOffice);
    }
    if !article.short_summary.trim().is_empty() {
        return (article.short_summary.trim().to_string(), ActorBasis::KbSummary);
    }
    if let Some(k) = article.infobox.kind.as_deref().filter(|k| !k.trim().is_empty()) {
        return (k.trim().to_string(), ActorBasis::KbInfoboxType);
    }
    let intro = first_sentence(&article.intro_paragraph);
    if intro.is_empty() {
        warn!("`{}` has no role text", article.title);
    }
    (intro.to_string(), ActorBasis::KbIntro)
}

/// Shared inputs for actor coding.
pub struct ActorCoder<'a> {
    pub agents: &'a AgentFile,
    pub countries: &'a CountryTable,
    pub kb: Option<&'a EntityIndex>,
    pub embedder: &'a dyn Embedder,
    pub threshold: f64,
}

/// Default agent similarity threshold for the n-gram embedder.
pub const NGRAM_AGENT_THRESHOLD: f64 = 0.5;

impl ActorCoder<'_> {
    /// Code a mention. Resolved entities use their role text at `story_date`;
    /// everything else goes through the agent file.
    pub fn code_actor(&self, mention: &str, resolved: Option<&ResolvedEntity>, story_date: NaiveDate) -> ActorCode {
        let article = resolved
            .filter(|r| r.method != ResolutionMethod::Unresolved)
            .and_then(|r| r.article_title.as_deref())
            .and_then(|t| self.kb?.get(t));
        match article {
            Some(a) => self.code_article(a, story_date),
            None => self.code_generic(mention),
        }
    }

    pub fn code_generic(&self, mention: &str) -> ActorCode {
        if let Some(e) = self.agents.exact(mention) {
            return ActorCode {
                country: String::new(),
                category: e.code.clone(),
                basis: ActorBasis::Generic,
            };
        }
        let (country, residual) = split_country(mention, self.countries);
        let category = self.agents.categorize(&residual, self.embedder, self.threshold);
        if country.is_none() && category.is_none() {
            return ActorCode::uncoded();
        }
        ActorCode {
            country: country.unwrap_or_default(),
            category: category.unwrap_or_default(),
            basis: ActorBasis::Generic,
        }
    }

    fn code_article(&self, a: &KbArticle, story_date: NaiveDate) -> ActorCode {
        let (role, basis) = role_for_entity(a, story_date);
        let (role_country, residual) = split_country(&role, self.countries);
        let office_country = a
            .infobox
            .offices
            .iter()
            .find(|o| o.held_on(story_date))
            .and_then(|o| o.country.as_deref());
        let country = a
            .infobox
            .country
            .as_deref()
            .or(office_country)
            .and_then(|c| self.country_code(c))
            .or(role_country);
        let category = self.agents.categorize(&residual, self.embedder, self.threshold);
        if country.is_none() && category.is_none() {
            return ActorCode::uncoded();
        }
        ActorCode {
            country: country.unwrap_or_default(),
            category: category.unwrap_or_default(),
            basis,
        }
    }

    fn country_code(&self, c: &str) -> Option<String> {
        let c = c.trim();
        if c.len() == 3 && c.chars().all(|ch| ch.is_ascii_uppercase()) {
            return Some(c.to_string());
        }
        if let Some(a3) = self.countries.lookup(c) {
            return Some(a3.to_string());
        }
        split_country(c, self.countries).0
    }
}

/// Whether a mention looks like a proper name worth linking: some token
/// other than the first is capitalized, or the first is and is not a
/// determiner.
pub fn looks_proper(mention: &str) -> bool {
    let toks = text::tokens(mention);
    toks.iter().enumerate().any(|(i, t)| {
        let cap = t.text.chars().next().is_some_and(char::is_uppercase);
        cap && !(i == 0 && DANGLING.contains(&t.text.to_lowercase().as_str()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::NgramEmbedder;

    const COUNTRIES: &str = "SYR\tSY\tname\tSyria\nSYR\tSY\tdemonym\tSyrian\nSYR\tSY\tcapital\tDamascus\n\
USA\tUS\tname\tUnited States\nUSA\tUS\talias\tU.S.\nUSA\tUS\tdemonym\tAmerican\n";

    #[test]
    fn agent_lines() {
        let e = parse_agent_lines("DEFENSE_MINISTER [~GOVMIL]\n# c\n\nINTELLIGENCE_SERVICE [~SPY] # note\n").unwrap();
        assert_eq!(e[0].pattern, "defense minister");
        assert_eq!(e[0].code, "GOVMIL");
        assert_eq!(e[1].code, "SPY");
        match parse_agent_lines("OK [~GOV]\nBADLINE\n") {
            Err(Error::Line { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_agent_lines("A [~GOV]\na [~MIL]\n").is_err());
    }

    #[test]
    fn splits_country_terms() {
        let t = CountryTable::parse(COUNTRIES).unwrap();
        assert_eq!(split_country("Syrian civilians", &t), (Some("SYR".into()), "civilians".into()));
        assert_eq!(split_country("Pentagon officials", &t), (None, "Pentagon officials".into()));
        assert_eq!(split_country("Damascus regime", &t), (Some("SYR".into()), "regime".into()));
        assert_eq!(split_country("President of the United States", &t), (Some("USA".into()), "President".into()));
        assert_eq!(split_country("Syria's army", &t), (Some("SYR".into()), "army".into()));
        assert_eq!(split_country("the U.S. Department of Defense", &t), (Some("USA".into()), "Department of Defense".into()));
    }

    #[test]
    fn similarity_codes_spelling_variant() {
        let e = NgramEmbedder::default();
        let agents = AgentFile::load_agent_file("DEFENSE_MINISTER [~GOVMIL]\nREBEL_LEADER [~REB]\n", &e).unwrap();
        assert_eq!(agents.categorize("Defence Minister", &e, NGRAM_AGENT_THRESHOLD).as_deref(), Some("GOVMIL"));
        assert_eq!(agents.categorize("zzzz qqqq", &e, NGRAM_AGENT_THRESHOLD), None);
    }

    #[test]
    fn proper_names() {
        assert!(looks_proper("President Obama"));
        assert!(looks_proper("Pentagon officials"));
        assert!(!looks_proper("the protesters"));
        assert!(!looks_proper("A crowd"));
    }
}
