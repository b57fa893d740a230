//! Offline knowledge bases: an entity index over encyclopedia article records
//! and a gazetteer over Geonames rows. Both support exact and fuzzy lookup.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::NaiveDate;
use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{read_file, Error, Result};
use crate::text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PageKind {
    Article,
    Redirect,
    Disambiguation,
    Category,
}

/// A dated office held by the article's subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Office {
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<NaiveDate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<NaiveDate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
}

impl Office {
    /// Whether the office was held on `date`; open ends are unbounded.
    pub fn held_on(&self, date: NaiveDate) -> bool {
        self.start.map_or(true, |s| s <= date) && self.end.map_or(true, |e| date <= e)
    }
}

/// The structured infobox fields we use; anything else is kept verbatim.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Infobox {
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub offices: Vec<Office>,
    #[serde(flatten)]
    pub other: BTreeMap<String, serde_json::Value>,
}

/// One record of the article stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KbArticle {
    pub title: String,
    #[serde(default = "article_kind")]
    pub page_kind: PageKind,
    /// Target title, for `page_kind = redirect` records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redirect_to: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub redirects: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alt_names: Vec<String>,
    #[serde(default)]
    pub short_summary: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
    #[serde(default)]
    pub infobox: Infobox,
    #[serde(default)]
    pub intro_paragraph: String,
}

fn article_kind() -> PageKind {
    PageKind::Article
}

impl KbArticle {
    pub fn new(title: impl Into<String>) -> Self {
        KbArticle {
            title: title.into(),
            page_kind: PageKind::Article,
            redirect_to: None,
            redirects: Vec::new(),
            alt_names: Vec::new(),
            short_summary: String::new(),
            categories: Vec::new(),
            infobox: Infobox::default(),
            intro_paragraph: String::new(),
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        if self.title.trim().is_empty() {
            return Err("empty title".into());
        }
        for o in &self.infobox.offices {
            if let (Some(s), Some(e)) = (o.start, o.end) {
                if s > e {
                    return Err(format!("office `{}` ends before it starts", o.title));
                }
            }
        }
        if self.page_kind == PageKind::Redirect && self.redirect_to.is_none() {
            return Err("redirect without target".into());
        }
        Ok(())
    }
}

/// Which field of an entry a name came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NameField {
    Title,
    Redirect,
    AltName,
}

/// Field multipliers for entity search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldWeights {
    pub title: f64,
    pub redirect: f64,
    pub alt_name: f64,
}

impl Default for FieldWeights {
    fn default() -> Self {
        FieldWeights {
            title: 3.0,
            redirect: 2.0,
            alt_name: 1.0,
        }
    }
}

impl FieldWeights {
    fn get(&self, f: NameField) -> f64 {
        match f {
            NameField::Title => self.title,
            NameField::Redirect => self.redirect,
            NameField::AltName => self.alt_name,
        }
    }
}

const TRIGRAM_MIN_JACCARD: f64 = 0.3;
const TRIGRAM_FACTOR: f64 = 0.5;

/// Per-token edit allowance: short tokens tolerate fewer edits.
fn allowance(token: &str, fuzziness: usize) -> usize {
    let n = token.chars().count();
    let cap = match n {
        0..=2 => 0,
        3..=5 => 1,
        _ => 2,
    };
    cap.min(fuzziness)
}

fn token_score(distance: usize) -> f64 {
    match distance {
        0 => 1.0,
        1 => 0.8,
        2 => 0.6,
        _ => 0.0,
    }
}

fn trigrams(norm: &str) -> BTreeSet<String> {
    let padded: Vec<char> = format!("  {norm} ").chars().collect();
    padded.windows(3).map(|w| w.iter().collect()).collect()
}

fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

#[derive(Debug, Clone)]
struct NameEntry {
    owner: usize,
    field: NameField,
    norm: String,
    tokens: Vec<String>,
    grams: BTreeSet<String>,
}

/// Inverted index over normalized names.
#[derive(Debug, Clone, Default)]
struct NameIndex {
    names: Vec<NameEntry>,
    exact: HashMap<String, Vec<usize>>,
    postings: HashMap<String, Vec<usize>>,
    /// Vocabulary bucketed by character length for edit-distance scans.
    by_len: BTreeMap<usize, Vec<String>>,
    grams: HashMap<String, Vec<usize>>,
}

impl NameIndex {
    fn add(&mut self, owner: usize, field: NameField, name: &str) {
        let norm = text::normalize_name(name);
        if norm.is_empty() {
            return;
        }
        let id = self.names.len();
        let tokens: Vec<String> = norm.split(' ').map(str::to_string).collect();
        for t in &tokens {
            let post = self.postings.entry(t.clone()).or_default();
            if post.is_empty() {
                self.by_len.entry(t.chars().count()).or_default().push(t.clone());
            }
            if post.last() != Some(&id) {
                post.push(id);
            }
        }
        let grams = trigrams(&norm);
        for g in &grams {
            self.grams.entry(g.clone()).or_default().push(id);
        }
        self.exact.entry(norm.clone()).or_default().push(id);
        self.names.push(NameEntry {
            owner,
            field,
            norm,
            tokens,
            grams,
        });
    }

    fn exact(&self, norm: &str) -> impl Iterator<Item = &NameEntry> {
        self.exact
            .get(norm)
            .into_iter()
            .flatten()
            .map(|&i| &self.names[i])
    }

    /// Vocabulary tokens within the allowance of `q`, with distances.
    fn near_tokens(&self, q: &str, fuzziness: usize) -> Vec<(&str, usize)> {
        let k = allowance(q, fuzziness);
        let n = q.chars().count();
        let mut out = Vec::new();
        for (_, bucket) in self.by_len.range(n.saturating_sub(k)..=n + k) {
            for t in bucket {
                let d = if k == 0 {
                    if t == q { 0 } else { continue }
                } else {
                    strsim::levenshtein(q, t)
                };
                if d <= k {
                    out.push((t.as_str(), d));
                }
            }
        }
        out
    }

    /// Lexical score per name: token matches normalized by the longer token
    /// count, or discounted trigram overlap when no token matches.
    fn score(&self, query: &str, fuzziness: usize) -> Vec<(usize, f64)> {
        let qnorm = text::normalize_name(query);
        if qnorm.is_empty() {
            return Vec::new();
        }
        let qtoks: Vec<&str> = qnorm.split(' ').collect();
        // name id -> per-query-token best distance score
        let mut hits: HashMap<usize, Vec<f64>> = HashMap::new();
        for (qi, q) in qtoks.iter().enumerate() {
            for (tok, d) in self.near_tokens(q, fuzziness) {
                for &id in &self.postings[tok] {
                    let v = hits.entry(id).or_insert_with(|| vec![0.0; qtoks.len()]);
                    v[qi] = v[qi].max(token_score(d));
                }
            }
        }
        let mut out: Vec<(usize, f64)> = hits
            .into_iter()
            .map(|(id, v)| {
                let denom = qtoks.len().max(self.names[id].tokens.len()) as f64;
                (id, v.iter().sum::<f64>() / denom)
            })
            .collect();
        let matched: BTreeSet<usize> = out.iter().map(|(id, _)| *id).collect();

        let qgrams = trigrams(&qnorm);
        let mut gram_cands: BTreeSet<usize> = BTreeSet::new();
        for g in &qgrams {
            if let Some(p) = self.grams.get(g) {
                gram_cands.extend(p.iter().copied().filter(|id| !matched.contains(id)));
            }
        }
        for id in gram_cands {
            let j = jaccard(&qgrams, &self.names[id].grams);
            if j >= TRIGRAM_MIN_JACCARD {
                out.push((id, TRIGRAM_FACTOR * j));
            }
        }
        out
    }
}

/// Counts from an ingestion run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub articles: usize,
    pub redirects: usize,
    pub redirects_attached: usize,
    pub redirects_dangling: usize,
    pub disambiguation: usize,
    pub category: usize,
    pub malformed: usize,
}

/// A search hit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityHit {
    pub title: String,
    pub score: f64,
    pub matched: String,
    pub field: NameField,
}

const INDEX_FORMAT: &str = "evcoder-entity-index";
const INDEX_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    format: String,
    version: u32,
    entries: usize,
}

/// Entity index. Built once, then read-only.
#[derive(Debug, Clone, Default)]
pub struct EntityIndex {
    articles: Vec<KbArticle>,
    by_title: HashMap<String, usize>,
    names: NameIndex,
    weights: FieldWeights,
}

impl EntityIndex {
    pub fn with_weights(mut self, weights: FieldWeights) -> Self {
        self.weights = weights;
        self
    }

    /// Build from parsed records. Redirect records are folded into their
    /// targets; disambiguation and category pages are skipped. Re-ingesting
    /// the same records is a no-op.
    pub fn ingest_articles(records: impl IntoIterator<Item = KbArticle>) -> (Self, IngestStats) {
        let mut stats = IngestStats::default();
        let mut articles: BTreeMap<String, KbArticle> = BTreeMap::new();
        let mut pending: Vec<(String, String)> = Vec::new();
        for rec in records {
            if let Err(e) = rec.check() {
                warn!("skipping `{}`: {e}", rec.title);
                stats.malformed += 1;
                continue;
            }
            match rec.page_kind {
                PageKind::Article => {
                    stats.articles += 1;
                    articles.insert(rec.title.clone(), rec);
                }
                PageKind::Redirect => {
                    stats.redirects += 1;
                    pending.push((rec.title, rec.redirect_to.expect("checked")));
                }
                PageKind::Disambiguation => stats.disambiguation += 1,
                PageKind::Category => stats.category += 1,
            }
        }
        for (from, to) in pending {
            match articles.get_mut(&to) {
                Some(a) => {
                    a.redirects.push(from);
                    stats.redirects_attached += 1;
                }
                None => stats.redirects_dangling += 1,
            }
        }
        let index = Self::from_articles(articles.into_values());
        (index, stats)
    }

    /// Parse a JSON-lines article stream; malformed lines are counted.
    pub fn ingest_jsonl(src: &str) -> (Self, IngestStats) {
        let mut bad = 0;
        let records: Vec<KbArticle> = src
            .lines()
            .filter(|l| !l.trim().is_empty())
            .filter_map(|l| match serde_json::from_str(l) {
                Ok(r) => Some(r),
                Err(e) => {
                    warn!("malformed article record: {e}");
                    bad += 1;
                    None
                }
            })
            .collect();
        let (idx, mut stats) = Self::ingest_articles(records);
        stats.malformed += bad;
        (idx, stats)
    }

    fn from_articles(articles: impl IntoIterator<Item = KbArticle>) -> Self {
        let mut idx = EntityIndex::default();
        for mut a in articles {
            let mut seen = BTreeSet::new();
            a.redirects.retain(|r| r != &a.title && seen.insert(r.clone()));
            let i = idx.articles.len();
            idx.names.add(i, NameField::Title, &a.title);
            for r in &a.redirects {
                idx.names.add(i, NameField::Redirect, r);
            }
            for n in &a.alt_names {
                idx.names.add(i, NameField::AltName, n);
            }
            idx.by_title.insert(a.title.clone(), i);
            idx.articles.push(a);
        }
        idx
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn articles(&self) -> &[KbArticle] {
        &self.articles
    }

    pub fn get(&self, title: &str) -> Option<&KbArticle> {
        self.by_title.get(title).map(|&i| &self.articles[i])
    }

    /// Articles whose title or a redirect equals `mention` after normalization.
    pub fn exact_matches(&self, mention: &str) -> Vec<&KbArticle> {
        let norm = text::normalize_name(mention);
        let owners: BTreeSet<usize> = self
            .names
            .exact(&norm)
            .filter(|n| n.field != NameField::AltName)
            .map(|n| n.owner)
            .collect();
        owners.into_iter().map(|i| &self.articles[i]).collect()
    }

    /// Redirect string → target title, over every indexed article.
    pub fn redirect_map(&self) -> BTreeMap<String, String> {
        self.articles
            .iter()
            .flat_map(|a| a.redirects.iter().map(move |r| (r.clone(), a.title.clone())))
            .collect()
    }

    /// Fuzzy search. `fuzziness` is the maximum per-token edit distance (≤ 2).
    pub fn search_entities(&self, query: &str, fuzziness: usize, limit: usize) -> Vec<EntityHit> {
        let mut best: HashMap<usize, (f64, usize)> = HashMap::new();
        for (id, s) in self.names.score(query, fuzziness.min(2)) {
            let n = &self.names.names[id];
            let w = s * self.weights.get(n.field);
            let e = best.entry(n.owner).or_insert((w, id));
            if w > e.0 || (w == e.0 && n.field < self.names.names[e.1].field) {
                *e = (w, id);
            }
        }
        let mut hits: Vec<EntityHit> = best
            .into_iter()
            .map(|(owner, (score, id))| {
                let n = &self.names.names[id];
                EntityHit {
                    title: self.articles[owner].title.clone(),
                    score,
                    matched: n.norm.clone(),
                    field: n.field,
                }
            })
            .collect();
        hits.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.title.cmp(&b.title)));
        hits.truncate(limit);
        hits
    }

    /// Write `manifest.json` and `articles.jsonl` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("articles.jsonl");
        let mut f = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        for a in &self.articles {
            let line = serde_json::to_string(a).expect("articles serialize");
            writeln!(f, "{line}").map_err(|e| Error::io(&path, e))?;
        }
        write_manifest(dir, INDEX_FORMAT, self.articles.len())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        read_manifest(dir, INDEX_FORMAT)?;
        let path = dir.join("articles.jsonl");
        let src = read_file(&path)?;
        let mut articles = Vec::new();
        for (i, l) in src.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let a: KbArticle = serde_json::from_str(l).map_err(|e| Error::Line {
                line: i + 1,
                message: format!("{}: {e}", path.display()),
            })?;
            articles.push(a);
        }
        Ok(Self::from_articles(articles))
    }
}

fn write_manifest(dir: &Path, format: &str, entries: usize) -> Result<()> {
    let m = Manifest {
        format: format.into(),
        version: INDEX_VERSION,
        entries,
    };
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&m).expect("manifest serializes") + "\n")
        .map_err(|e| Error::io(&path, e))
}

fn read_manifest(dir: &Path, format: &str) -> Result<Manifest> {
    let path = dir.join("manifest.json");
    let m: Manifest = serde_json::from_str(&read_file(&path)?)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if m.format != format || m.version != INDEX_VERSION {
        return Err(Error::Config(format!(
            "{}: expected {format} v{INDEX_VERSION}, found {} v{}",
            path.display(),
            m.format,
            m.version
        )));
    }
    Ok(m)
}

/// One gazetteer place.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GazetteerEntry {
    pub geoname_id: u64,
    pub name: String,
    pub alt_names: Vec<String>,
    pub latitude: f64,
    pub longitude: f64,
    pub feature_code: String,
    pub country_code: String,
    pub admin1: String,
    pub population: u64,
}

/// Counts from a gazetteer ingestion.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GazetteerStats {
    pub rows: usize,
    pub indexed: usize,
    pub rejected: usize,
}

const GEONAMES_COLUMNS: usize = 19;

fn parse_geonames_row(line: &str) -> std::result::Result<GazetteerEntry, String> {
    let c: Vec<&str> = line.split('\t').collect();
    if c.len() != GEONAMES_COLUMNS {
        return Err(format!("expected {GEONAMES_COLUMNS} columns, found {}", c.len()));
    }
    let num = |i: usize, what: &str| -> std::result::Result<f64, String> {
        c[i].trim().parse().map_err(|_| format!("bad {what} `{}`", c[i]))
    };
    let geoname_id = c[0].trim().parse().map_err(|_| format!("bad geonameid `{}`", c[0]))?;
    let latitude = num(4, "latitude")?;
    let longitude = num(5, "longitude")?;
    if latitude.abs() > 90.0 || longitude.abs() > 180.0 {
        return Err("coordinates out of range".into());
    }
    let population = if c[14].trim().is_empty() {
        0
    } else {
        c[14].trim().parse().map_err(|_| format!("bad population `{}`", c[14]))?
    };
    let name = c[1].trim().to_string();
    if name.is_empty() {
        return Err("empty name".into());
    }
    let mut alt_names: Vec<String> = Vec::new();
    for a in std::iter::once(c[2]).chain(c[3].split(',')) {
        let a = a.trim();
        if !a.is_empty() && a != name && !alt_names.iter().any(|x| x == a) {
            alt_names.push(a.to_string());
        }
    }
    Ok(GazetteerEntry {
        geoname_id,
        name,
        alt_names,
        latitude,
        longitude,
        feature_code: c[7].trim().to_string(),
        country_code: c[8].trim().to_string(),
        admin1: c[10].trim().to_string(),
        population,
    })
}

fn geonames_row(e: &GazetteerEntry) -> String {
    let mut c = vec![String::new(); GEONAMES_COLUMNS];
    c[0] = e.geoname_id.to_string();
    c[1] = e.name.clone();
    c[3] = e.alt_names.join(",");
    c[4] = e.latitude.to_string();
    c[5] = e.longitude.to_string();
    c[7] = e.feature_code.clone();
    c[8] = e.country_code.clone();
    c[10] = e.admin1.clone();
    c[14] = e.population.to_string();
    c.join("\t")
}

/// How a place search hit matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchTier {
    Exact,
    AltName,
    Fuzzy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlaceHit {
    pub entry: GazetteerEntry,
    pub tier: MatchTier,
    /// Name similarity in [0, 1].
    pub similarity: f64,
}

const GAZETTEER_FORMAT: &str = "evcoder-gazetteer";

/// Gazetteer index. Built once, then read-only.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    entries: Vec<GazetteerEntry>,
    names: NameIndex,
}

impl Gazetteer {
    /// Parse tab-separated rows in Geonames column order. Malformed rows and
    /// repeated ids are rejected and counted.
    pub fn ingest_gazetteer(src: &str) -> (Self, GazetteerStats) {
        let mut stats = GazetteerStats::default();
        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        for (i, line) in src.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            stats.rows += 1;
            match parse_geonames_row(line) {
                Ok(e) if seen.insert(e.geoname_id) => entries.push(e),
                Ok(e) => {
                    warn!("line {}: duplicate geoname id {}", i + 1, e.geoname_id);
                    stats.rejected += 1;
                }
                Err(msg) => {
                    warn!("line {}: {msg}", i + 1);
                    stats.rejected += 1;
                }
            }
        }
        stats.indexed = entries.len();
        (Self::from_entries(entries), stats)
    }

    pub fn from_entries(entries: Vec<GazetteerEntry>) -> Self {
        let mut names = NameIndex::default();
        for (i, e) in entries.iter().enumerate() {
            names.add(i, NameField::Title, &e.name);
            for a in &e.alt_names {
                names.add(i, NameField::AltName, a);
            }
        }
        Gazetteer { entries, names }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[GazetteerEntry] {
        &self.entries
    }

    pub fn get(&self, geoname_id: u64) -> Option<&GazetteerEntry> {
        self.entries.iter().find(|e| e.geoname_id == geoname_id)
    }

    /// Whether `name` is exactly some entry's name or alternate name.
    pub fn knows(&self, name: &str) -> bool {
        self.names.exact(&text::normalize_name(name)).next().is_some()
    }

    /// Exact-name hits, then alternate-name hits, then fuzzy hits; population
    /// descending within a tier, then id.
    pub fn search_places(&self, name: &str, limit: usize) -> Vec<PlaceHit> {
        let norm = text::normalize_name(name);
        let mut best: HashMap<usize, (MatchTier, f64)> = HashMap::new();
        for n in self.names.exact(&norm) {
            let tier = if n.field == NameField::Title {
                MatchTier::Exact
            } else {
                MatchTier::AltName
            };
            let e = best.entry(n.owner).or_insert((tier, 1.0));
            if tier < e.0 {
                *e = (tier, 1.0);
            }
        }
        for (id, s) in self.names.score(name, 2) {
            let owner = self.names.names[id].owner;
            let e = best.entry(owner).or_insert((MatchTier::Fuzzy, 0.0));
            if e.0 == MatchTier::Fuzzy && s > e.1 {
                e.1 = s;
            }
        }
        let mut hits: Vec<PlaceHit> = best
            .into_iter()
            .filter(|(_, (_, s))| *s > 0.0)
            .map(|(i, (tier, similarity))| PlaceHit {
                entry: self.entries[i].clone(),
                tier,
                similarity,
            })
            .collect();
        hits.sort_by(|a, b| {
            a.tier
                .cmp(&b.tier)
                .then(b.entry.population.cmp(&a.entry.population))
                .then(a.entry.geoname_id.cmp(&b.entry.geoname_id))
        });
        hits.truncate(limit);
        hits
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("gazetteer.tsv");
        let body: String = self.entries.iter().map(|e| geonames_row(e) + "\n").collect();
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        write_manifest(dir, GAZETTEER_FORMAT, self.entries.len())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        read_manifest(dir, GAZETTEER_FORMAT)?;
        let (g, stats) = Self::ingest_gazetteer(&read_file(&dir.join("gazetteer.tsv"))?);
        if stats.rejected > 0 {
            return Err(Error::Invalid(format!(
                "{}: {} stored gazetteer rows rejected",
                dir.display(),
                stats.rejected
            )));
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn art(title: &str) -> KbArticle {
        KbArticle::new(title)
    }

    fn redirect(from: &str, to: &str) -> KbArticle {
        KbArticle {
            page_kind: PageKind::Redirect,
            redirect_to: Some(to.into()),
            ..art(from)
        }
    }

    fn five() -> Vec<KbArticle> {
        vec![
            art("Barack Obama"),
            art("Islamic State"),
            art("Joe Biden"),
            redirect("ISIL", "Islamic State"),
            KbArticle {
                page_kind: PageKind::Disambiguation,
                ..art("Obama (disambiguation)")
            },
        ]
    }

    #[test]
    fn ingest_counts_and_folds_redirects() {
        let (idx, st) = EntityIndex::ingest_articles(five());
        assert_eq!(idx.len(), 3);
        assert_eq!(st.articles, 3);
        assert_eq!(st.redirects_attached, 1);
        assert_eq!(st.disambiguation, 1);
        assert_eq!(idx.get("Islamic State").unwrap().redirects, ["ISIL"]);
        let (empty, st) = EntityIndex::ingest_articles(vec![]);
        assert!(empty.is_empty());
        assert_eq!(st, IngestStats::default());
    }

    #[test]
    fn search_ranks_fields_and_typos() {
        let (idx, _) = EntityIndex::ingest_articles(five());
        assert_eq!(idx.search_entities("ISIL", 0, 5)[0].title, "Islamic State");
        assert_eq!(idx.search_entities("ISIL", 0, 5)[0].field, NameField::Redirect);
        assert_eq!(idx.search_entities("Barrack Obama", 2, 3)[0].title, "Barack Obama");
        assert!(idx.search_entities("Zorblatt Quxon", 2, 5).is_empty());
        let hits = idx.search_entities("Joe Biden", 2, 5);
        assert_eq!(hits[0].title, "Joe Biden");
        assert_eq!(hits[0].score, 3.0);
    }

    #[test]
    fn bad_office_is_malformed() {
        let mut a = art("X");
        a.infobox.offices.push(Office {
            title: "Mayor".into(),
            start: NaiveDate::from_ymd_opt(2010, 1, 1),
            end: NaiveDate::from_ymd_opt(2009, 1, 1),
            country: None,
        });
        let (idx, st) = EntityIndex::ingest_articles(vec![a]);
        assert!(idx.is_empty());
        assert_eq!(st.malformed, 1);
    }

    #[test]
    fn save_and_reload() {
        let (idx, _) = EntityIndex::ingest_articles(five());
        let dir = tempfile::tempdir().unwrap();
        idx.save(dir.path()).unwrap();
        let back = EntityIndex::load(dir.path()).unwrap();
        assert_eq!(back.articles(), idx.articles());
    }

    fn row(id: u64, name: &str, alts: &str, cc: &str, admin1: &str, pop: u64) -> String {
        format!("{id}\t{name}\t{name}\t{alts}\t36.2\t68.0\tP\tPPL\t{cc}\t\t{admin1}\t\t\t\t{pop}\t\t\tAsia/Kabul\t2020-01-01")
    }

    #[test]
    fn gazetteer_tiers() {
        let src = [
            row(1, "Paris", "", "FR", "11", 2_100_000),
            row(2, "Paris", "", "US", "TX", 25_000),
            row(3, "Aybak", "Samangan", "AF", "Samangan", 50_000),
            row(4, "New Delhi", "Dehli,Delhi", "IN", "Delhi", 300_000),
            row(3, "Dup", "", "AF", "x", 1),
            "bad\trow".to_string(),
        ]
        .join("\n");
        let (g, st) = Gazetteer::ingest_gazetteer(&src);
        assert_eq!(st, GazetteerStats { rows: 6, indexed: 4, rejected: 2 });
        let p = g.search_places("Paris", 5);
        assert_eq!(p[0].entry.country_code, "FR");
        assert_eq!(p[1].entry.country_code, "US");
        assert_eq!(g.search_places("Dehli", 5)[0].tier, MatchTier::AltName);
        assert_eq!(g.search_places("Aybakk", 5)[0].tier, MatchTier::Fuzzy);
        assert!(g.search_places("Atlantis", 5).is_empty());
        let (e, st) = Gazetteer::ingest_gazetteer("");
        assert!(e.is_empty());
        assert_eq!(st, GazetteerStats::default());

        let dir = tempfile::tempdir().unwrap();
        g.save(dir.path()).unwrap();
        assert_eq!(Gazetteer::load(dir.path()).unwrap().entries(), g.entries());
    }
}
