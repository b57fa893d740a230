//! Entity index, gazetteer and actor tables against the shipped fixtures.

mod common;

use chrono::NaiveDate;
use evcoder::actor::{split_country, ActorBasis, AgentFile, CountryTable};
use evcoder::embed::NgramEmbedder;
use evcoder::entity::{
    build_redirect_pairs, lexical_similarity, resolve_entity, PairLabel, ResolutionMethod, ResolveParams,
};
use evcoder::geo::{resolve_places, select_event_location, GazetteerAnnotator, GeoParams};
use evcoder::kb::{EntityIndex, Gazetteer, MatchTier};
use evcoder::{Engine, Error, Span};

fn day(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

#[test]
fn fixture_index_ingest_counts() {
    let (kb, stats) = EntityIndex::ingest_jsonl(&common::read_fixture("kb.jsonl"));
    assert_eq!(stats.articles, 50);
    assert_eq!(stats.redirects, 3);
    assert_eq!(stats.redirects_attached, 3);
    assert_eq!(stats.redirects_dangling, 0);
    assert_eq!(stats.disambiguation, 1);
    assert_eq!(kb.len(), 50);
    let m = kb.redirect_map();
    assert_eq!(m.get("Barry Obama").map(String::as_str), Some("Barack Obama"));
    assert_eq!(m.get("Pentagon (building)").map(String::as_str), Some("The Pentagon"));
    assert!(m.len() > 150);
}

#[test]
fn saved_index_answers_like_the_original() {
    let kb = common::kb();
    let dir = tempfile::tempdir().unwrap();
    kb.save(dir.path()).unwrap();
    let back = EntityIndex::load(dir.path()).unwrap();
    assert_eq!(back.len(), kb.len());
    assert_eq!(back.redirect_map(), kb.redirect_map());
    for q in ["Obama", "Islamic Stat", "Pentagon", "Hezbolah", "Macron"] {
        assert_eq!(back.search_entities(q, 2, 5), kb.search_entities(q, 2, 5), "{q}");
    }

    std::fs::write(
        dir.path().join("manifest.json"),
        r#"{"format": "evcoder-entity-index", "version": 99, "entries": 50}"#,
    )
    .unwrap();
    assert!(matches!(EntityIndex::load(dir.path()), Err(Error::Config(_))));
    assert!(EntityIndex::load(&dir.path().join("missing")).is_err());
}

#[test]
fn exact_similarity_and_unresolved() {
    let kb = common::kb();
    let emb = NgramEmbedder::default();
    let p = ResolveParams::default();
    let r = resolve_entity(&Span::synthetic("President Obama"), &kb, &emb, p);
    assert_eq!((r.method, r.article_title.as_deref()), (ResolutionMethod::Exact, Some("Barack Obama")));
    assert_eq!(r.confidence, 1.0);

    // the n-gram baseline compares a bare name against name plus summary,
    // so its cosines sit well below the default cut
    let loose = ResolveParams { threshold: 0.3, ..p };
    let r = resolve_entity(&Span::synthetic("Emmanuel Macronn"), &kb, &emb, loose);
    assert_eq!(r.method, ResolutionMethod::Similarity);
    assert_eq!(r.article_title.as_deref(), Some("Emmanuel Macron"));
    assert!(r.confidence >= loose.threshold && r.confidence < 1.0);
    let strict = resolve_entity(&Span::synthetic("Emmanuel Macronn"), &kb, &emb, ResolveParams { threshold: 0.99, ..p });
    assert_eq!(strict.method, ResolutionMethod::Unresolved);

    let r = resolve_entity(&Span::synthetic("angry shopkeepers"), &kb, &emb, p);
    assert_eq!(r.method, ResolutionMethod::Unresolved);
    assert!(r.article_title.is_none());
}

#[test]
fn redirect_pairs_cover_every_redirect() {
    let kb = common::kb();
    let map = kb.redirect_map();
    let titles: Vec<String> = kb.articles().iter().map(|a| a.title.clone()).collect();
    let pairs = build_redirect_pairs(&map, &titles, 2, &lexical_similarity);
    let positives = pairs.iter().filter(|p| p.label == PairLabel::Positive).count();
    assert_eq!(positives, map.len());
    assert_eq!(pairs.len(), map.len() * 3);
    for p in &pairs {
        assert_eq!(p.label == PairLabel::Positive, map[&p.query] == p.target_title);
        assert_eq!(p.to_tsv().split('\t').count(), 3);
    }
}

#[test]
fn gazetteer_ingest_search_and_persist() {
    let (g, stats) = Gazetteer::ingest_gazetteer(&common::read_fixture("gazetteer.tsv"));
    assert_eq!(stats.rejected, 0);
    assert_eq!(stats.rows, g.len());
    let hits = g.search_places("Dehli", 5);
    assert_eq!(hits[0].entry.name, "Delhi");
    assert_eq!(hits[0].tier, MatchTier::AltName);
    let hits = g.search_places("Aybak", 5);
    assert_eq!(hits.len(), 3);
    assert!(hits.iter().all(|h| h.tier == MatchTier::Exact));
    assert_eq!(g.search_places("Mariupl", 3)[0].tier, MatchTier::Fuzzy);

    let dir = tempfile::tempdir().unwrap();
    g.save(dir.path()).unwrap();
    let back = Gazetteer::load(dir.path()).unwrap();
    assert_eq!(back.entries(), g.entries());

    let (_, stats) = Gazetteer::ingest_gazetteer("1\tToo\tfew\tcolumns\n");
    assert_eq!(stats.rejected, 1);
}

#[test]
fn country_context_picks_the_right_paris() {
    let g = common::gazetteer();
    let ann = GazetteerAnnotator::new(g.clone());
    let p = GeoParams::default();
    let text = "Thousands marched through Paris on Saturday. Police in France said the march was calm.";
    let resolved = resolve_places(text, &ann, &g, &p, None);
    let paris = resolved.iter().find(|r| r.mention.text == "Paris").unwrap();
    assert_eq!(paris.entry.as_ref().unwrap().country_code, "FR");
    assert!(paris.feature_breakdown.contains_key("population"));

    let qa = Span::new("Paris", 26, 31);
    assert_eq!(select_event_location(&resolved, Some(&qa)).unwrap().mention.text, "Paris");
    assert!(select_event_location(&resolved, None).is_none());
}

#[test]
fn bundled_tables_load() {
    let emb = NgramEmbedder::default();
    let agents = AgentFile::bundled(&emb);
    assert!(agents.len() > 2000, "{} agent patterns", agents.len());
    assert_eq!(agents.exact("civilians").unwrap().code, "CVL");
    assert_eq!(agents.categorize("riot policemen", &emb, 0.5).as_deref(), Some("COP"));

    let c = CountryTable::bundled();
    assert_eq!(c.lookup("Syrian"), Some("SYR"));
    assert_eq!(c.alpha3_for_alpha2("AF"), Some("AFG"));
    let (country, rest) = split_country("Afghan security forces", &c);
    assert_eq!(country.as_deref(), Some("AFG"));
    assert_eq!(rest.trim(), "security forces");
}

#[test]
fn office_holders_coded_by_story_date() {
    let mut e = Engine::builtin();
    e.kb = Some(common::kb());
    let code = |m: &str, d| e.code_mention(&Span::synthetic(m), d);
    let c = code("President Obama", day(2012, 6, 1));
    assert_eq!(c.wiki.as_deref(), Some("Barack Obama"));
    assert_eq!(c.code.basis, ActorBasis::KbOffice);
    assert_eq!(c.code.to_string(), "USA GOV");
    let c = code("President Obama", day(2019, 6, 1));
    assert_ne!(c.code.basis, ActorBasis::KbOffice);
    assert_eq!(c.code.country, "USA");

    let c = code("Afghan villagers", day(2020, 1, 1));
    assert_eq!(c.method, ResolutionMethod::Unresolved);
    assert_eq!(c.code.to_string(), "AFG CVL");
    let c = code("the crowd of onlookers", day(2020, 1, 1));
    assert!(c.code.country.is_empty());
}
