mod common;

use chrono::{Days, NaiveDate};
use proptest::prelude::*;

use evcoder::assign::{assignment_total, max_weight_assignment};
use evcoder::attribute::{aggregate_scores, assign_spans, QaCandidate, ScoreMatrix};
use evcoder::classify::{nearest_rank, select_consensus_model};
use evcoder::geo::{rank_place_candidates, GeoWeights};
use evcoder::kb::GazetteerEntry;
use evcoder::model::{Attribute, AttributeRule};
use evcoder::preprocess::{prepare_text, remove_negated_sentences, CleanRules, RuleNegation, CODED_CHARS};
use evcoder::temporal::resolve_date;
use evcoder::{Document, Span};

fn matrix(max_rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_rows).prop_flat_map(move |r| prop::collection::vec(prop::collection::vec(0u32..1000, cols), r))
        .prop_map(|m| m.into_iter().map(|r| r.into_iter().map(|x| x as f64 / 500.0).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hungarian_matches_enumeration(w in (1usize..=5).prop_flat_map(|c| matrix(6, c))) {
        let a = max_weight_assignment(&w);
        let mut used = vec![false; w[0].len()];
        for c in a.iter().flatten() {
            prop_assert!(!used[*c], "column reused");
            used[*c] = true;
        }
        let got = assignment_total(&w, &a);
        prop_assert!((got - common::brute_force_assignment(&w)).abs() < 1e-9);
    }

    #[test]
    fn assign_spans_is_optimal_and_injective(
        cells in matrix(6, 4),
        second in any::<bool>(),
        recipient in any::<bool>(),
    ) {
        let spans = (0..cells.len()).map(|i| Span::synthetic(format!("span {i}"))).collect();
        let m = ScoreMatrix { spans, attributes: Attribute::ASKED.to_vec(), cells };
        let rule = AttributeRule { second_actor: second, recipient };
        let set = assign_spans(&m, rule, 0.1);
        let texts: Vec<&str> = set.filled().map(|(_, s)| s.span.text.as_str()).collect();
        let mut dedup = texts.clone();
        dedup.sort();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), texts.len(), "span used twice");
        prop_assert!(set.filled().all(|(_, s)| s.score >= 0.1));
        let sum: f64 = set.filled().map(|(_, s)| s.score).sum();
        prop_assert!((sum - set.assignment_score).abs() < 1e-9);
        let want = common::brute_force_attribute_total(&m, rule, 0.1);
        prop_assert!((set.assignment_score - want).abs() < 1e-9);
        if !recipient {
            prop_assert!(set.recipient.is_none());
        }
        if !second {
            prop_assert!(set.second_actor.is_none());
        }
    }

    #[test]
    fn aggregation_preserves_mass(
        picks in prop::collection::vec((0usize..5, 0usize..4, 0u32..1000), 1..30)
    ) {
        let names = ["Alpha", "Bravo", "Charlie", "Delta", "Echo"];
        let cands: Vec<QaCandidate> = picks
            .iter()
            .map(|&(s, a, x)| QaCandidate {
                span: Span::synthetic(names[s]),
                attribute: Attribute::ASKED[a],
                score: x as f64 / 1000.0,
                question_id: String::new(),
                round: 1,
            })
            .collect();
        let m = aggregate_scores(&cands);
        let total: f64 = m.cells.iter().flatten().sum();
        let want: f64 = cands.iter().map(|c| c.score).sum();
        prop_assert!((total - want).abs() < 1e-9);
        let distinct: std::collections::BTreeSet<usize> = picks.iter().map(|p| p.0).collect();
        prop_assert_eq!(m.spans.len(), distinct.len());
    }

    #[test]
    fn consensus_matches_enumeration(
        m in (1usize..=6, 1usize..=8).prop_flat_map(|(k, n)| prop::collection::vec(prop::collection::vec(any::<bool>(), n), k))
    ) {
        prop_assert_eq!(select_consensus_model(&m), common::brute_force_consensus(&m));
    }

    #[test]
    fn nearest_rank_is_a_sample_value_and_monotone(
        mut s in prop::collection::vec(0u32..100, 1..200),
        p in 0.0f64..=100.0,
        q in 0.0f64..=100.0,
    ) {
        s.sort();
        let s: Vec<f64> = s.into_iter().map(f64::from).collect();
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        let a = nearest_rank(&s, lo);
        let b = nearest_rank(&s, hi);
        prop_assert!(s.contains(&a));
        prop_assert!(a <= b);
        let above = s.iter().filter(|&&x| x > b).count();
        prop_assert!(above as f64 <= (100.0 - hi) / 100.0 * s.len() as f64 + 1e-9);
    }

    #[test]
    fn relative_past_never_after_publication(
        day in 0u64..20_000,
        n in 1u32..=20,
        unit in 0usize..4,
        kind in 0usize..4,
    ) {
        let pubd = NaiveDate::from_ymd_opt(1970, 1, 1).unwrap() + Days::new(day);
        let units = ["day", "week", "month", "year"];
        let phrase = match kind {
            0 => format!("{n} {}s ago", units[unit]),
            1 => format!("last {}", ["week", "month", "year", "week"][unit]),
            2 => ["yesterday", "Monday", "last Friday", "earlier this month"][unit].to_string(),
            _ => format!("last {}", ["January", "June", "September", "December"][unit]),
        };
        let r = resolve_date(&phrase, pubd);
        prop_assert!(r.is_some(), "`{}` unresolved", phrase);
        prop_assert!(r.unwrap().date <= pubd);
    }

    #[test]
    fn geo_argmax_survives_scaling(
        cands in prop::collection::vec((0usize..3, 0usize..5, 0usize..3, 0u64..10_000_000), 1..8),
        w in (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0),
        k in 0.001f64..1000.0,
    ) {
        let entries: Vec<GazetteerEntry> = cands
            .iter()
            .enumerate()
            .map(|(i, &(name, code, cc, pop))| GazetteerEntry {
                geoname_id: 100 + i as u64,
                name: ["Paris", "Parris", "Pariz"][name].into(),
                alt_names: vec![],
                latitude: 0.0,
                longitude: 0.0,
                feature_code: ["PPLC", "PPLA", "PPL", "ADM1", "HTL"][code].into(),
                country_code: ["FR", "US", "CA"][cc].into(),
                admin1: String::new(),
                population: pop,
            })
            .collect();
        let weights = GeoWeights { name: w.0, country: w.1, feature: w.2, population: w.3 };
        let mention = Span::synthetic("Paris");
        let a = rank_place_candidates(&mention, Some("FR"), &entries, &weights);
        let b = rank_place_candidates(&mention, Some("FR"), &entries, &weights.scaled(k));
        prop_assert_eq!(a[0].entry.geoname_id, b[0].entry.geoname_id);
        prop_assert!(a.windows(2).all(|p| p[0].score >= p[1].score));
    }

    #[test]
    fn coded_text_is_a_bounded_prefix(words in prop::collection::vec("[a-zA-Z]{1,12}|[0-9]{1,4}|é|\u{4e2d}", 1..600)) {
        let doc = Document::new("p", NaiveDate::from_ymd_opt(2020, 1, 1).unwrap(), words.join(" "));
        let p = prepare_text(&doc, &CleanRules::bundled()).unwrap();
        prop_assert!(p.coded_text.chars().count() <= CODED_CHARS);
        prop_assert!(p.cleaned_text.starts_with(&p.coded_text));
        prop_assert_eq!(CleanRules::bundled().clean(&p.cleaned_text), p.cleaned_text.clone());
    }

    #[test]
    fn negation_removal_never_grows(sentences in prop::collection::vec("(The [a-z]{3,8} (did not|will|never|has) [a-z]{3,8} the [a-z]{3,8}\\.)", 1..8)) {
        let text = sentences.join(" ");
        let kept = remove_negated_sentences(&text, &RuleNegation::default());
        prop_assert!(kept.len() <= text.len());
        for s in RuleNegation::sentences(&kept).iter().map(|&(a, b)| &kept[a..b]) {
            prop_assert!(text.contains(s.trim()));
        }
    }
}
