//! Fixture loaders and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use evcoder::attribute::ScoreMatrix;
use evcoder::kb::{EntityIndex, Gazetteer};
use evcoder::model::{Attribute, AttributeRule};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn kb() -> EntityIndex {
    let (kb, stats) = EntityIndex::ingest_jsonl(&read_fixture("kb.jsonl"));
    assert_eq!(stats.malformed, 0);
    kb
}

pub fn gazetteer() -> Arc<Gazetteer> {
    let (g, stats) = Gazetteer::ingest_gazetteer(&read_fixture("gazetteer.tsv"));
    assert_eq!(stats.rejected, 0);
    Arc::new(g)
}

/// Best total of any partial one-to-one assignment of rows to columns.
pub fn brute_force_assignment(w: &[Vec<f64>]) -> f64 {
    fn go(w: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
        if row == w.len() {
            return 0.0;
        }
        let mut best = go(w, row + 1, used);
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                best = best.max(w[row][c] + go(w, row + 1, used));
                used[c] = false;
            }
        }
        best
    }
    let cols = w.first().map_or(0, Vec::len);
    go(w, 0, &mut vec![false; cols])
}

/// Optimal attribute assignment by enumeration, applying the same floor and
/// layout rules as `assign_spans`.
pub fn brute_force_attribute_total(m: &ScoreMatrix, rule: AttributeRule, floor: f64) -> f64 {
    let col = |a: Attribute| m.attributes.iter().position(|x| *x == a);
    let mut layouts = vec![];
    let mut base = vec![Attribute::Actor];
    if rule.recipient {
        base.push(Attribute::Recipient);
    }
    base.extend([Attribute::Location, Attribute::Date]);
    layouts.push(base);
    if rule.second_actor {
        layouts.push(vec![Attribute::Actor, Attribute::SecondActor, Attribute::Location, Attribute::Date]);
    }
    layouts
        .iter()
        .map(|layout| {
            let w: Vec<Vec<f64>> = m
                .cells
                .iter()
                .map(|row| {
                    layout
                        .iter()
                        .map(|a| {
                            let src = if *a == Attribute::SecondActor { Attribute::Actor } else { *a };
                            let v = col(src).map_or(0.0, |c| row[c]);
                            if v >= floor { v } else { 0.0 }
                        })
                        .collect()
                })
                .collect();
            brute_force_assignment(&w)
        })
        .fold(0.0, f64::max)
}

/// Consensus by enumeration: the majority vector is the binary vector with
/// the smallest summed Hamming distance to all models (the most positive one
/// among equals); the chosen model is the first closest to it.
pub fn brute_force_consensus(m: &[Vec<bool>]) -> usize {
    let n = m[0].len();
    let mut best_vec = 0u32;
    let mut best_cost = usize::MAX;
    for v in 0u32..(1 << n) {
        let cost: usize = m
            .iter()
            .map(|row| (0..n).filter(|&j| row[j] != (v >> j & 1 == 1)).count())
            .sum();
        if cost < best_cost || (cost == best_cost && v.count_ones() > best_vec.count_ones()) {
            best_cost = cost;
            best_vec = v;
        }
    }
    let dist = |row: &Vec<bool>| (0..n).filter(|&j| row[j] != (best_vec >> j & 1 == 1)).count();
    let mut idx = 0;
    for (i, row) in m.iter().enumerate() {
        if dist(row) < dist(&m[idx]) {
            idx = i;
        }
    }
    idx
}
