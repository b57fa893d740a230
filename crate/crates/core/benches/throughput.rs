//! Documents per second through the builtin pipeline, one worker against a
//! full rayon pool. Build with `--no-default-features` to see the sequential
//! fallback take the second path too.

use std::path::PathBuf;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use evcoder::exec::{map_ordered, PARALLEL};
use evcoder::geo::GazetteerAnnotator;
use evcoder::kb::{EntityIndex, Gazetteer};
use evcoder::pipeline::read_documents;
use evcoder::{Document, Engine};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn engine() -> Engine {
    let mut e = Engine::builtin();
    e.kb = Some(EntityIndex::ingest_jsonl(&fixture("kb.jsonl")).0);
    let g = Arc::new(Gazetteer::ingest_gazetteer(&fixture("gazetteer.tsv")).0);
    e.places = Some(Arc::new(GazetteerAnnotator::new(g.clone())));
    e.gazetteer = Some(g);
    e
}

fn corpus(copies: usize) -> Vec<Document> {
    let base = read_documents(&fixture("corpus.jsonl")).expect("fixture corpus parses");
    (0..copies)
        .flat_map(|i| {
            base.iter().map(move |d| Document {
                id: format!("{}-{i}", d.id),
                ..d.clone()
            })
        })
        .collect()
}

fn bench_pipeline(c: &mut Criterion) {
    let engine = engine();
    let docs = corpus(4);
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(4);
    let mut g = c.benchmark_group("process_documents");
    g.throughput(Throughput::Elements(docs.len() as u64));
    g.sample_size(20);
    for (name, workers) in [("sequential", 1), (if PARALLEL { "parallel" } else { "fallback" }, threads)] {
        g.bench_with_input(BenchmarkId::new(name, workers), &workers, |b, &w| {
            b.iter(|| map_ordered(&docs, w, |d| engine.process_document(d).expect("builtin backends do not fail")))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_pipeline);
criterion_main!(benches);
