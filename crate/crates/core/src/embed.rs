//! Baseline embedder: hashed character trigrams plus word unigrams.

use crate::backend::Embedder;
use crate::error::BackendError;
use crate::text;

/// Deterministic bag-of-n-grams embedder. Needs no model files, and makes
/// spelling variants ("defense"/"defence") land close together.
#[derive(Debug, Clone)]
pub struct NgramEmbedder {
    dim: usize,
    word_weight: f32,
}

impl Default for NgramEmbedder {
    fn default() -> Self {
        NgramEmbedder {
            dim: 1024,
            word_weight: 1.0,
        }
    }
}

// FNV-1a; stable across platforms and releases, unlike std's hasher.
fn fnv(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl NgramEmbedder {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "embedding dimension must be positive");
        NgramEmbedder {
            dim,
            ..Default::default()
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, s: &str) -> Vec<f32> {
        let mut v = vec![0f32; self.dim];
        for w in text::folded_tokens(s) {
            v[(fnv(w.as_bytes()) % self.dim as u64) as usize] += self.word_weight;
            let padded: Vec<char> = format!("<{w}>").chars().collect();
            for g in padded.windows(3) {
                let gram: String = g.iter().collect();
                let h = fnv(gram.as_bytes()) ^ 0x9e37_79b9_7f4a_7c15;
                v[(h % self.dim as u64) as usize] += 1.0;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f32>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }
}

impl Embedder for NgramEmbedder {
    fn id(&self) -> String {
        format!("ngram-hash:{}@1", self.dim)
    }

    fn embed(&self, texts: &[&str]) -> Result<Vec<Vec<f32>>, BackendError> {
        Ok(texts.iter().map(|t| self.vector(t)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::cosine;

    #[test]
    fn spelling_variants_are_close() {
        let e = NgramEmbedder::default();
        let a = e.vector("Defence Minister");
        let b = e.vector("defense minister");
        let c = e.vector("rebel leader");
        assert!(cosine(&a, &b) > 0.5, "{}", cosine(&a, &b));
        assert!(cosine(&a, &b) > cosine(&a, &c));
    }

    #[test]
    fn unit_norm_and_stable() {
        let e = NgramEmbedder::default();
        let v = e.embed(&["a", "a"]).unwrap();
        assert_eq!(v[0], v[1]);
        assert!((cosine(&v[0], &v[0]) - 1.0).abs() < 1e-6);
        assert!(e.vector("").iter().all(|x| *x == 0.0));
    }
}
