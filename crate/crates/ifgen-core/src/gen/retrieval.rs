//! Embedding index over document chunks with top-k retrieval.

use super::chunk::Chunk;
use super::embed::{cosine, embed};

/// A chunk index: every chunk embedded once at build time.
pub struct RetrievalIndex {
    chunks: Vec<Chunk>,
    vectors: Vec<Vec<f64>>,
}

/// One retrieval hit, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct Retrieved {
    pub chunk_index: usize,
    pub score: f64,
    pub text: String,
}

impl RetrievalIndex {
    pub fn build(chunks: Vec<Chunk>) -> Self {
        let vectors = chunks.iter().map(|c| embed(&c.text)).collect();
        RetrievalIndex { chunks, vectors }
    }

    pub fn len(&self) -> usize {
        self.chunks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chunks.is_empty()
    }

    /// The `k` chunks most similar to the query, ordered by descending
    /// score with ties broken by ascending chunk index. Returns fewer than
    /// `k` only when the index is smaller than `k`.
    pub fn retrieve_top_k(&self, query: &str, k: usize) -> Vec<Retrieved> {
        let qv = embed(query);
        let mut scored: Vec<(usize, f64)> = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, v)| (i, cosine(&qv, v)))
            .collect();
        scored.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .expect("cosine never yields NaN")
                .then(a.0.cmp(&b.0))
        });
        scored
            .into_iter()
            .take(k)
            .map(|(i, score)| Retrieved {
                chunk_index: i,
                score,
                text: self.chunks[i].text.clone(),
            })
            .collect()
    }
}
