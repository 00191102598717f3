//! Shared fixtures for the benchmarks.

use hyperramsey::blocks::BlockHypergraph;
use hyperramsey::pipeline::{sample_w, sampling_probability, target_t};

/// The seeded H*_{q,3} used across benches.
pub fn host(q: u64) -> BlockHypergraph {
    BlockHypergraph::random(q, 3, 0).expect("valid parameters")
}

/// Host plus the vertex set sampled by a default witness run at `q`.
pub fn sample(q: u64) -> (BlockHypergraph, Vec<u32>, usize) {
    let h = host(q);
    let t = target_t(q, 3);
    let w = sample_w(h.vertex_count(), sampling_probability(t, 4.0, q), 1);
    (h, w, t)
}
