//! Criterion benchmarks for `seqalloc-core`; see `benches/`.
