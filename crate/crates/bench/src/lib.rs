//! Benchmarks for localrat; see `benches/`.
