//! Criterion benchmarks for `ebm-core`; see `benches/`.
