//! Criterion benchmarks for `wedge-core`; see `benches/`.
