//! Criterion benchmarks for choresolver live under `benches/`.
