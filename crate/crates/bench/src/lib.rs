//! Criterion benchmarks for the core constructions; see `benches/constructions.rs`.
