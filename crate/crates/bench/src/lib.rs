//! Criterion benchmarks for the oracles; see `benches/oracles.rs`.
