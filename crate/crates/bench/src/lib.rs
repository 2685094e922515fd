//! Criterion benchmarks for `chazy-core`; see `benches/core.rs`.
