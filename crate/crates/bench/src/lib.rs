//! Criterion benchmarks for ptacl-core; see `benches/evaluation.rs`.
