//! Criterion benchmarks for ghat-core live under `benches/`.
