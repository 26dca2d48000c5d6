//! Criterion benchmarks for `squarecat-core`; see `benches/`.
