//! Criterion benchmarks for `weyldl-core`; see `benches/core.rs`.
