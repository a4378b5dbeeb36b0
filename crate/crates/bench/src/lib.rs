//! Criterion benchmarks for `mpfsim-core`; the code lives in `benches/engine.rs`.
