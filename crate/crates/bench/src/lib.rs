//! Criterion benchmarks for `isogeo`; run with `cargo bench -p isogeo-bench`.
