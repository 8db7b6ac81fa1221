//! Criterion benchmarks for `affine-hall`; run with `cargo bench -p affine-hall-bench`.
