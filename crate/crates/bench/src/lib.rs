//! Criterion benchmarks for the constructions, predicates and round trips.
//! Run with `cargo bench -p fibcat-bench`.
