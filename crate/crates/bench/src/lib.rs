//! Benchmark-only crate; see `benches/pancake.rs`.
