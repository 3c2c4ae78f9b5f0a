//! Benchmarks for cubeplex live in `benches/`.
