//! Benchmarks for the verification kernels live under `benches/`.
