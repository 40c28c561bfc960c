//! Benchmarks for the orbit integrator and certificates live in `benches/`.
