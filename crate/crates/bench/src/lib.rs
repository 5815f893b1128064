//! Criterion benchmarks for the kstab engine; see `benches/`.
