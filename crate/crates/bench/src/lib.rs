//! Benchmark-only crate. The benchmarks live in `benches/`.

/// Instances shared by the benchmarks, smallest first.
pub const INSTANCES: [(usize, usize); 3] = [(30, 10), (200, 40), (1000, 300)];
