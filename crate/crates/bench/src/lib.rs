//! Benchmarks live under `benches/`; run them with `cargo bench -p syndyn-bench`.

pub use syndyn_core as core;
