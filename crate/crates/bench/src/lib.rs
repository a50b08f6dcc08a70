//! Micro-benchmark package; the timings live in `benches/hot_paths.rs`.
