//! Benchmark harness support for the discrete Appell crates. The criterion
//! targets live under `benches/`.
