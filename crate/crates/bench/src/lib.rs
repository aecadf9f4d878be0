//! Inputs shared by the benchmarks.

use ots_core::simulate::models::simulate;
use ots_core::{
    make_benchmark_dataset, BenchmarkSpec, GeneratorSpec, ModelParams, OrdinalSeries, OtsDataset,
};

/// A binomial AR(1) series over six states.
pub fn series(length: usize, seed: u64) -> OrdinalSeries {
    let spec = GeneratorSpec {
        n: 5,
        length,
        seed,
        model: ModelParams::BinomialAr {
            pi: 0.4,
            rho: 0.5,
            weights: vec![1.0],
        },
    };
    simulate(&spec).expect("valid generator")
}

/// One of the shipped 80-series benchmark collections.
pub fn collection(index: usize) -> OtsDataset {
    let spec = BenchmarkSpec::shipped(index).expect("shipped benchmark");
    make_benchmark_dataset(&spec, 1).expect("valid benchmark")
}
