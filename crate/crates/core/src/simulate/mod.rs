//! Synthetic ordinal series and labelled benchmark collections.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{OtsError, Result};
use crate::series::OtsDataset;
use crate::state::StateSpace;

pub mod models;

pub use models::{
    logit_conditional_cdf, simulate, simulate_binomial_ar, simulate_binomial_inarch,
    simulate_ordinal_logit_ar1, thinning_probabilities, GeneratorSpec, ModelParams, BURN_IN,
};

const SYNTHETIC_1: &str = include_str!("../../configs/synthetic1.json");
const SYNTHETIC_2: &str = include_str!("../../configs/synthetic2.json");
const SYNTHETIC_3: &str = include_str!("../../configs/synthetic3.json");

fn default_n() -> usize {
    5
}

fn default_length() -> usize {
    600
}

fn default_per_group() -> usize {
    20
}

/// A labelled collection: `per_group` series from each model in `groups`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(rename = "T", default = "default_length")]
    pub length: usize,
    #[serde(default = "default_per_group")]
    pub per_group: usize,
    pub groups: Vec<ModelParams>,
}

impl BenchmarkSpec {
    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json)
            .map_err(|e| OtsError::InvalidParameter(format!("benchmark config: {e}")))
    }

    /// Shipped configurations: 1 = binomial AR, 2 = binomial INARCH,
    /// 3 = ordinal logit AR(1).
    pub fn shipped(index: usize) -> Result<Self> {
        let json = match index {
            1 => SYNTHETIC_1,
            2 => SYNTHETIC_2,
            3 => SYNTHETIC_3,
            other => {
                return Err(OtsError::InvalidParameter(format!(
                    "no shipped benchmark {other}; choose 1, 2 or 3"
                )))
            }
        };
        Self::from_json(json)
    }

    pub fn total(&self) -> usize {
        self.groups.len() * self.per_group
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of series `index` in `group`, independent of generation order.
pub fn derive_seed(seed: u64, group: usize, index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ group as u64) ^ index as u64)
}

/// Generates the collection; class labels are the 1-based group numbers.
pub fn make_benchmark_dataset(spec: &BenchmarkSpec, seed: u64) -> Result<OtsDataset> {
    if spec.groups.is_empty() || spec.per_group == 0 {
        return Err(OtsError::InvalidParameter("benchmark has no series".into()));
    }
    let states = Arc::new(StateSpace::numbered(spec.n + 1)?);
    let mut series = Vec::with_capacity(spec.total());
    let mut labels = Vec::with_capacity(spec.total());
    for (group, model) in spec.groups.iter().enumerate() {
        for index in 0..spec.per_group {
            let generator = GeneratorSpec {
                n: spec.n,
                length: spec.length,
                seed: derive_seed(seed, group, index),
                model: model.clone(),
            };
            let s = simulate(&generator)?;
            series.push(crate::series::OrdinalSeries::new(
                s.codes().to_vec(),
                Arc::clone(&states),
            )?);
            labels.push(group as i64 + 1);
        }
    }
    OtsDataset::new(spec.name.clone(), states, series, Some(labels))
}
