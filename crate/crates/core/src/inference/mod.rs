//! Hypothesis tests and confidence intervals.

use serde::{Deserialize, Serialize};

pub mod delta;
pub mod hac;
pub mod holm;
pub mod kappa;
pub mod normal;

pub use delta::{
    bootstrap_standard_error, ci_marginal_feature, default_block_length, feature_estimate,
    test_marginal_feature, DeltaMethod, FeatureEstimate, MarginalFeature,
    DEFAULT_BOOTSTRAP_RESAMPLES,
};
pub use hac::{default_bandwidth, long_run_covariance};
pub use holm::holm_adjust;
pub use kappa::{
    kappa_critical_values, kappa_diagnostics, kappa_null_distribution, KappaDiagnostics,
    KappaNullDistribution,
};
pub use normal::{normal_cdf, normal_quantile, normal_sf, two_sided_p_value};

/// How the covariance of `p̂` is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InferenceMode {
    /// Multinomial covariance, ignoring serial dependence.
    #[default]
    Iid,
    /// Bartlett long-run covariance.
    Temporal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestResult {
    /// Standardized statistic `(ĝ - h0) / se`.
    pub statistic: f64,
    pub p_value: f64,
    /// `z_{1-α/2}`.
    pub critical_value: f64,
    pub alpha: f64,
    pub h0_value: f64,
    pub mode: InferenceMode,
    pub estimate: f64,
    pub standard_error: f64,
}

impl TestResult {
    pub fn rejects(&self) -> bool {
        self.p_value < self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}
