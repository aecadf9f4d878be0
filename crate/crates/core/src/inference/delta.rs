//! Delta-method tests and confidence intervals for dispersion, asymmetry and
//! skewness, plus a circular block bootstrap for cross-checking the
//! standard error.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hac::long_run_covariance;
use super::kappa::check_alpha;
use super::normal::{normal_quantile, two_sided_p_value};
use super::{ConfidenceInterval, InferenceMode, TestResult};
use crate::error::{OtsError, Result};
use crate::marginal::{check_distance, divc_from_probs, reflected_from_probs, skewness_weights};
use crate::probs::marginal_probabilities;
use crate::series::OrdinalSeries;
use crate::state::StateDistance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginalFeature {
    Dispersion,
    Asymmetry,
    Skewness,
}

impl fmt::Display for MarginalFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Dispersion => "dispersion",
            Self::Asymmetry => "asymmetry",
            Self::Skewness => "skewness",
        })
    }
}

impl FromStr for MarginalFeature {
    type Err = OtsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dispersion" | "disp" => Ok(Self::Dispersion),
            "asymmetry" | "asym" => Ok(Self::Asymmetry),
            "skewness" | "skew" => Ok(Self::Skewness),
            other => Err(OtsError::InvalidParameter(format!(
                "unknown feature '{other}'"
            ))),
        }
    }
}

impl MarginalFeature {
    /// `g(p)` on the unnormalized scale.
    pub fn evaluate(self, p: &[f64], dist: &StateDistance) -> f64 {
        match self {
            Self::Dispersion => divc_from_probs(p, dist),
            Self::Asymmetry => reflected_from_probs(p, dist) - divc_from_probs(p, dist),
            Self::Skewness => skewness_weights(dist)
                .iter()
                .zip(p)
                .map(|(c, p)| c * p)
                .sum(),
        }
    }

    /// `∇g(p)`.
    pub fn gradient(self, p: &[f64], dist: &StateDistance) -> DVector<f64> {
        let d = dist.matrix();
        let pv = DVector::from_column_slice(p);
        match self {
            Self::Dispersion => (d + d.transpose()) * &pv,
            Self::Asymmetry => {
                let k = p.len();
                let j = DMatrix::from_fn(k, k, |r, c| f64::from(u8::from(r + c + 1 == k)));
                let dj = d * &j;
                (&dj + dj.transpose()) * &pv - (d + d.transpose()) * &pv
            }
            Self::Skewness => DVector::from_vec(skewness_weights(dist)),
        }
    }
}

/// Settings for the delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct DeltaMethod {
    pub mode: InferenceMode,
    /// Bartlett bandwidth for the temporal mode; `None` uses `⌊T^{1/3}⌋`.
    pub bandwidth: Option<usize>,
}

impl DeltaMethod {
    pub fn iid() -> Self {
        Self {
            mode: InferenceMode::Iid,
            bandwidth: None,
        }
    }

    pub fn temporal() -> Self {
        Self {
            mode: InferenceMode::Temporal,
            bandwidth: None,
        }
    }

    pub fn with_bandwidth(mut self, bandwidth: usize) -> Self {
        self.bandwidth = Some(bandwidth);
        self
    }
}

/// Point estimate and its delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeatureEstimate {
    pub feature: MarginalFeature,
    pub estimate: f64,
    pub standard_error: f64,
}

pub fn feature_estimate(
    series: &OrdinalSeries,
    dist: &StateDistance,
    feature: MarginalFeature,
    method: &DeltaMethod,
) -> Result<FeatureEstimate> {
    check_distance(series, dist)?;
    let p = marginal_probabilities(series);
    let t = series.len() as f64;
    let cov = match method.mode {
        InferenceMode::Iid => {
            let k = p.len();
            DMatrix::from_fn(k, k, |i, j| {
                if i == j {
                    p[i] - p[i] * p[j]
                } else {
                    -p[i] * p[j]
                }
            })
        }
        InferenceMode::Temporal => long_run_covariance(series, method.bandwidth)?,
    };
    let grad = feature.gradient(&p, dist);
    let variance = (grad.transpose() * cov * &grad)[(0, 0)] / t;
    if !variance.is_finite() || variance <= 0.0 {
        return Err(OtsError::ZeroStandardError);
    }
    Ok(FeatureEstimate {
        feature,
        estimate: feature.evaluate(&p, dist),
        standard_error: variance.sqrt(),
    })
}

/// Two-sided test of `g = h0`.
pub fn test_marginal_feature(
    series: &OrdinalSeries,
    dist: &StateDistance,
    feature: MarginalFeature,
    h0: f64,
    alpha: f64,
    method: &DeltaMethod,
) -> Result<TestResult> {
    check_alpha(alpha)?;
    let est = feature_estimate(series, dist, feature, method)?;
    let statistic = (est.estimate - h0) / est.standard_error;
    Ok(TestResult {
        statistic,
        p_value: two_sided_p_value(statistic),
        critical_value: normal_quantile(1.0 - alpha / 2.0),
        alpha,
        h0_value: h0,
        mode: method.mode,
        estimate: est.estimate,
        standard_error: est.standard_error,
    })
}

/// `ĝ ± z_{(1+level)/2} se`.
pub fn ci_marginal_feature(
    series: &OrdinalSeries,
    dist: &StateDistance,
    feature: MarginalFeature,
    level: f64,
    method: &DeltaMethod,
) -> Result<ConfidenceInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(OtsError::InvalidParameter(format!(
            "confidence level {level} must lie in (0, 1)"
        )));
    }
    let est = feature_estimate(series, dist, feature, method)?;
    let half = normal_quantile((1.0 + level) / 2.0) * est.standard_error;
    Ok(ConfidenceInterval {
        lower: est.estimate - half,
        upper: est.estimate + half,
        level,
    })
}

/// `⌈T^{1/3}⌉`.
pub fn default_block_length(len: usize) -> usize {
    let mut b = (len as f64).cbrt().ceil() as usize;
    while b > 1 && (b - 1).pow(3) >= len {
        b -= 1;
    }
    while b.pow(3) < len {
        b += 1;
    }
    b.max(1)
}

pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 1000;

/// Circular block bootstrap standard deviation of `ĝ`.
///
/// Replicate `r` draws from its own ChaCha stream, so the result depends only
/// on `seed` and `resamples`.
pub fn bootstrap_standard_error(
    series: &OrdinalSeries,
    dist: &StateDistance,
    feature: MarginalFeature,
    resamples: usize,
    seed: u64,
) -> Result<f64> {
    check_distance(series, dist)?;
    if resamples < 2 {
        return Err(OtsError::InvalidParameter(
            "bootstrap needs at least 2 resamples".into(),
        ));
    }
    let codes = series.codes();
    let t = codes.len();
    let block = default_block_length(t);
    let k = series.n() + 1;
    let mut values = Vec::with_capacity(resamples);
    let mut counts = vec![0usize; k];
    for r in 0..resamples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        counts.iter_mut().for_each(|c| *c = 0);
        let mut filled = 0;
        while filled < t {
            let start = rng.random_range(0..t);
            for offset in 0..block.min(t - filled) {
                counts[codes[(start + offset) % t]] += 1;
            }
            filled += block;
        }
        let p: Vec<f64> = counts.iter().map(|&c| c as f64 / t as f64).collect();
        values.push(feature.evaluate(&p, dist));
    }
    let mean = values.iter().sum::<f64>() / resamples as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (resamples - 1) as f64;
    Ok(var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{aw10, series_from};
    use crate::marginal::{divc_expected_distance, ordinal_asymmetry, ordinal_skewness};
    use crate::state::StateSpace;
    use proptest::prelude::{
        prop_assert, prop_assert_eq, prop_assume, prop_oneof, proptest, Just, ProptestConfig,
    };

    fn block(k: usize) -> StateDistance {
        StateDistance::block(&StateSpace::numbered(k).unwrap())
    }

    #[test]
    fn estimates_match_marginal_features() {
        let s = aw10();
        let d = block(6);
        for (f, expected) in [
            (
                MarginalFeature::Dispersion,
                divc_expected_distance(&s, &d).unwrap(),
            ),
            (
                MarginalFeature::Asymmetry,
                ordinal_asymmetry(&s, &d, false).unwrap(),
            ),
            (
                MarginalFeature::Skewness,
                ordinal_skewness(&s, &d, false).unwrap(),
            ),
        ] {
            let est = feature_estimate(&s, &d, f, &DeltaMethod::iid()).unwrap();
            assert!((est.estimate - expected).abs() < 1e-12, "{f}");
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let p = [0.1, 0.25, 0.05, 0.3, 0.2, 0.1];
        let d = StateDistance::euclidean(&StateSpace::numbered(6).unwrap());
        for f in [
            MarginalFeature::Dispersion,
            MarginalFeature::Asymmetry,
            MarginalFeature::Skewness,
        ] {
            let grad = f.gradient(&p, &d);
            for i in 0..6 {
                let h = 1e-6;
                let mut up = p;
                up[i] += h;
                let mut down = p;
                down[i] -= h;
                let numeric = (f.evaluate(&up, &d) - f.evaluate(&down, &d)) / (2.0 * h);
                assert!((numeric - grad[i]).abs() < 1e-6, "{f} {i}");
            }
        }
    }

    #[test]
    fn symmetric_series_has_zero_skewness() {
        let mut codes: Vec<usize> = crate::fixtures::AW10_CODES.to_vec();
        codes.extend(crate::fixtures::AW10_CODES.iter().map(|c| 5 - c));
        let s = series_from(&codes, 6);
        let r = test_marginal_feature(
            &s,
            &block(6),
            MarginalFeature::Skewness,
            0.0,
            0.05,
            &DeltaMethod::iid(),
        )
        .unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(!r.rejects());
    }

    #[test]
    fn skewness_se_is_sample_mean_se() {
        let s = aw10();
        let d = block(6);
        let est = feature_estimate(&s, &d, MarginalFeature::Skewness, &DeltaMethod::iid()).unwrap();
        let values: Vec<f64> = s.codes().iter().map(|&c| d.d(c, 5) - d.d(c, 0)).collect();
        let t = values.len() as f64;
        let mean = values.iter().sum::<f64>() / t;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / t;
        assert!((est.standard_error - (var / t).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_series_is_an_error() {
        let s = series_from(&[2; 30], 5);
        for mode in [DeltaMethod::iid(), DeltaMethod::temporal()] {
            assert_eq!(
                test_marginal_feature(&s, &block(5), MarginalFeature::Dispersion, 0.0, 0.05, &mode),
                Err(OtsError::ZeroStandardError)
            );
        }
    }

    #[test]
    fn temporal_with_zero_bandwidth_equals_iid() {
        let s = aw10();
        let d = block(6);
        let a = feature_estimate(&s, &d, MarginalFeature::Asymmetry, &DeltaMethod::iid()).unwrap();
        let b = feature_estimate(
            &s,
            &d,
            MarginalFeature::Asymmetry,
            &DeltaMethod::temporal().with_bandwidth(0),
        )
        .unwrap();
        assert!((a.standard_error - b.standard_error).abs() < 1e-12);
    }

    #[test]
    fn intervals_are_nested() {
        let s = aw10();
        let d = block(6);
        let wide =
            ci_marginal_feature(&s, &d, MarginalFeature::Skewness, 0.95, &DeltaMethod::iid())
                .unwrap();
        let narrow =
            ci_marginal_feature(&s, &d, MarginalFeature::Skewness, 0.90, &DeltaMethod::iid())
                .unwrap();
        assert!(wide.lower < narrow.lower && narrow.upper < wide.upper);
        assert!((wide.center() - narrow.center()).abs() < 1e-12);
        assert!(
            ci_marginal_feature(&s, &d, MarginalFeature::Skewness, 1.0, &DeltaMethod::iid())
                .is_err()
        );
    }

    fn iid_sample(rng: &mut ChaCha8Rng, p: &[f64], t: usize) -> OrdinalSeries {
        let codes: Vec<usize> = (0..t)
            .map(|_| {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                p.iter()
                    .position(|&pi| {
                        acc += pi;
                        u < acc
                    })
                    .unwrap_or(p.len() - 1)
            })
            .collect();
        series_from(&codes, p.len())
    }

    #[test]
    fn size_and_coverage_away_from_symmetry() {
        // an asymmetric p keeps every gradient away from zero
        let p = [0.3, 0.1, 0.2, 0.25, 0.15];
        let d = block(5);
        let reps = 2000;
        for feature in [
            MarginalFeature::Dispersion,
            MarginalFeature::Asymmetry,
            MarginalFeature::Skewness,
        ] {
            let truth = feature.evaluate(&p, &d);
            let mut rejections = 0;
            let mut covered = 0;
            for r in 0..reps {
                let mut rng = ChaCha8Rng::seed_from_u64(77);
                rng.set_stream(r);
                let s = iid_sample(&mut rng, &p, 500);
                let method = DeltaMethod::iid();
                let test = test_marginal_feature(&s, &d, feature, truth, 0.05, &method).unwrap();
                rejections += usize::from(test.rejects());
                let ci = ci_marginal_feature(&s, &d, feature, 0.95, &method).unwrap();
                covered += usize::from(ci.contains(truth));
            }
            let size = rejections as f64 / reps as f64;
            let coverage = covered as f64 / reps as f64;
            assert!((size - 0.05).abs() <= 0.02, "{feature} size {size}");
            assert!(
                (coverage - 0.95).abs() <= 0.02,
                "{feature} coverage {coverage}"
            );
        }
    }

    #[test]
    fn temporal_mode_keeps_size_under_dependence() {
        // persistent chain: stay with probability 0.6, otherwise redraw uniformly
        let d = block(4);
        let reps = 1000;
        let truth = MarginalFeature::Skewness.evaluate(&[0.25; 4], &d);
        let (mut iid_rej, mut hac_rej) = (0, 0);
        for r in 0..reps {
            let mut rng = ChaCha8Rng::seed_from_u64(78);
            rng.set_stream(r);
            let mut c = rng.random_range(0..4);
            let codes: Vec<usize> = (0..1000)
                .map(|_| {
                    if rng.random::<f64>() >= 0.6 {
                        c = rng.random_range(0..4);
                    }
                    c
                })
                .collect();
            let s = series_from(&codes, 4);
            let f = MarginalFeature::Skewness;
            iid_rej += usize::from(
                test_marginal_feature(&s, &d, f, truth, 0.05, &DeltaMethod::iid())
                    .unwrap()
                    .rejects(),
            );
            hac_rej += usize::from(
                test_marginal_feature(&s, &d, f, truth, 0.05, &DeltaMethod::temporal())
                    .unwrap()
                    .rejects(),
            );
        }
        let iid_size = iid_rej as f64 / reps as f64;
        let hac_size = hac_rej as f64 / reps as f64;
        assert!(iid_size > 0.15, "{iid_size}");
        assert!((hac_size - 0.05).abs() < 0.03, "{hac_size}");
    }

    #[test]
    fn block_lengths() {
        assert_eq!(default_block_length(600), 9);
        assert_eq!(default_block_length(27), 3);
        assert_eq!(default_block_length(28), 4);
        assert_eq!(default_block_length(1), 1);
    }

    #[test]
    fn bootstrap_is_deterministic_and_close_for_iid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let codes: Vec<usize> = (0..800).map(|_| rng.random_range(0..5)).collect();
        let s = series_from(&codes, 5);
        let d = block(5);
        let a = bootstrap_standard_error(&s, &d, MarginalFeature::Skewness, 400, 9).unwrap();
        let b = bootstrap_standard_error(&s, &d, MarginalFeature::Skewness, 400, 9).unwrap();
        assert_eq!(a, b);
        let delta = feature_estimate(&s, &d, MarginalFeature::Skewness, &DeltaMethod::iid())
            .unwrap()
            .standard_error;
        assert!((a / delta - 1.0).abs() < 0.25, "{a} vs {delta}");
    }

    #[test]
    fn feature_names_round_trip() {
        for f in [
            MarginalFeature::Dispersion,
            MarginalFeature::Asymmetry,
            MarginalFeature::Skewness,
        ] {
            assert_eq!(f.to_string().parse::<MarginalFeature>().unwrap(), f);
        }
        assert!("kurtosis".parse::<MarginalFeature>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn test_and_interval_agree(
            codes in proptest::collection::vec(0usize..5, 10..80),
            h0 in -3.0f64..3.0,
            alpha in 0.01f64..0.3,
            feature in prop_oneof![
                Just(MarginalFeature::Dispersion),
                Just(MarginalFeature::Asymmetry),
                Just(MarginalFeature::Skewness)
            ],
        ) {
            prop_assume!(codes.iter().any(|&c| c != codes[0]));
            let s = series_from(&codes, 5);
            let d = block(5);
            let method = DeltaMethod::iid();
            let Ok(test) = test_marginal_feature(&s, &d, feature, h0, alpha, &method) else {
                return Ok(());
            };
            let ci = ci_marginal_feature(&s, &d, feature, 1.0 - alpha, &method).unwrap();
            prop_assert!(test.p_value >= 0.0 && test.p_value <= 1.0);
            let margin = 1e-9 * (1.0 + h0.abs());
            if (h0 - ci.lower).abs() > margin && (h0 - ci.upper).abs() > margin {
                prop_assert_eq!(ci.contains(h0), !test.rejects());
            }
            prop_assert_eq!(test.rejects(), test.statistic.abs() > test.critical_value || test.p_value < alpha);
        }
    }
}
