//! Serial independence test based on the block-distance Cohen's κ.
//!
//! Under independence `κ̂(l)` is approximately normal with mean `-1/T` and
//! variance `4 / (T disp̂²) Σ_{k,l} (f̂_min(k,l) - f̂_k f̂_l)²`, the same for
//! every lag.

use serde::Serialize;

use super::normal::{normal_quantile, two_sided_p_value};
use crate::dependence::ordinal_cohens_kappa;
use crate::error::{OtsError, Result};
use crate::marginal::check_distance;
use crate::probs::c_marginal_probabilities;
use crate::series::OrdinalSeries;
use crate::state::{DistanceKind, StateDistance};

/// Normal approximation of `κ̂` under serial independence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaNullDistribution {
    pub mean: f64,
    pub variance: f64,
}

impl KappaNullDistribution {
    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }
}

pub fn kappa_null_distribution(
    series: &OrdinalSeries,
    dist: &StateDistance,
) -> Result<KappaNullDistribution> {
    check_distance(series, dist)?;
    if dist.kind() != DistanceKind::Block {
        return Err(OtsError::UnsupportedDistance(dist.kind().to_string()));
    }
    let f = c_marginal_probabilities(series);
    let disp = 2.0 * f.iter().map(|v| v * (1.0 - v)).sum::<f64>();
    if disp == 0.0 {
        return Err(OtsError::UndefinedDispersion);
    }
    let mut sum = 0.0;
    for (k, &fk) in f.iter().enumerate() {
        for (l, &fl) in f.iter().enumerate() {
            let v = f[k.min(l)] - fk * fl;
            sum += v * v;
        }
    }
    let t = series.len() as f64;
    Ok(KappaNullDistribution {
        mean: -1.0 / t,
        variance: 4.0 * sum / (t * disp * disp),
    })
}

/// Two-sided critical bounds at level `alpha`; they do not depend on the lag.
pub fn kappa_critical_values(
    series: &OrdinalSeries,
    dist: &StateDistance,
    alpha: f64,
) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    let null = kappa_null_distribution(series, dist)?;
    let half_width = normal_quantile(1.0 - alpha / 2.0) * null.sd();
    Ok((null.mean - half_width, null.mean + half_width))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(OtsError::InvalidParameter(format!(
            "significance level {alpha} must lie in (0, 1]"
        )));
    }
    Ok(())
}

/// Serial dependence plot payload: `κ̂(1..=L)`, the critical bounds, and
/// per-lag p-values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaDiagnostics {
    pub max_lag: usize,
    pub alpha: f64,
    pub kappas: Vec<f64>,
    pub p_values: Vec<f64>,
    pub critical_lower: f64,
    pub critical_upper: f64,
    pub null: KappaNullDistribution,
}

impl KappaDiagnostics {
    /// Lags (1-based) whose p-value falls below `alpha`.
    pub fn significant_lags(&self) -> Vec<usize> {
        self.p_values
            .iter()
            .enumerate()
            .filter(|(_, &p)| p < self.alpha)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

pub fn kappa_diagnostics(
    series: &OrdinalSeries,
    dist: &StateDistance,
    max_lag: usize,
    alpha: f64,
) -> Result<KappaDiagnostics> {
    if max_lag == 0 || max_lag >= series.len() {
        return Err(OtsError::InvalidLag {
            lag: max_lag,
            len: series.len(),
        });
    }
    let (critical_lower, critical_upper) = kappa_critical_values(series, dist, alpha)?;
    let null = kappa_null_distribution(series, dist)?;
    let kappas = (1..=max_lag)
        .map(|lag| ordinal_cohens_kappa(series, dist, lag))
        .collect::<Result<Vec<_>>>()?;
    let p_values = kappas
        .iter()
        .map(|k| two_sided_p_value((k - null.mean) / null.sd()))
        .collect();
    Ok(KappaDiagnostics {
        max_lag,
        alpha,
        kappas,
        p_values,
        critical_lower,
        critical_upper,
        null,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{aw10, series_from};
    use crate::state::StateSpace;
    use proptest::prelude::*;

    fn block(k: usize) -> StateDistance {
        StateDistance::block(&StateSpace::numbered(k).unwrap())
    }

    fn half_half(t: usize) -> OrdinalSeries {
        let codes: Vec<usize> = (0..t).map(|i| usize::from(i >= t / 2)).collect();
        series_from(&codes, 2)
    }

    #[test]
    fn null_distribution_two_states() {
        // f̂ = (0.5), T = 100: mean -0.01, variance 4 * 0.0625 / (100 * 0.25)
        let null = kappa_null_distribution(&half_half(100), &block(2)).unwrap();
        assert!((null.mean + 0.01).abs() < 1e-15);
        assert!((null.variance - 0.01).abs() < 1e-15);
    }

    #[test]
    fn critical_values_two_states() {
        let (lo, hi) = kappa_critical_values(&half_half(100), &block(2), 0.05).unwrap();
        assert!((lo - (-0.1 * 1.959_963_984_540_054 - 0.01)).abs() < 1e-10);
        assert!((hi - (0.1 * 1.959_963_984_540_054 - 0.01)).abs() < 1e-10);
        assert_eq!(format!("{lo:.3} {hi:.3}"), "-0.206 0.186");
        let (lo, hi) = kappa_critical_values(&half_half(100), &block(2), 1.0).unwrap();
        assert!((lo + 0.01).abs() < 1e-15 && (hi + 0.01).abs() < 1e-15);
    }

    #[test]
    fn widths_shrink_with_alpha() {
        let s = aw10();
        let mut last = f64::INFINITY;
        for alpha in [0.001, 0.01, 0.05, 0.1, 0.5, 0.9] {
            let (lo, hi) = kappa_critical_values(&s, &block(6), alpha).unwrap();
            let mean = -1.0 / 22.0;
            assert!(((hi - mean) - (mean - lo)).abs() < 1e-12);
            assert!(hi - mean < last);
            last = hi - mean;
        }
    }

    #[test]
    fn errors() {
        let s = aw10();
        let hamming = StateDistance::hamming(s.state_space());
        assert!(matches!(
            kappa_null_distribution(&s, &hamming),
            Err(OtsError::UnsupportedDistance(_))
        ));
        assert_eq!(
            kappa_null_distribution(&series_from(&[3; 9], 6), &block(6)),
            Err(OtsError::UndefinedDispersion)
        );
        assert!(kappa_critical_values(&s, &block(6), 0.0).is_err());
        assert!(kappa_diagnostics(&s, &block(6), 22, 0.05).is_err());
    }

    #[test]
    fn periodic_series_is_flagged_at_lag_two() {
        let codes: Vec<usize> = (0..200).map(|i| 2 * (i % 2)).collect();
        let s = series_from(&codes, 3);
        let diag = kappa_diagnostics(&s, &block(3), 4, 0.05).unwrap();
        assert_eq!(diag.kappas[1], 1.0);
        assert!(diag.p_values[1] < 1e-12);
        assert_eq!(diag.kappas.len(), 4);
        assert!(diag.significant_lags().contains(&2));
    }

    #[test]
    fn size_at_every_lag_for_iid_series() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let reps = 1000;
        let d = block(6);
        let mut rejections = [0usize; 10];
        for r in 0..reps {
            let mut rng = ChaCha8Rng::seed_from_u64(31);
            rng.set_stream(r);
            let codes: Vec<usize> = (0..600).map(|_| rng.random_range(0..6)).collect();
            let diag = kappa_diagnostics(&series_from(&codes, 6), &d, 10, 0.05).unwrap();
            for lag in diag.significant_lags() {
                rejections[lag - 1] += 1;
            }
        }
        let band = 3.0 * (0.05f64 * 0.95 / 1000.0).sqrt();
        for (lag, &count) in rejections.iter().enumerate() {
            let rate = count as f64 / reps as f64;
            assert!((rate - 0.05).abs() <= band, "lag {}: {rate}", lag + 1);
        }
    }

    proptest! {
        #[test]
        fn variance_invariant_under_reflection(codes in proptest::collection::vec(0usize..5, 5..60)) {
            prop_assume!(codes.iter().any(|&c| c != codes[0]));
            let s = series_from(&codes, 5);
            let a = kappa_null_distribution(&s, &block(5)).unwrap();
            let b = kappa_null_distribution(&s.reflected(), &block(5)).unwrap();
            prop_assert!((a.variance - b.variance).abs() <= 1e-12 * a.variance.max(1.0));
        }
    }
}
