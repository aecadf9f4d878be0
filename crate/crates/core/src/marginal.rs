//! Distance-based marginal features: locations, dispersions, asymmetry, skewness.

use log::warn;
use serde::Serialize;

use crate::error::{OtsError, Result};
use crate::probs::marginal_probabilities;
use crate::series::OrdinalSeries;
use crate::state::StateDistance;

pub(crate) fn check_distance(series: &OrdinalSeries, dist: &StateDistance) -> Result<()> {
    if dist.n_states() != series.n() + 1 {
        return Err(OtsError::InvalidDistance(format!(
            "distance covers {} states but the series has {}",
            dist.n_states(),
            series.n() + 1
        )));
    }
    Ok(())
}

/// `Σ_{i,j} d(s_i, s_j) p_i p_j`.
pub(crate) fn divc_from_probs(p: &[f64], dist: &StateDistance) -> f64 {
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        for (j, &pj) in p.iter().enumerate() {
            acc += dist.d(i, j) * pi * pj;
        }
    }
    acc
}

/// `Σ_{i,j} d(s_i, s_j) p_i p_{n-j}`.
pub(crate) fn reflected_from_probs(p: &[f64], dist: &StateDistance) -> f64 {
    let n = p.len() - 1;
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        for j in 0..=n {
            acc += dist.d(i, j) * pi * p[n - j];
        }
    }
    acc
}

/// Coefficients `c_i = d(s_i, s_n) - d(s_i, s_0)`; skewness is `cᵀp`.
pub(crate) fn skewness_weights(dist: &StateDistance) -> Vec<f64> {
    let n = dist.n_states() - 1;
    (0..=n).map(|i| dist.d(i, n) - dist.d(i, 0)).collect()
}

fn normalize(value: f64, dist: &StateDistance, normalized: bool) -> Result<f64> {
    if !normalized {
        return Ok(value);
    }
    if !dist.satisfies_maximization() {
        warn!(
            "normalizing by d(s0, sn) although the {} distance does not satisfy maximization",
            dist.kind()
        );
    }
    let d0n = dist.d0n();
    if d0n == 0.0 {
        return Err(OtsError::ZeroNormalizer);
    }
    Ok(value / d0n)
}

fn warn_if_not_centrosymmetric(dist: &StateDistance, what: &str) {
    if !dist.is_centrosymmetric() {
        warn!(
            "{what} computed with a {} distance that is not centrosymmetric",
            dist.kind()
        );
    }
}

/// `Ê[d(X_t, s_i)] = (1/T) Σ_t d(X̄_t, s_i)`.
pub fn expected_distance_to_state(
    series: &OrdinalSeries,
    dist: &StateDistance,
    state: usize,
) -> Result<f64> {
    check_distance(series, dist)?;
    if state > series.n() {
        return Err(OtsError::InvalidParameter(format!(
            "state index {state} exceeds n = {}",
            series.n()
        )));
    }
    let total: f64 = series.codes().iter().map(|&c| dist.d(c, state)).sum();
    Ok(total / series.len() as f64)
}

fn expected_distances(series: &OrdinalSeries, dist: &StateDistance) -> Vec<f64> {
    (0..=series.n())
        .map(|x| expected_distance_to_state(series, dist, x).expect("checked distance"))
        .collect()
}

/// `Ê[d(X¹_t, X²_t)]` for two independent copies.
pub fn divc_expected_distance(series: &OrdinalSeries, dist: &StateDistance) -> Result<f64> {
    check_distance(series, dist)?;
    Ok(divc_from_probs(&marginal_probabilities(series), dist))
}

/// `Ê[d(X_t, X^r_t)]` against an independent reflected copy.
pub fn reflected_expected_distance(series: &OrdinalSeries, dist: &StateDistance) -> Result<f64> {
    check_distance(series, dist)?;
    Ok(reflected_from_probs(&marginal_probabilities(series), dist))
}

fn argmin_smallest_index(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// State minimizing `Ê[d(X_t, x)]`; ties go to the smallest index.
pub fn ordinal_location_1(series: &OrdinalSeries, dist: &StateDistance) -> Result<usize> {
    check_distance(series, dist)?;
    Ok(argmin_smallest_index(
        expected_distances(series, dist).into_iter(),
    ))
}

/// State minimizing `|Ê[d(X_t, s0)] - d(x, s0)|`; ties go to the smallest index.
pub fn ordinal_location_2(series: &OrdinalSeries, dist: &StateDistance) -> Result<usize> {
    let to_first = expected_distance_to_state(series, dist, 0)?;
    Ok(argmin_smallest_index(
        (0..=series.n()).map(|x| (to_first - dist.d(x, 0)).abs()),
    ))
}

/// `Ê[d(X_t, x̂_loc)]`.
pub fn ordinal_dispersion_1(
    series: &OrdinalSeries,
    dist: &StateDistance,
    normalized: bool,
) -> Result<f64> {
    let loc = ordinal_location_1(series, dist)?;
    normalize(
        expected_distance_to_state(series, dist, loc)?,
        dist,
        normalized,
    )
}

/// DIVC dispersion `Ê[d(X¹_t, X²_t)]`, optionally divided by `d(s0, sn)`.
pub fn ordinal_dispersion_2(
    series: &OrdinalSeries,
    dist: &StateDistance,
    normalized: bool,
) -> Result<f64> {
    normalize(divc_expected_distance(series, dist)?, dist, normalized)
}

/// `Ê[d(X_t, X^r_t)] - disp̂_d`.
pub fn ordinal_asymmetry(
    series: &OrdinalSeries,
    dist: &StateDistance,
    normalized: bool,
) -> Result<f64> {
    check_distance(series, dist)?;
    warn_if_not_centrosymmetric(dist, "asymmetry");
    let p = marginal_probabilities(series);
    normalize(
        reflected_from_probs(&p, dist) - divc_from_probs(&p, dist),
        dist,
        normalized,
    )
}

/// `Ê[d(X_t, s_n)] - Ê[d(X_t, s_0)]`.
pub fn ordinal_skewness(
    series: &OrdinalSeries,
    dist: &StateDistance,
    normalized: bool,
) -> Result<f64> {
    warn_if_not_centrosymmetric(dist, "skewness");
    let to_last = expected_distance_to_state(series, dist, series.n())?;
    let to_first = expected_distance_to_state(series, dist, 0)?;
    normalize(to_last - to_first, dist, normalized)
}

/// The six marginal features of one series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginalFeatureSet {
    pub location_standard: usize,
    pub location_wrt_s0: usize,
    pub dispersion_1: f64,
    pub dispersion_2: f64,
    pub asymmetry: f64,
    pub skewness: f64,
    pub normalized: bool,
    /// Assumptions the distance violates, if any.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl MarginalFeatureSet {
    pub fn compute(series: &OrdinalSeries, dist: &StateDistance, normalized: bool) -> Result<Self> {
        check_distance(series, dist)?;
        let mut warnings = Vec::new();
        if normalized && !dist.satisfies_maximization() {
            warnings.push(
                "distance does not satisfy maximization; normalized ranges do not hold".into(),
            );
        }
        if !dist.is_centrosymmetric() {
            warnings.push(
                "distance is not centrosymmetric; asymmetry and skewness lose their interpretation"
                    .into(),
            );
        }
        let p = marginal_probabilities(series);
        let to_state = expected_distances(series, dist);
        let location_standard = argmin_smallest_index(to_state.iter().copied());
        let location_wrt_s0 =
            argmin_smallest_index((0..=series.n()).map(|x| (to_state[0] - dist.d(x, 0)).abs()));
        let divc = divc_from_probs(&p, dist);
        let reflected = reflected_from_probs(&p, dist);
        Ok(Self {
            location_standard,
            location_wrt_s0,
            dispersion_1: normalize(to_state[location_standard], dist, normalized)?,
            dispersion_2: normalize(divc, dist, normalized)?,
            asymmetry: normalize(reflected - divc, dist, normalized)?,
            skewness: normalize(to_state[series.n()] - to_state[0], dist, normalized)?,
            normalized,
            warnings,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{aw10, series_from};
    use crate::probs::c_marginal_probabilities;
    use crate::state::{DistanceKind, StateSpace};
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn block(k: usize) -> StateDistance {
        StateDistance::block(&StateSpace::numbered(k).unwrap())
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn expected_distance_small() {
        let s = series_from(&[0, 0, 0, 1], 2);
        assert!(close(
            expected_distance_to_state(&s, &block(2), 0).unwrap(),
            0.25
        ));
        assert!(close(
            expected_distance_to_state(&s, &block(2), 1).unwrap(),
            0.75
        ));
        assert!(expected_distance_to_state(&s, &block(2), 2).is_err());
        assert!(expected_distance_to_state(&s, &block(3), 0).is_err());
    }

    #[test]
    fn aw10_block_values() {
        let s = aw10();
        let d = block(6);
        assert!(close(
            expected_distance_to_state(&s, &d, 0).unwrap(),
            59.0 / 22.0
        ));
        assert!(close(
            divc_expected_distance(&s, &d).unwrap(),
            822.0 / 484.0
        ));
        assert!(close(ordinal_skewness(&s, &d, false).unwrap(), -8.0 / 22.0));
        assert_eq!(ordinal_location_1(&s, &d).unwrap(), 3);
        assert_eq!(ordinal_location_2(&s, &d).unwrap(), 3);
        let abs_dev: f64 = s
            .codes()
            .iter()
            .map(|&c| (c as f64 - 3.0).abs())
            .sum::<f64>()
            / 22.0;
        assert!(close(ordinal_dispersion_1(&s, &d, false).unwrap(), abs_dev));
        assert!(close(
            ordinal_dispersion_2(&s, &d, true).unwrap(),
            822.0 / 484.0 / 5.0
        ));
    }

    #[test]
    fn aw10_reflected_matches_direct_double_sum() {
        // p̂ counts (5, 0, 1, 9, 5, 2) over 22; reflected counts (2, 5, 9, 1, 0, 5).
        let counts = [5.0, 0.0, 1.0, 9.0, 5.0, 2.0];
        let mut acc = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                acc += (i as f64 - j as f64).abs() * counts[i] * counts[5 - j];
            }
        }
        let oracle = acc / 484.0;
        let s = aw10();
        let d = block(6);
        assert!(close(reflected_expected_distance(&s, &d).unwrap(), oracle));
        assert!(close(
            ordinal_asymmetry(&s, &d, false).unwrap(),
            oracle - 822.0 / 484.0
        ));
    }

    #[test]
    fn two_state_cases() {
        let half = series_from(&[0, 1], 2);
        assert!(close(
            divc_expected_distance(&half, &block(2)).unwrap(),
            0.5
        ));
        assert!(close(
            ordinal_dispersion_2(&half, &block(2), true).unwrap(),
            0.5
        ));
        assert_eq!(ordinal_location_1(&half, &block(2)).unwrap(), 0);
        assert_eq!(ordinal_location_2(&half, &block(2)).unwrap(), 0);
        let point = series_from(&[0, 0], 2);
        assert!(close(
            reflected_expected_distance(&point, &block(2)).unwrap(),
            1.0
        ));
        let s = series_from(&[0, 0, 0, 1], 2);
        assert_eq!(ordinal_location_1(&s, &block(2)).unwrap(), 0);
        assert!(close(
            ordinal_dispersion_1(&s, &block(2), false).unwrap(),
            0.25
        ));
    }

    #[test]
    fn constant_series() {
        let s = series_from(&[2; 10], 4);
        let d = block(4);
        assert_eq!(divc_expected_distance(&s, &d).unwrap(), 0.0);
        assert_eq!(ordinal_dispersion_1(&s, &d, false).unwrap(), 0.0);
        assert_eq!(ordinal_location_2(&s, &d).unwrap(), 2);
    }

    #[test]
    fn range_endpoints() {
        let d = block(5);
        let low = series_from(&[0; 6], 5);
        assert!(close(ordinal_asymmetry(&low, &d, false).unwrap(), d.d0n()));
        let high = series_from(&[4; 6], 5);
        assert!(close(ordinal_skewness(&high, &d, false).unwrap(), -d.d0n()));
        assert!(close(ordinal_skewness(&high, &d, true).unwrap(), -1.0));
    }

    #[test]
    fn symmetric_profile_has_zero_asymmetry_and_skewness() {
        let s = series_from(&[0, 1, 2, 3, 4, 4, 3, 2, 1, 0, 2, 2], 5);
        for d in [
            block(5),
            StateDistance::euclidean(&StateSpace::numbered(5).unwrap()),
            StateDistance::hamming(&StateSpace::numbered(5).unwrap()),
        ] {
            assert!(ordinal_asymmetry(&s, &d, false).unwrap().abs() <= 1e-12);
            assert!(ordinal_skewness(&s, &d, false).unwrap().abs() <= 1e-12);
            assert!(close(
                reflected_expected_distance(&s, &d).unwrap(),
                divc_expected_distance(&s, &d).unwrap()
            ));
        }
    }

    #[test]
    fn normalization_with_zero_d0n_fails() {
        let states = StateSpace::numbered(3).unwrap();
        let m = DMatrix::from_row_slice(3, 3, &[0., 1., 0., 1., 0., 1., 0., 1., 0.]);
        let d = StateDistance::build(DistanceKind::Custom, &states, Some(m)).unwrap();
        let s = series_from(&[0, 1, 2], 3);
        assert_eq!(
            ordinal_dispersion_2(&s, &d, true),
            Err(OtsError::ZeroNormalizer)
        );
        // The unnormalized value is still defined.
        assert!(ordinal_dispersion_2(&s, &d, false).is_ok());
        assert!(MarginalFeatureSet::compute(&s, &d, true).is_err());

        let m = DMatrix::from_row_slice(3, 3, &[0., 5., 1., 5., 0., 1., 1., 1., 0.]);
        let skewed = StateDistance::build(DistanceKind::Custom, &states, Some(m)).unwrap();
        let set = MarginalFeatureSet::compute(&s, &skewed, true).unwrap();
        assert_eq!(set.warnings.len(), 2);
    }

    #[test]
    fn feature_set_matches_individual_operations() {
        let s = aw10();
        for kind in [
            DistanceKind::Block,
            DistanceKind::Hamming,
            DistanceKind::Euclidean,
        ] {
            let d = StateDistance::build(kind, s.state_space(), None).unwrap();
            for normalized in [false, true] {
                let set = MarginalFeatureSet::compute(&s, &d, normalized).unwrap();
                assert_eq!(set.location_standard, ordinal_location_1(&s, &d).unwrap());
                assert_eq!(set.location_wrt_s0, ordinal_location_2(&s, &d).unwrap());
                assert!(close(
                    set.dispersion_1,
                    ordinal_dispersion_1(&s, &d, normalized).unwrap()
                ));
                assert!(close(
                    set.dispersion_2,
                    ordinal_dispersion_2(&s, &d, normalized).unwrap()
                ));
                assert!(close(
                    set.asymmetry,
                    ordinal_asymmetry(&s, &d, normalized).unwrap()
                ));
                assert!(close(
                    set.skewness,
                    ordinal_skewness(&s, &d, normalized).unwrap()
                ));
                assert!(set.warnings.is_empty());
            }
        }
    }

    fn arb_series() -> impl Strategy<Value = (Vec<usize>, usize)> {
        (2usize..8).prop_flat_map(|k| (proptest::collection::vec(0..k, 1..80), Just(k)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn block_identities((codes, k) in arb_series()) {
            let s = series_from(&codes, k);
            let d = block(k);
            let f = c_marginal_probabilities(&s);
            let via_f: f64 = 2.0 * f.iter().map(|v| v * (1.0 - v)).sum::<f64>();
            prop_assert!((ordinal_dispersion_2(&s, &d, false).unwrap() - via_f).abs() <= 1e-12);
            let mean = codes.iter().sum::<usize>() as f64 / codes.len() as f64;
            let n = (k - 1) as f64;
            prop_assert!((ordinal_skewness(&s, &d, false).unwrap() - (n - 2.0 * mean)).abs() <= 1e-12);
        }

        #[test]
        fn reflection_behaviour((codes, k) in arb_series(), kind in 0usize..3) {
            let s = series_from(&codes, k);
            let kind = [DistanceKind::Block, DistanceKind::Hamming, DistanceKind::Euclidean][kind];
            let d = StateDistance::build(kind, s.state_space(), None).unwrap();
            let r = s.reflected();
            prop_assert!((ordinal_skewness(&s, &d, false).unwrap() + ordinal_skewness(&r, &d, false).unwrap()).abs() <= 1e-9);
            prop_assert!((ordinal_dispersion_2(&s, &d, false).unwrap() - ordinal_dispersion_2(&r, &d, false).unwrap()).abs() <= 1e-9);
            prop_assert!((ordinal_asymmetry(&s, &d, false).unwrap() - ordinal_asymmetry(&r, &d, false).unwrap()).abs() <= 1e-9);
        }

        #[test]
        fn feature_ranges((codes, k) in arb_series(), kind in 0usize..3) {
            let s = series_from(&codes, k);
            let kind = [DistanceKind::Block, DistanceKind::Hamming, DistanceKind::Euclidean][kind];
            let d = StateDistance::build(kind, s.state_space(), None).unwrap();
            let f = MarginalFeatureSet::compute(&s, &d, false).unwrap();
            let top = d.d0n() + 1e-9;
            prop_assert!(f.location_standard < k && f.location_wrt_s0 < k);
            prop_assert!((-1e-9..=top).contains(&f.dispersion_1));
            prop_assert!((-1e-9..=top).contains(&f.dispersion_2));
            prop_assert!((-1e-9..=top).contains(&f.asymmetry));
            prop_assert!((-top..=top).contains(&f.skewness));
            let again = MarginalFeatureSet::compute(&s, &d, false).unwrap();
            prop_assert_eq!(f, again);
        }
    }
}
