//! Distance-sum outlier scores and the boxplot rule.

use serde::Serialize;

use super::distance::DistanceMatrix;
use crate::error::{OtsError, Result};

pub const DEFAULT_RANGE_COEF: f64 = 1.0;

/// Sample quantile by linear interpolation between order statistics
/// (`h = (m - 1) q`).
pub fn quantile_type7(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxplotFence {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub iqr: f64,
    pub range_coef: f64,
    /// `Q3 + range_coef · IQR`.
    pub upper_fence: f64,
    /// `score > upper_fence`.
    pub flags: Vec<bool>,
}

/// Flags scores strictly above `Q3 + range_coef · IQR`.
pub fn boxplot_outlier_flags(scores: &[f64], range_coef: f64) -> Result<BoxplotFence> {
    if scores.len() < 4 {
        return Err(OtsError::InvalidParameter(format!(
            "the boxplot rule needs at least 4 scores, got {}",
            scores.len()
        )));
    }
    if scores.iter().any(|s| !s.is_finite()) || range_coef.is_nan() || range_coef < 0.0 {
        return Err(OtsError::InvalidParameter(
            "scores must be finite and the range coefficient nonnegative".into(),
        ));
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_type7(&sorted, 0.25);
    let q3 = quantile_type7(&sorted, 0.75);
    let iqr = q3 - q1;
    let upper_fence = q3 + range_coef * iqr;
    Ok(BoxplotFence {
        q1,
        median: quantile_type7(&sorted, 0.5),
        q3,
        iqr,
        range_coef,
        upper_fence,
        flags: scores.iter().map(|&s| s > upper_fence).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutlierReport {
    /// `Σ_j d(i, j)` per object.
    pub scores: Vec<f64>,
    /// Object indices by decreasing score, lowest index first on ties.
    pub ranking: Vec<usize>,
    /// Boxplot rule on the scores; absent with fewer than 4 objects.
    pub fence: Option<BoxplotFence>,
}

impl OutlierReport {
    pub fn top(&self, count: usize) -> &[usize] {
        &self.ranking[..count.min(self.ranking.len())]
    }
}

pub fn outlier_ranking(dm: &DistanceMatrix) -> Result<OutlierReport> {
    outlier_report(dm, DEFAULT_RANGE_COEF)
}

pub fn outlier_report(dm: &DistanceMatrix, range_coef: f64) -> Result<OutlierReport> {
    if dm.size() < 2 {
        return Err(OtsError::InvalidParameter(
            "outlier ranking needs at least 2 objects".into(),
        ));
    }
    let scores = dm.row_sums();
    let mut ranking: Vec<usize> = (0..scores.len()).collect();
    ranking.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let fence = if scores.len() >= 4 {
        Some(boxplot_outlier_flags(&scores, range_coef)?)
    } else {
        None
    };
    Ok(OutlierReport {
        scores,
        ranking,
        fence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn type7_quartiles() {
        // h = 4q on (1, 2, 4, 7, 20): Q1 = 2, Q3 = 7
        let s = [1.0, 2.0, 4.0, 7.0, 20.0];
        assert_eq!(quantile_type7(&s, 0.25), 2.0);
        assert_eq!(quantile_type7(&s, 0.75), 7.0);
        // h = 3q on (1, 2, 3, 10): Q1 = 1.75, Q3 = 4.75
        let s = [1.0, 2.0, 3.0, 10.0];
        assert_eq!(quantile_type7(&s, 0.25), 1.75);
        assert_eq!(quantile_type7(&s, 0.75), 4.75);
    }

    #[test]
    fn boxplot_rule() {
        let r = boxplot_outlier_flags(&[1.0, 1.0, 1.0, 1.0, 100.0], 1.0).unwrap();
        assert_eq!(r.flags, vec![false, false, false, false, true]);
        let r = boxplot_outlier_flags(&[3.0; 6], 1.0).unwrap();
        assert!(r.flags.iter().all(|f| !f));
        // Q1 = 2, Q3 = 7, fence = 12: 12 is not flagged, 12.5 is
        let r = boxplot_outlier_flags(&[7.0, 2.0, 1.0, 4.0, 12.0], 1.0).unwrap();
        assert_eq!(r.upper_fence, 12.0);
        assert!(!r.flags[4]);
        let r = boxplot_outlier_flags(&[7.0, 2.0, 1.0, 4.0, 12.5], 1.0).unwrap();
        assert!(r.flags[4]);
        assert!(boxplot_outlier_flags(&[1.0, 2.0, 3.0], 1.0).is_err());
    }

    #[test]
    fn far_object_ranks_first() {
        let pts = [0.0f64, 0.1, 0.2, 9.0, 0.15];
        let dm = DistanceMatrix::from_fn(5, |i, j| (pts[i] - pts[j]).abs()).unwrap();
        let r = outlier_ranking(&dm).unwrap();
        assert_eq!(r.ranking[0], 3);
        assert!(r.fence.unwrap().flags[3]);
        let flat = DistanceMatrix::from_fn(4, |_, _| 1.0).unwrap();
        assert_eq!(outlier_ranking(&flat).unwrap().ranking, vec![0, 1, 2, 3]);
    }

    proptest! {
        #[test]
        fn ranking_is_a_sorted_permutation(pts in proptest::collection::vec(0.0f64..10.0, 2..30)) {
            let dm = DistanceMatrix::from_fn(pts.len(), |i, j| (pts[i] - pts[j]).abs()).unwrap();
            let r = outlier_ranking(&dm).unwrap();
            let mut seen = r.ranking.clone();
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..pts.len()).collect::<Vec<_>>());
            for w in r.ranking.windows(2) {
                prop_assert!(r.scores[w[0]] >= r.scores[w[1]]);
            }
            if let Some(f) = &r.fence {
                for (i, &flag) in f.flags.iter().enumerate() {
                    prop_assert_eq!(flag, r.scores[i] > f.upper_fence);
                }
            }
        }
    }
}
