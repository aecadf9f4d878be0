use std::sync::Arc;

use crate::error::{OtsError, Result};
use crate::state::StateSpace;

/// A realization `C_1, ..., C_T` of the count process behind an ordinal series.
///
/// Codes are state indices in `0..=n`; `n` always comes from the state space,
/// so a series may leave some states unvisited.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinalSeries {
    codes: Vec<usize>,
    states: Arc<StateSpace>,
}

impl OrdinalSeries {
    pub fn new(codes: Vec<usize>, states: Arc<StateSpace>) -> Result<Self> {
        if codes.is_empty() {
            return Err(OtsError::EmptySeries);
        }
        let n = states.n();
        if let Some((position, &code)) = codes.iter().enumerate().find(|(_, &c)| c > n) {
            return Err(OtsError::CodeOutOfRange {
                position,
                code: code as i64,
                max: n,
            });
        }
        Ok(Self { codes, states })
    }

    /// Accepts signed codes, as they come out of parsers.
    pub fn from_signed(codes: &[i64], states: Arc<StateSpace>) -> Result<Self> {
        let n = states.n();
        let mut out = Vec::with_capacity(codes.len());
        for (position, &code) in codes.iter().enumerate() {
            if code < 0 || code as u64 > n as u64 {
                return Err(OtsError::CodeOutOfRange {
                    position,
                    code,
                    max: n,
                });
            }
            out.push(code as usize);
        }
        Self::new(out, states)
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S], states: Arc<StateSpace>) -> Result<Self> {
        let codes = labels
            .iter()
            .map(|l| {
                states
                    .index_of(l.as_ref())
                    .ok_or_else(|| OtsError::UnknownLabel(l.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(codes, states)
    }

    pub fn to_labels(&self) -> Vec<&str> {
        self.codes
            .iter()
            .map(|&c| self.states.label(c).expect("validated code"))
            .collect()
    }

    pub fn codes(&self) -> &[usize] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn state_space(&self) -> &Arc<StateSpace> {
        &self.states
    }

    /// Largest state index `n`.
    pub fn n(&self) -> usize {
        self.states.n()
    }

    /// Maps every code `c` to `n - c`.
    pub fn reflected(&self) -> Self {
        let n = self.n();
        Self {
            codes: self.codes.iter().map(|&c| n - c).collect(),
            states: Arc::clone(&self.states),
        }
    }

    /// The same observations in reverse time order.
    pub fn time_reversed(&self) -> Self {
        Self {
            codes: self.codes.iter().rev().copied().collect(),
            states: Arc::clone(&self.states),
        }
    }

    pub(crate) fn check_lag(&self, lag: usize) -> Result<()> {
        if lag >= self.len() {
            return Err(OtsError::InvalidLag {
                lag,
                len: self.len(),
            });
        }
        Ok(())
    }
}

/// Real-valued companion series `Z_1, ..., Z_T`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSeries(pub Vec<f64>);

impl NumericSeries {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for NumericSeries {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

/// A named collection of series over one state space, optionally labelled.
#[derive(Debug, Clone, PartialEq)]
pub struct OtsDataset {
    pub name: String,
    series: Vec<OrdinalSeries>,
    states: Arc<StateSpace>,
    class_labels: Option<Vec<i64>>,
}

impl OtsDataset {
    pub fn new(
        name: impl Into<String>,
        states: Arc<StateSpace>,
        series: Vec<OrdinalSeries>,
        class_labels: Option<Vec<i64>>,
    ) -> Result<Self> {
        if series.iter().any(|s| s.state_space() != &states) {
            return Err(OtsError::StateSpaceMismatch);
        }
        if let Some(labels) = &class_labels {
            if labels.len() != series.len() {
                return Err(OtsError::LengthMismatch {
                    left: series.len(),
                    right: labels.len(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            series,
            states,
            class_labels,
        })
    }

    pub fn series(&self) -> &[OrdinalSeries] {
        &self.series
    }

    pub fn state_space(&self) -> &Arc<StateSpace> {
        &self.states
    }

    pub fn class_labels(&self) -> Option<&[i64]> {
        self.class_labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Appends the series of `other`; labels are kept only if both sides have them.
    pub fn concat(mut self, other: OtsDataset) -> Result<Self> {
        if other.states != self.states {
            return Err(OtsError::StateSpaceMismatch);
        }
        self.class_labels = match (self.class_labels.take(), other.class_labels) {
            (Some(mut a), Some(b)) => {
                a.extend(b);
                Some(a)
            }
            _ => None,
        };
        self.series.extend(other.series);
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn states(n_states: usize) -> Arc<StateSpace> {
        Arc::new(StateSpace::numbered(n_states).unwrap())
    }

    #[test]
    fn rejects_empty_and_out_of_range() {
        assert_eq!(
            OrdinalSeries::new(vec![], states(3)),
            Err(OtsError::EmptySeries)
        );
        assert_eq!(
            OrdinalSeries::new(vec![0, 3], states(3)),
            Err(OtsError::CodeOutOfRange {
                position: 1,
                code: 3,
                max: 2
            })
        );
        assert!(OrdinalSeries::from_signed(&[0, -1], states(3)).is_err());
    }

    #[test]
    fn unvisited_states_are_allowed() {
        let s = OrdinalSeries::new(vec![0, 0, 0], states(6)).unwrap();
        assert_eq!(s.n(), 5);
    }

    #[test]
    fn dataset_checks_labels_and_states() {
        let st = states(3);
        let a = OrdinalSeries::new(vec![0, 1], Arc::clone(&st)).unwrap();
        let other = OrdinalSeries::new(vec![0, 1], states(3)).unwrap();
        // Equal content in a distinct allocation still counts as the same space.
        assert!(OtsDataset::new("x", Arc::clone(&st), vec![a.clone(), other], None).is_ok());
        let foreign = OrdinalSeries::new(vec![0, 1], states(4)).unwrap();
        assert_eq!(
            OtsDataset::new("x", Arc::clone(&st), vec![a.clone(), foreign], None),
            Err(OtsError::StateSpaceMismatch)
        );
        assert!(OtsDataset::new("x", st, vec![a], Some(vec![1, 2])).is_err());
    }

    proptest! {
        #[test]
        fn label_round_trip(codes in proptest::collection::vec(0usize..5, 1..50)) {
            let st = Arc::new(StateSpace::new(["a", "b", "c", "d", "e"]).unwrap());
            let s = OrdinalSeries::new(codes, Arc::clone(&st)).unwrap();
            let labels = s.to_labels();
            let back = OrdinalSeries::from_labels(&labels, st).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
