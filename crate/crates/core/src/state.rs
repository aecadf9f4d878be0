//! State spaces and distances between ordinal states.
//!
//! Computation always works on state indices `0..=n`; labels only matter for
//! display and ingestion.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{OtsError, Result};

/// Ordered range `s0 < s1 < ... < sn`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpace {
    labels: Vec<String>,
}

impl StateSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(OtsError::TooFewStates(labels.len()));
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(OtsError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// States labelled `"0"`, `"1"`, ... up to `n_states - 1`.
    pub fn numbered(n_states: usize) -> Result<Self> {
        Self::new((0..n_states).map(|i| i.to_string()))
    }

    /// Number of states, `n + 1`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; a state space has at least two states.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest state index `n`.
    pub fn n(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Family of a state distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    Hamming,
    Block,
    Euclidean,
    Custom,
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            DistanceKind::Hamming => "hamming",
            DistanceKind::Block => "block",
            DistanceKind::Euclidean => "euclidean",
            DistanceKind::Custom => "custom",
        };
        f.write_str(name)
    }
}

impl FromStr for DistanceKind {
    type Err = OtsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hamming" => Ok(DistanceKind::Hamming),
            "block" => Ok(DistanceKind::Block),
            "euclidean" => Ok(DistanceKind::Euclidean),
            "custom" => Ok(DistanceKind::Custom),
            other => Err(OtsError::InvalidParameter(format!(
                "unknown distance {other:?}"
            ))),
        }
    }
}

/// Pairwise distance matrix over the states of a [`StateSpace`].
///
/// Entry `(i, j)` is `d(s_i, s_j)`. The maximization and centrosymmetry
/// flags are computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDistance {
    kind: DistanceKind,
    matrix: DMatrix<f64>,
    maximization: bool,
    centrosymmetric: bool,
}

const FLAG_TOL: f64 = 1e-12;

impl StateDistance {
    /// Builds one of the built-in distances, or validates a custom matrix.
    pub fn build(
        kind: DistanceKind,
        states: &StateSpace,
        custom: Option<DMatrix<f64>>,
    ) -> Result<Self> {
        let size = states.len();
        let matrix = match (kind, custom) {
            (DistanceKind::Custom, Some(m)) => {
                validate_custom(&m, size)?;
                m
            }
            (DistanceKind::Custom, None) => {
                return Err(OtsError::InvalidDistance(
                    "custom distance requires a matrix".into(),
                ))
            }
            (_, Some(_)) => {
                return Err(OtsError::InvalidDistance(
                    "a matrix can only be supplied for the custom distance".into(),
                ))
            }
            (DistanceKind::Hamming, None) => {
                DMatrix::from_fn(size, size, |i, j| if i == j { 0.0 } else { 1.0 })
            }
            (DistanceKind::Block, None) => {
                DMatrix::from_fn(size, size, |i, j| i.abs_diff(j) as f64)
            }
            (DistanceKind::Euclidean, None) => DMatrix::from_fn(size, size, |i, j| {
                let d = i.abs_diff(j) as f64;
                d * d
            }),
        };
        Ok(Self::from_validated(kind, matrix))
    }

    pub fn block(states: &StateSpace) -> Self {
        Self::build(DistanceKind::Block, states, None).expect("built-in distance")
    }

    pub fn hamming(states: &StateSpace) -> Self {
        Self::build(DistanceKind::Hamming, states, None).expect("built-in distance")
    }

    pub fn euclidean(states: &StateSpace) -> Self {
        Self::build(DistanceKind::Euclidean, states, None).expect("built-in distance")
    }

    fn from_validated(kind: DistanceKind, matrix: DMatrix<f64>) -> Self {
        let n = matrix.nrows() - 1;
        let d0n = matrix[(0, n)];
        let max = matrix.iter().cloned().fold(0.0_f64, f64::max);
        let maximization = d0n >= max - FLAG_TOL * max.max(1.0);
        let centrosymmetric = (0..=n)
            .all(|i| (0..=n).all(|j| (matrix[(i, j)] - matrix[(n - i, n - j)]).abs() <= FLAG_TOL));
        Self {
            kind,
            matrix,
            maximization,
            centrosymmetric,
        }
    }

    pub fn kind(&self) -> DistanceKind {
        self.kind
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Number of states the matrix covers.
    pub fn n_states(&self) -> usize {
        self.matrix.nrows()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    /// `d(s0, sn)`.
    pub fn d0n(&self) -> f64 {
        self.matrix[(0, self.matrix.nrows() - 1)]
    }

    pub fn satisfies_maximization(&self) -> bool {
        self.maximization
    }

    pub fn is_centrosymmetric(&self) -> bool {
        self.centrosymmetric
    }
}

fn validate_custom(m: &DMatrix<f64>, size: usize) -> Result<()> {
    if m.nrows() != size || m.ncols() != size {
        return Err(OtsError::InvalidDistance(format!(
            "expected a {size}x{size} matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    for i in 0..size {
        if m[(i, i)] != 0.0 {
            return Err(OtsError::InvalidDistance(format!(
                "diagonal entry {i} is {}",
                m[(i, i)]
            )));
        }
        for j in 0..size {
            let v = m[(i, j)];
            if !v.is_finite() || v < 0.0 {
                return Err(OtsError::InvalidDistance(format!(
                    "entry ({i}, {j}) = {v} is not a nonnegative number"
                )));
            }
            if v != m[(j, i)] {
                return Err(OtsError::InvalidDistance(format!(
                    "entries ({i}, {j}) and ({j}, {i}) differ"
                )));
            }
        }
    }
    Ok(())
}

/// Relative eigenvalue tolerance for [`validate_asymmetry_assumption`].
pub const PSD_RELATIVE_TOL: f64 = 1e-9;

/// Checks whether `(J - I) D` is positive semidefinite, `J` being the
/// counteridentity. Only the symmetric part matters for the quadratic form.
pub fn validate_asymmetry_assumption(dist: &StateDistance) -> bool {
    let size = dist.n_states();
    let reflect_minus_identity = DMatrix::from_fn(size, size, |i, j| {
        let counter = if i + j == size - 1 { 1.0 } else { 0.0 };
        let ident = if i == j { 1.0 } else { 0.0 };
        counter - ident
    });
    let m = &reflect_minus_identity * dist.matrix();
    let sym = (&m + m.transpose()) * 0.5;
    let eigen = SymmetricEigen::new(sym);
    let largest = eigen
        .eigenvalues
        .iter()
        .fold(0.0_f64, |a, v| a.max(v.abs()));
    if largest == 0.0 {
        return true;
    }
    eigen
        .eigenvalues
        .iter()
        .all(|&v| v >= -PSD_RELATIVE_TOL * largest)
}
