//! Classical (Torgerson) multidimensional scaling.

use log::warn;
use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::distance::DistanceMatrix;
use crate::error::{OtsError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdsEmbedding {
    /// One row per object, one column per dimension.
    pub coordinates: Vec<Vec<f64>>,
    /// Leading eigenvalues of the double-centred matrix, in decreasing order.
    pub eigenvalues: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Embeds the objects of `dm` in `dims` dimensions.
///
/// Entries of `dm` are taken as distances, so they are squared before double
/// centring. Each axis is signed so that its first nonzero coordinate is
/// positive.
pub fn classical_mds(dm: &DistanceMatrix, dims: usize) -> Result<MdsEmbedding> {
    let m = dm.size();
    if dims == 0 || m < dims + 1 {
        return Err(OtsError::InvalidParameter(format!(
            "scaling {m} objects into {dims} dimensions needs at least {} objects",
            dims + 1
        )));
    }
    let sq = DMatrix::from_fn(m, m, |i, j| dm.get(i, j).powi(2));
    let row_means: Vec<f64> = (0..m).map(|i| sq.row(i).sum() / m as f64).collect();
    let grand = row_means.iter().sum::<f64>() / m as f64;
    let b = DMatrix::from_fn(m, m, |i, j| {
        -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand)
    });

    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &c| eig.eigenvalues[c].total_cmp(&eig.eigenvalues[a]));
    let scale = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    let threshold = 1e-12 * scale.max(f64::MIN_POSITIVE);

    let mut coordinates = vec![vec![0.0; dims]; m];
    let mut eigenvalues = Vec::with_capacity(dims);
    let mut warnings = Vec::new();
    for (axis, &idx) in order.iter().take(dims).enumerate() {
        let lambda = eig.eigenvalues[idx];
        eigenvalues.push(lambda);
        if lambda <= threshold {
            let msg = format!(
                "axis {} has no positive eigenvalue; coordinates set to zero",
                axis + 1
            );
            warn!("{msg}");
            warnings.push(msg);
            continue;
        }
        let v = eig.eigenvectors.column(idx);
        let sign = v
            .iter()
            .find(|x| x.abs() > 1e-12)
            .map_or(1.0, |x| x.signum());
        let root = lambda.sqrt();
        for (i, row) in coordinates.iter_mut().enumerate() {
            row[axis] = sign * v[i] * root;
        }
    }
    Ok(MdsEmbedding {
        coordinates,
        eigenvalues,
        warnings,
    })
}
