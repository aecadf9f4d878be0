//! Long-run covariance of the one-hot state indicators.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{OtsError, Result};
use crate::probs::marginal_probabilities;
use crate::series::OrdinalSeries;

/// `⌊T^{1/3}⌋`.
pub fn default_bandwidth(len: usize) -> usize {
    let mut h = (len as f64).cbrt().floor() as usize;
    // guard against cbrt rounding just below an exact cube
    while (h + 1).pow(3) <= len {
        h += 1;
    }
    h
}

/// Bartlett-weighted estimate `Σ̂_0 + Σ_{h=1}^H (1 - h/(H+1)) (Σ̂_h + Σ̂_hᵀ)`.
///
/// `Σ̂_h` is the lag-`h` autocovariance of the indicator vectors with divisor
/// `T`. The result is symmetrized and negative eigenvalues are set to zero.
/// Bandwidths beyond `T - 1` are capped.
pub fn long_run_covariance(
    series: &OrdinalSeries,
    bandwidth: Option<usize>,
) -> Result<DMatrix<f64>> {
    let t = series.len();
    if t < 4 {
        return Err(OtsError::InvalidParameter(format!(
            "long-run covariance needs at least 4 observations, got {t}"
        )));
    }
    let h_max = bandwidth.unwrap_or_else(|| default_bandwidth(t)).min(t - 1);
    let p = marginal_probabilities(series);
    let k = p.len();
    let tf = t as f64;

    let mut sigma = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            p[i] - p[i] * p[j]
        } else {
            -p[i] * p[j]
        }
    });

    let codes = series.codes();
    for h in 1..=h_max {
        let w = 1.0 - h as f64 / (h_max as f64 + 1.0);
        let mut pairs = DMatrix::<f64>::zeros(k, k);
        let mut head = vec![0.0; k];
        let mut tail = vec![0.0; k];
        for (&earlier, &later) in codes.iter().zip(&codes[h..]) {
            pairs[(later, earlier)] += 1.0;
            head[earlier] += 1.0;
            tail[later] += 1.0;
        }
        let pairs_n = (t - h) as f64;
        // Σ_t (y_{t+h} - p)(y_t - p)ᵀ expanded into counts
        let gamma = DMatrix::from_fn(k, k, |i, j| {
            (pairs[(i, j)] - p[i] * head[j] - p[j] * tail[i] + pairs_n * p[i] * p[j]) / tf
        });
        sigma += (&gamma + gamma.transpose()) * w;
    }

    let sym = (&sigma + sigma.transpose()) * 0.5;
    Ok(project_psd(sym))
}

fn project_psd(m: DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    if eig.eigenvalues.iter().all(|&v| v >= 0.0) {
        return m;
    }
    let floored = eig.eigenvalues.map(|v| v.max(0.0));
    let q = &eig.eigenvectors;
    let out = q * DMatrix::from_diagonal(&floored) * q.transpose();
    (&out + out.transpose()) * 0.5
}
