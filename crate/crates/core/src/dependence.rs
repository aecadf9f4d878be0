//! Serial dependence of an ordinal series, and cross-dependence with a
//! numeric series.
//!
//! The cumulative binarization `Y_{t,i} = I(C_t <= i)`, `i = 0..n-1`, links
//! the cumulative probabilities to ordinary correlations. Plug-in
//! correlations can leave `[-1, 1]` in short series because marginals and
//! joints use different windows; they are clamped and the clamp is reported.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{OtsError, Result};
use crate::marginal::{check_distance, divc_expected_distance};
use crate::probs::{c_joint_probabilities, c_marginal_probabilities};
use crate::series::{NumericSeries, OrdinalSeries};
use crate::state::StateDistance;

/// Default number of midpoint nodes for the quantile-correlation integral.
pub const DEFAULT_QUANTILE_NODES: usize = 100;

/// `T x n` indicator matrix with `y[t][i] = 1` iff `C_t <= i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binarization {
    rows: Vec<Vec<u8>>,
}

impl Binarization {
    pub fn new(series: &OrdinalSeries) -> Self {
        let n = series.n();
        let rows = series
            .codes()
            .iter()
            .map(|&c| (0..n).map(|i| u8::from(c <= i)).collect())
            .collect();
        Self { rows }
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| f64::from(r[i])).collect()
    }
}

/// `Ê[d(X_t, X_{t-l})]` over the `T - l` available pairs; zero at lag 0.
pub fn lagged_expected_distance(
    series: &OrdinalSeries,
    dist: &StateDistance,
    lag: usize,
) -> Result<f64> {
    check_distance(series, dist)?;
    series.check_lag(lag)?;
    let codes = series.codes();
    let total: f64 = codes
        .iter()
        .zip(&codes[lag..])
        .map(|(&earlier, &later)| dist.d(later, earlier))
        .sum();
    Ok(total / (codes.len() - lag) as f64)
}

/// Ordinal Cohen's κ: `(disp̂ - Ê[d(X_t, X_{t-l})]) / disp̂`.
pub fn ordinal_cohens_kappa(
    series: &OrdinalSeries,
    dist: &StateDistance,
    lag: usize,
) -> Result<f64> {
    let disp = divc_expected_distance(series, dist)?;
    let lagged = lagged_expected_distance(series, dist, lag)?;
    if disp == 0.0 {
        return Err(OtsError::UndefinedDispersion);
    }
    Ok((disp - lagged) / disp)
}

fn require_interior(f: &[f64], indices: impl Iterator<Item = usize>) -> Result<()> {
    for i in indices {
        if f[i] <= 0.0 || f[i] >= 1.0 {
            return Err(OtsError::DegenerateState {
                index: i,
                value: f[i],
            });
        }
    }
    Ok(())
}

fn clamp_unit(v: f64, clamped: &mut bool) -> f64 {
    if v.abs() > 1.0 {
        *clamped = true;
        v.clamp(-1.0, 1.0)
    } else {
        v
    }
}

/// Matrix of `ψ̂_ij(l)` with the clamp flag.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeCorrelations {
    pub lag: usize,
    pub values: DMatrix<f64>,
    /// True if any raw plug-in value fell outside `[-1, 1]`.
    pub clamped: bool,
}

/// `ψ̂_ij(l) = (f̂_ij(l) - f̂_i f̂_j) / sqrt(f̂_i(1-f̂_i) f̂_j(1-f̂_j))`.
pub fn cumulative_correlations(
    series: &OrdinalSeries,
    lag: usize,
) -> Result<CumulativeCorrelations> {
    let f = c_marginal_probabilities(series);
    require_interior(&f, 0..f.len())?;
    let fj = c_joint_probabilities(series, lag)?;
    let n = f.len();
    let mut clamped = false;
    let values = DMatrix::from_fn(n, n, |i, j| {
        let raw = (fj[(i, j)] - f[i] * f[j]) / (f[i] * (1.0 - f[i]) * f[j] * (1.0 - f[j])).sqrt();
        clamp_unit(raw, &mut clamped)
    });
    Ok(CumulativeCorrelations {
        lag,
        values,
        clamped,
    })
}

/// Total cumulative correlation: mean of the squared `ψ̂_ij(l)`.
pub fn total_c_cor(series: &OrdinalSeries, lag: usize) -> Result<f64> {
    let psi = cumulative_correlations(series, lag)?;
    Ok(psi.values.iter().map(|v| v * v).sum::<f64>() / psi.values.len() as f64)
}

/// Which state indices enter the mixed ordinal-numeric totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexConvention {
    /// `i = 0..n-1`, averaged with `1/n`.
    #[default]
    Definitional,
    /// `i = 1..n-1`, averaged with `1/(n-1)`.
    EstimatorDisplay,
}

impl IndexConvention {
    fn range(self, n: usize) -> std::ops::Range<usize> {
        match self {
            IndexConvention::Definitional => 0..n,
            IndexConvention::EstimatorDisplay => 1..n,
        }
    }
}

/// Per-state correlations with a numeric series, plus the clamp flag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedCorrelations {
    pub lag: usize,
    /// State index of each entry in `values`.
    pub states: Vec<usize>,
    pub values: Vec<f64>,
    pub clamped: bool,
}

impl MixedCorrelations {
    fn mean_square(&self) -> Result<f64> {
        if self.values.is_empty() {
            return Err(OtsError::InvalidParameter(
                "no state indices to average over".into(),
            ));
        }
        Ok(self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64)
    }
}

/// Sample covariance of the aligned pairs `(a[t], b[t - lag])`, `t = lag..T-1`,
/// with window means removed and divisor `T - lag`.
fn lagged_covariance(a: &[f64], b: &[f64], lag: usize) -> f64 {
    let later = &a[lag..];
    let earlier = &b[..b.len() - lag];
    let m = later.len() as f64;
    let mean_a = later.iter().sum::<f64>() / m;
    let mean_b = earlier.iter().sum::<f64>() / m;
    later
        .iter()
        .zip(earlier)
        .map(|(x, y)| (x - mean_a) * (y - mean_b))
        .sum::<f64>()
        / m
}

fn check_pair(series: &OrdinalSeries, z: &NumericSeries, lag: usize) -> Result<()> {
    if series.len() != z.len() {
        return Err(OtsError::LengthMismatch {
            left: series.len(),
            right: z.len(),
        });
    }
    series.check_lag(lag)
}

/// `ψ̂*_i(l)`, the correlation between `Y_{t,i}` and `Z_{t-l}`.
pub fn mixed_linear_correlations(
    series: &OrdinalSeries,
    z: &NumericSeries,
    lag: usize,
) -> Result<MixedCorrelations> {
    mixed_linear_correlations_with(series, z, lag, IndexConvention::Definitional)
}

pub fn mixed_linear_correlations_with(
    series: &OrdinalSeries,
    z: &NumericSeries,
    lag: usize,
    convention: IndexConvention,
) -> Result<MixedCorrelations> {
    check_pair(series, z, lag)?;
    let values = z.values();
    let t = values.len() as f64;
    let mean = values.iter().sum::<f64>() / t;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / t;
    if variance <= 0.0 {
        return Err(OtsError::ZeroVariance);
    }
    let f = c_marginal_probabilities(series);
    let indices: Vec<usize> = convention.range(f.len()).collect();
    require_interior(&f, indices.iter().copied())?;
    let y = Binarization::new(series);
    let mut clamped = false;
    let out = indices
        .iter()
        .map(|&i| {
            let cov = lagged_covariance(&y.column(i), values, lag);
            clamp_unit(cov / (f[i] * (1.0 - f[i]) * variance).sqrt(), &mut clamped)
        })
        .collect();
    Ok(MixedCorrelations {
        lag,
        states: indices,
        values: out,
        clamped,
    })
}

/// Total mixed cumulative linear correlation.
pub fn total_mixed_c_cor(series: &OrdinalSeries, z: &NumericSeries, lag: usize) -> Result<f64> {
    total_mixed_c_cor_with(series, z, lag, IndexConvention::Definitional)
}

pub fn total_mixed_c_cor_with(
    series: &OrdinalSeries,
    z: &NumericSeries,
    lag: usize,
    convention: IndexConvention,
) -> Result<f64> {
    mixed_linear_correlations_with(series, z, lag, convention)?.mean_square()
}

/// Empirical quantile `Z_(⌈ρT⌉)`, the right-continuous inverse of the ECDF.
pub fn empirical_quantile(sorted: &[f64], rho: f64) -> f64 {
    let t = sorted.len();
    let k = ((rho * t as f64).ceil() as usize).clamp(1, t);
    sorted[k - 1]
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(OtsError::InvalidParameter(format!(
            "probability level {rho} must lie in (0, 1)"
        )));
    }
    Ok(())
}

struct QuantileContext<'a> {
    f: Vec<f64>,
    y: Binarization,
    z: &'a [f64],
    sorted: Vec<f64>,
    indices: Vec<usize>,
    lag: usize,
}

impl<'a> QuantileContext<'a> {
    fn new(
        series: &OrdinalSeries,
        z: &'a NumericSeries,
        lag: usize,
        convention: IndexConvention,
    ) -> Result<Self> {
        check_pair(series, z, lag)?;
        let f = c_marginal_probabilities(series);
        let indices: Vec<usize> = convention.range(f.len()).collect();
        require_interior(&f, indices.iter().copied())?;
        let mut sorted = z.values().to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(Self {
            f,
            y: Binarization::new(series),
            z: z.values(),
            sorted,
            indices,
            lag,
        })
    }

    fn at(&self, rho: f64, clamped: &mut bool) -> Vec<f64> {
        let q = empirical_quantile(&self.sorted, rho);
        let indicator: Vec<f64> = self
            .z
            .iter()
            .map(|&v| f64::from(u8::from(v <= q)))
            .collect();
        let scale = rho * (1.0 - rho);
        self.indices
            .iter()
            .map(|&i| {
                let cov = lagged_covariance(&self.y.column(i), &indicator, self.lag);
                let fi = self.f[i];
                clamp_unit(cov / (fi * (1.0 - fi) * scale).sqrt(), clamped)
            })
            .collect()
    }
}

/// `ψ̂^ρ_i(l)`, the correlation between `Y_{t,i}` and `I(Z_{t-l} <= q̂(ρ))`.
///
/// The denominator uses the nominal `ρ(1-ρ)`, not the observed indicator
/// frequency.
pub fn mixed_quantile_correlations(
    series: &OrdinalSeries,
    z: &NumericSeries,
    lag: usize,
    rho: f64,
) -> Result<MixedCorrelations> {
    mixed_quantile_correlations_with(series, z, lag, rho, IndexConvention::Definitional)
}

pub fn mixed_quantile_correlations_with(
    series: &OrdinalSeries,
    z: &NumericSeries,
    lag: usize,
    rho: f64,
    convention: IndexConvention,
) -> Result<MixedCorrelations> {
    check_rho(rho)?;
    let ctx = QuantileContext::new(series, z, lag, convention)?;
    let mut clamped = false;
    let values = ctx.at(rho, &mut clamped);
    Ok(MixedCorrelations {
        lag,
        states: ctx.indices,
        values,
        clamped,
    })
}

/// Total mixed cumulative quantile correlation, integrating over `ρ` with the
/// midpoint rule on `nodes` points `(k - 0.5) / nodes`.
pub fn total_mixed_c_qcor(
    series: &OrdinalSeries,
    z: &NumericSeries,
    lag: usize,
    nodes: usize,
) -> Result<f64> {
    total_mixed_c_qcor_with(series, z, lag, nodes, IndexConvention::Definitional)
}

pub fn total_mixed_c_qcor_with(
    series: &OrdinalSeries,
    z: &NumericSeries,
    lag: usize,
    nodes: usize,
    convention: IndexConvention,
) -> Result<f64> {
    if nodes == 0 {
        return Err(OtsError::InvalidParameter(
            "need at least one quadrature node".into(),
        ));
    }
    let ctx = QuantileContext::new(series, z, lag, convention)?;
    if ctx.indices.is_empty() {
        return Err(OtsError::InvalidParameter(
            "no state indices to average over".into(),
        ));
    }
    let mut clamped = false;
    let mut per_state = vec![0.0; ctx.indices.len()];
    for k in 0..nodes {
        let rho = (k as f64 + 0.5) / nodes as f64;
        for (acc, v) in per_state.iter_mut().zip(ctx.at(rho, &mut clamped)) {
            *acc += v * v;
        }
    }
    Ok(per_state.iter().map(|s| s / nodes as f64).sum::<f64>() / per_state.len() as f64)
}

/// Serial dependence summary of one series at one lag.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceSummary {
    pub lag: usize,
    pub kappa: f64,
    pub psi: CumulativeCorrelations,
    pub tcc: f64,
    pub tmclc: Option<f64>,
    pub tmcqc: Option<f64>,
}

impl DependenceSummary {
    pub fn compute(
        series: &OrdinalSeries,
        dist: &StateDistance,
        lag: usize,
        covariate: Option<&NumericSeries>,
    ) -> Result<Self> {
        let kappa = ordinal_cohens_kappa(series, dist, lag)?;
        let psi = cumulative_correlations(series, lag)?;
        let tcc = psi.values.iter().map(|v| v * v).sum::<f64>() / psi.values.len() as f64;
        let (tmclc, tmcqc) = match covariate {
            Some(z) => (
                Some(total_mixed_c_cor(series, z, lag)?),
                Some(total_mixed_c_qcor(series, z, lag, DEFAULT_QUANTILE_NODES)?),
            ),
            None => (None, None),
        };
        Ok(Self {
            lag,
            kappa,
            psi,
            tcc,
            tmclc,
            tmcqc,
        })
    }
}
