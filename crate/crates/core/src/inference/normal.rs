//! Standard normal distribution helpers.

use statrs::distribution::{ContinuousCDF, Normal};

fn standard() -> Normal {
    Normal::standard()
}

/// `Φ(x)`.
pub fn normal_cdf(x: f64) -> f64 {
    standard().cdf(x)
}

/// `1 - Φ(x)`, computed without cancellation in the upper tail.
pub fn normal_sf(x: f64) -> f64 {
    standard().sf(x)
}

/// `z_τ = Φ⁻¹(τ)` for `τ ∈ [0, 1]`.
pub fn normal_quantile(tau: f64) -> f64 {
    standard().inverse_cdf(tau)
}

/// `2 (1 - Φ(|z|))`.
pub fn two_sided_p_value(z: f64) -> f64 {
    (2.0 * normal_sf(z.abs())).min(1.0)
}
