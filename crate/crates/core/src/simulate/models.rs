//! Count-process generators for ordinal series.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{OtsError, Result};
use crate::series::OrdinalSeries;
use crate::state::StateSpace;

/// Steps simulated and discarded before the first kept observation.
pub const BURN_IN: usize = 500;

fn one() -> Vec<f64> {
    vec![1.0]
}

/// Coefficients of one of the supported model families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelParams {
    /// `C_t = α∘C_{t-k} + β∘(n - C_{t-k})`, with lag `k` drawn from `weights`.
    BinomialAr {
        pi: f64,
        rho: f64,
        /// Probabilities of using lag `1, 2, ...`; `[1.0]` gives AR(1).
        #[serde(default = "one")]
        weights: Vec<f64>,
    },
    /// `C_t | past ~ Bin(n, a0 + Σ_k a_k C_{t-k} / n)`.
    BinomialInarch { a0: f64, a: Vec<f64> },
    /// `P(C_t ≤ i | C_{t-1} = c) = logistic(η_i - φ (2c/n - 1))`.
    OrdinalLogitAr1 { thresholds: Vec<f64>, phi: f64 },
}

impl ModelParams {
    pub fn family(&self) -> &'static str {
        match self {
            Self::BinomialAr { .. } => "binomial_ar",
            Self::BinomialInarch { .. } => "binomial_inarch",
            Self::OrdinalLogitAr1 { .. } => "ordinal_logit_ar1",
        }
    }

    /// Number of past values the model looks at.
    pub fn order(&self) -> usize {
        match self {
            Self::BinomialAr { weights, .. } => weights.len(),
            Self::BinomialInarch { a, .. } => a.len(),
            Self::OrdinalLogitAr1 { .. } => 1,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(OtsError::InvalidParameter(msg));
        if n == 0 {
            return bad("models need at least two states".into());
        }
        match self {
            Self::BinomialAr { pi, rho, weights } => {
                if !(*pi > 0.0 && *pi < 1.0) {
                    return bad(format!("pi = {pi} must lie in (0, 1)"));
                }
                let lower = (-pi / (1.0 - pi)).max(-(1.0 - pi) / pi);
                if !(*rho > lower && *rho < 1.0) {
                    return bad(format!("rho = {rho} must lie in ({lower}, 1)"));
                }
                let (alpha, beta) = thinning_probabilities(*pi, *rho);
                if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
                    return bad(format!(
                        "thinning probabilities ({alpha}, {beta}) leave [0, 1]"
                    ));
                }
                if weights.is_empty()
                    || weights.iter().any(|w| w.is_nan() || *w < 0.0)
                    || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9
                {
                    return bad("lag weights must be nonnegative and sum to 1".into());
                }
            }
            Self::BinomialInarch { a0, a } => {
                if a0.is_nan() || *a0 <= 0.0 {
                    return bad(format!("a0 = {a0} must be positive"));
                }
                if a.is_empty() || a.iter().any(|v| v.is_nan() || *v < 0.0) {
                    return bad("feedback coefficients must be nonnegative, at least one".into());
                }
                let total = a0 + a.iter().sum::<f64>();
                if total.is_nan() || total >= 1.0 {
                    return bad(format!("a0 + Σ a_k = {total} must be below 1"));
                }
            }
            Self::OrdinalLogitAr1 { thresholds, phi } => {
                if thresholds.len() != n {
                    return bad(format!("expected {n} thresholds, got {}", thresholds.len()));
                }
                if thresholds.iter().any(|t| !t.is_finite()) || !phi.is_finite() {
                    return bad("thresholds and phi must be finite".into());
                }
                if thresholds.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("thresholds must be strictly increasing".into());
                }
            }
        }
        Ok(())
    }
}

/// `(α, β)` with `β = π(1 - ρ)` and `α = β + ρ`.
pub fn thinning_probabilities(pi: f64, rho: f64) -> (f64, f64) {
    let beta = pi * (1.0 - rho);
    (beta + rho, beta)
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `P(C_t ≤ i | C_{t-1} = c)` for `i = 0..n-1` under the logit model.
pub fn logit_conditional_cdf(thresholds: &[f64], phi: f64, previous: usize) -> Vec<f64> {
    let n = thresholds.len() as f64;
    let shift = phi * (2.0 * previous as f64 / n - 1.0);
    thresholds.iter().map(|eta| logistic(eta - shift)).collect()
}

/// One process with its length and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    /// Largest state index; the series has `n + 1` states.
    pub n: usize,
    #[serde(rename = "T")]
    pub length: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub model: ModelParams,
}

fn binomial(rng: &mut ChaCha8Rng, trials: usize, p: f64) -> usize {
    (0..trials).filter(|_| rng.random::<f64>() < p).count()
}

fn draw_categorical(rng: &mut ChaCha8Rng, cdf: &[f64]) -> usize {
    let u: f64 = rng.random();
    cdf.iter().position(|&f| u < f).unwrap_or(cdf.len())
}

fn pick_lag(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    if weights.len() == 1 {
        return 1;
    }
    let mut u: f64 = rng.random();
    for (k, &w) in weights.iter().enumerate() {
        if u < w {
            return k + 1;
        }
        u -= w;
    }
    weights.len()
}

/// Generates `spec.length` observations after [`BURN_IN`] discarded steps.
pub fn simulate(spec: &GeneratorSpec) -> Result<OrdinalSeries> {
    if spec.length == 0 {
        return Err(OtsError::InvalidParameter(
            "series length must be positive".into(),
        ));
    }
    spec.model.validate(spec.n)?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let order = spec.model.order();
    let total = order + BURN_IN + spec.length;
    let mut path: Vec<usize> = Vec::with_capacity(total);

    let start_p = match &spec.model {
        ModelParams::BinomialAr { pi, .. } => *pi,
        ModelParams::BinomialInarch { a0, a } => a0 / (1.0 - a.iter().sum::<f64>()),
        ModelParams::OrdinalLogitAr1 { .. } => 0.5,
    };
    for _ in 0..order {
        path.push(binomial(&mut rng, n, start_p));
    }

    while path.len() < total {
        let t = path.len();
        let next = match &spec.model {
            ModelParams::BinomialAr { pi, rho, weights } => {
                let (alpha, beta) = thinning_probabilities(*pi, *rho);
                let prev = path[t - pick_lag(&mut rng, weights)];
                binomial(&mut rng, prev, alpha) + binomial(&mut rng, n - prev, beta)
            }
            ModelParams::BinomialInarch { a0, a } => {
                let p = a0
                    + a.iter()
                        .enumerate()
                        .map(|(k, ak)| ak * path[t - 1 - k] as f64 / n as f64)
                        .sum::<f64>();
                binomial(&mut rng, n, p)
            }
            ModelParams::OrdinalLogitAr1 { thresholds, phi } => {
                let cdf = logit_conditional_cdf(thresholds, *phi, path[t - 1]);
                draw_categorical(&mut rng, &cdf)
            }
        };
        path.push(next);
    }

    let states = Arc::new(StateSpace::numbered(n + 1)?);
    OrdinalSeries::new(path.split_off(order + BURN_IN), states)
}

fn require_family(spec: &GeneratorSpec, family: &str) -> Result<()> {
    if spec.model.family() != family {
        return Err(OtsError::InvalidParameter(format!(
            "expected a {family} model, got {}",
            spec.model.family()
        )));
    }
    Ok(())
}

pub fn simulate_binomial_ar(spec: &GeneratorSpec) -> Result<OrdinalSeries> {
    require_family(spec, "binomial_ar")?;
    simulate(spec)
}

pub fn simulate_binomial_inarch(spec: &GeneratorSpec) -> Result<OrdinalSeries> {
    require_family(spec, "binomial_inarch")?;
    simulate(spec)
}

pub fn simulate_ordinal_logit_ar1(spec: &GeneratorSpec) -> Result<OrdinalSeries> {
    require_family(spec, "ordinal_logit_ar1")?;
    simulate(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dependence::ordinal_cohens_kappa;
    use crate::inference::kappa_diagnostics;
    use crate::probs::c_marginal_probabilities;
    use crate::state::StateDistance;

    fn spec(n: usize, length: usize, seed: u64, model: ModelParams) -> GeneratorSpec {
        GeneratorSpec {
            n,
            length,
            seed,
            model,
        }
    }

    fn mean_and_se(codes: &[usize]) -> (f64, f64) {
        let t = codes.len() as f64;
        let mean = codes.iter().sum::<usize>() as f64 / t;
        let var = codes
            .iter()
            .map(|&c| (c as f64 - mean).powi(2))
            .sum::<f64>()
            / t;
        (mean, (var / t).sqrt())
    }

    fn lag1_autocorrelation(codes: &[usize]) -> f64 {
        let (mean, _) = mean_and_se(codes);
        let x: Vec<f64> = codes.iter().map(|&c| c as f64 - mean).collect();
        let num: f64 = x.windows(2).map(|w| w[0] * w[1]).sum();
        num / x.iter().map(|v| v * v).sum::<f64>()
    }

    #[test]
    fn validation() {
        let ar = |pi, rho| ModelParams::BinomialAr {
            pi,
            rho,
            weights: vec![1.0],
        };
        assert!(ar(0.5, 0.9).validate(5).is_ok());
        assert!(ar(0.0, 0.5).validate(5).is_err());
        assert!(ar(0.5, 1.0).validate(5).is_err());
        assert!(ar(0.2, -0.3).validate(5).is_err());
        assert!(ar(0.2, -0.2).validate(5).is_ok());
        let bad_weights = ModelParams::BinomialAr {
            pi: 0.5,
            rho: 0.3,
            weights: vec![0.5, 0.4],
        };
        assert!(bad_weights.validate(5).is_err());
        let inarch = |a0, a: Vec<f64>| ModelParams::BinomialInarch { a0, a };
        assert!(inarch(0.3, vec![0.4]).validate(5).is_ok());
        assert!(inarch(0.0, vec![0.4]).validate(5).is_err());
        assert!(inarch(0.5, vec![0.5]).validate(5).is_err());
        assert!(inarch(0.3, vec![-0.1]).validate(5).is_err());
        let logit = |thresholds: Vec<f64>| ModelParams::OrdinalLogitAr1 {
            thresholds,
            phi: 1.0,
        };
        assert!(logit(vec![-1.0, 0.0, 1.0]).validate(3).is_ok());
        assert!(logit(vec![-1.0, 1.0, 1.0]).validate(3).is_err());
        assert!(logit(vec![-1.0, 1.0]).validate(3).is_err());
        assert!(simulate(&spec(3, 0, 1, logit(vec![-1.0, 0.0, 1.0]))).is_err());
    }

    #[test]
    fn family_specific_entry_points() {
        let s = spec(
            2,
            10,
            1,
            ModelParams::BinomialInarch {
                a0: 0.3,
                a: vec![0.2],
            },
        );
        assert!(simulate_binomial_inarch(&s).is_ok());
        assert!(simulate_binomial_ar(&s).is_err());
        assert!(simulate_ordinal_logit_ar1(&s).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let model = ModelParams::BinomialAr {
            pi: 0.4,
            rho: 0.5,
            weights: vec![0.3, 0.7],
        };
        let a = simulate(&spec(5, 300, 42, model.clone())).unwrap();
        let b = simulate(&spec(5, 300, 42, model.clone())).unwrap();
        let c = simulate(&spec(5, 300, 43, model)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 300);
        assert!(a.codes().iter().all(|&x| x <= 5));
    }

    #[test]
    fn binomial_ar_without_dependence_is_iid_binomial() {
        let s = simulate(&spec(
            5,
            100_000,
            1,
            ModelParams::BinomialAr {
                pi: 0.3,
                rho: 0.0,
                weights: vec![1.0],
            },
        ))
        .unwrap();
        let (mean, se) = mean_and_se(s.codes());
        assert!((mean - 1.5).abs() < 3.0 * se, "{mean}");
    }

    #[test]
    fn binomial_ar_lag_one_autocorrelation() {
        let s = simulate(&spec(
            5,
            100_000,
            2,
            ModelParams::BinomialAr {
                pi: 0.5,
                rho: 0.9,
                weights: vec![1.0],
            },
        ))
        .unwrap();
        let r = lag1_autocorrelation(s.codes());
        assert!((r - 0.9).abs() < 0.01, "{r}");
    }

    #[test]
    fn inarch_stationary_mean() {
        let s = simulate(&spec(
            5,
            100_000,
            3,
            ModelParams::BinomialInarch {
                a0: 0.3,
                a: vec![0.4],
            },
        ))
        .unwrap();
        let (mean, se) = mean_and_se(s.codes());
        // autocorrelations a_1^h inflate the iid se by sqrt((1 + a_1) / (1 - a_1))
        let inflation = (1.4f64 / 0.6).sqrt();
        assert!((mean - 2.5).abs() < 3.0 * inflation * se, "{mean}");
    }

    #[test]
    fn inarch_without_feedback_is_iid() {
        let s = simulate(&spec(
            4,
            100_000,
            4,
            ModelParams::BinomialInarch {
                a0: 0.25,
                a: vec![0.0],
            },
        ))
        .unwrap();
        let (mean, se) = mean_and_se(s.codes());
        assert!((mean - 1.0).abs() < 3.0 * se);
        assert!(lag1_autocorrelation(s.codes()).abs() < 0.01);
    }

    #[test]
    fn logit_without_feedback_matches_thresholds() {
        let thresholds = vec![-2.0, -0.5, 0.5, 1.5, 3.0];
        let s = simulate(&spec(
            5,
            100_000,
            5,
            ModelParams::OrdinalLogitAr1 {
                thresholds: thresholds.clone(),
                phi: 0.0,
            },
        ))
        .unwrap();
        let f = c_marginal_probabilities(&s);
        for (fi, eta) in f.iter().zip(&thresholds) {
            let target = logistic(*eta);
            let se = (target * (1.0 - target) / 100_000.0).sqrt();
            assert!((fi - target).abs() < 3.0 * se, "{fi} vs {target}");
        }
    }

    #[test]
    fn logit_conditional_cdf_is_monotone() {
        let thresholds = [-1.3, -0.2, 0.4, 2.0];
        for c in 0..=4 {
            for phi in [-3.0, 0.0, 2.5] {
                let cdf = logit_conditional_cdf(&thresholds, phi, c);
                assert!(cdf.windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }

    fn lag_one_rejection_rate(model: &ModelParams, reps: u64, seed: u64) -> f64 {
        let d = StateDistance::block(&StateSpace::numbered(6).unwrap());
        let rejected = (0..reps)
            .filter(|&r| {
                let s = simulate(&spec(5, 600, seed.wrapping_add(r), model.clone())).unwrap();
                kappa_diagnostics(&s, &d, 1, 0.05).unwrap().p_values[0] < 0.05
            })
            .count();
        rejected as f64 / reps as f64
    }

    #[test]
    fn null_models_pass_kappa_size_check() {
        let band = 3.0 * (0.05f64 * 0.95 / 1000.0).sqrt();
        for model in [
            ModelParams::BinomialAr {
                pi: 0.45,
                rho: 0.0,
                weights: vec![1.0],
            },
            ModelParams::BinomialInarch {
                a0: 0.4,
                a: vec![0.0],
            },
            ModelParams::OrdinalLogitAr1 {
                thresholds: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
                phi: 0.0,
            },
        ] {
            let rate = lag_one_rejection_rate(&model, 1000, 10_000);
            assert!((rate - 0.05).abs() <= band, "{}: {rate}", model.family());
        }
    }

    #[test]
    fn inarch_feedback_is_detected() {
        let model = ModelParams::BinomialInarch {
            a0: 0.3,
            a: vec![0.4],
        };
        let rate = lag_one_rejection_rate(&model, 200, 20_000);
        assert!(rate > 0.95, "{rate}");
    }

    #[test]
    fn logit_feedback_gives_positive_kappa() {
        let d = StateDistance::block(&StateSpace::numbered(6).unwrap());
        let model = ModelParams::OrdinalLogitAr1 {
            thresholds: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            phi: 1.0,
        };
        let kappas: Vec<f64> = (0..200)
            .map(|r| {
                let s = simulate(&spec(5, 600, 30_000 + r, model.clone())).unwrap();
                ordinal_cohens_kappa(&s, &d, 1).unwrap()
            })
            .collect();
        let m = kappas.len() as f64;
        let mean = kappas.iter().sum::<f64>() / m;
        let sd = (kappas.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt();
        assert!(mean - 2.576 * sd / m.sqrt() > 0.0, "{mean} {sd}");
    }

    #[test]
    fn spec_json_round_trip() {
        let s = spec(
            5,
            600,
            9,
            ModelParams::BinomialInarch {
                a0: 0.2,
                a: vec![0.3, 0.1],
            },
        );
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("\"family\":\"binomial_inarch\""));
        assert!(json.contains("\"T\":600"));
        let back: GeneratorSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let ar: GeneratorSpec = serde_json::from_str(
            r#"{"n":5,"T":10,"seed":1,"family":"binomial_ar","pi":0.5,"rho":0.2}"#,
        )
        .unwrap();
        assert_eq!(ar.model.order(), 1);
    }
}
