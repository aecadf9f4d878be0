//! Feature extraction, inference, dissimilarities and simulation for ordinal
//! time series.
//!
//! A series is stored as the integer codes `0..=n` of its states; the
//! [`StateSpace`] carries the labels and the [`StateDistance`] the geometry
//! used by the distance-based features.

pub mod dependence;
pub mod error;
pub mod fixtures;
pub mod inference;
pub mod marginal;
pub mod mining;
pub mod probs;
pub mod series;
pub mod simulate;
pub mod state;

pub use dependence::{
    cumulative_correlations, lagged_expected_distance, mixed_linear_correlations,
    mixed_quantile_correlations, ordinal_cohens_kappa, total_c_cor, total_mixed_c_cor,
    total_mixed_c_qcor, Binarization, CumulativeCorrelations, DependenceSummary, IndexConvention,
    MixedCorrelations,
};
pub use error::{OtsError, Result};
pub use inference::{
    ci_marginal_feature, holm_adjust, kappa_critical_values, kappa_diagnostics,
    kappa_null_distribution, long_run_covariance, test_marginal_feature, ConfidenceInterval,
    DeltaMethod, InferenceMode, KappaDiagnostics, MarginalFeature, TestResult,
};
pub use marginal::{
    divc_expected_distance, expected_distance_to_state, ordinal_asymmetry, ordinal_dispersion_1,
    ordinal_dispersion_2, ordinal_location_1, ordinal_location_2, ordinal_skewness,
    reflected_expected_distance, MarginalFeatureSet,
};
pub use mining::{
    adjusted_rand_index, boxplot_outlier_flags, classical_mds, cumulative_feature_vector,
    kmeans_cluster, outlier_ranking, pairwise_distance_matrix, pam_cluster, pmf_feature_vector,
    DistanceMatrix, DistanceScale, FeatureMatrix, OutlierReport, SeriesMetric,
};
pub use probs::{
    c_joint_probabilities, c_marginal_probabilities, joint_probabilities, marginal_probabilities,
    LaggedProbabilityProfile, ProbabilityProfile,
};
pub use series::{NumericSeries, OrdinalSeries, OtsDataset};
pub use simulate::{make_benchmark_dataset, BenchmarkSpec, GeneratorSpec, ModelParams};
pub use state::{validate_asymmetry_assumption, DistanceKind, StateDistance, StateSpace};
