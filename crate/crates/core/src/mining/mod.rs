//! Dataset-level dissimilarities, clustering and outlier detection.

pub mod ari;
pub mod distance;
pub mod features;
pub mod kmeans;
pub mod mds;
pub mod outliers;
pub mod pam;

pub use ari::adjusted_rand_index;
pub use distance::{
    feature_distance_matrix, pairwise_distance_matrix, DistanceMatrix, DistanceScale, SeriesMetric,
};
pub use features::{
    cumulative_feature_vector, pmf_feature_vector, FeatureDescriptor, FeatureMatrix,
    DEFAULT_LAG_DEPTH,
};
pub use kmeans::{kmeans_cluster, kmeans_cluster_with, KMeansResult};
pub use mds::{classical_mds, MdsEmbedding};
pub use outliers::{
    boxplot_outlier_flags, outlier_ranking, outlier_report, quantile_type7, BoxplotFence,
    OutlierReport, DEFAULT_RANGE_COEF,
};
pub use pam::{pam_cluster, PamResult};
