//! Preprocessing for real data and scoring of clustering output.

mod affinity;
mod metrics;
mod threshold;

pub use affinity::{gaussian_affinity, knn_sparsify, PointCloud};
pub use metrics::{misclassification, partition_accuracy, Accuracy};
pub use threshold::{degree_threshold, ThresholdResult};
