//! Clustering and ranking evaluation with parameter sweeps.

pub mod data;
pub mod kmeans;
pub mod metrics;
pub mod sweep;
pub mod weights;

pub use data::{ClusteringBenchmark, RelevanceJudgments};
pub use kmeans::kmeans;
pub use metrics::{dcg, ndcg, nmi};
pub use sweep::{evaluate, sweep, SweepConfig, SweepRow, SweepTable, Task};
pub use weights::{sample_weights, sample_weights_with};
