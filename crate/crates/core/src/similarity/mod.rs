//! SMSS and the meta-path / meta-structure baselines.

pub mod baselines;
pub mod result;
pub mod smss;

pub use baselines::{bpcrw, bscse, pathsim, pathsim_from_counts, pathsim_row};
pub use result::{Params, SimilarityResult};
pub use smss::{smss, smss_from_matrix, smss_score, SmssEngine};
