//! Similarity search in heterogeneous information networks based on
//! stratified meta structures, with meta-path baselines and an evaluation
//! harness.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod eval;
pub mod hin;
pub mod matrix;
pub mod schema;
pub mod similarity;
pub mod sms;
pub mod structure;
pub mod synth;

pub use error::{Error, Result};
pub use hin::{Hin, HinBuilder, LinkType, LinkTypeId, ObjectId, ObjectType, TypeId};
pub use schema::{bfs_tree_height, extract_schema, NetworkSchema};
pub use sms::{build_sms, n_recurrences, StratifiedMetaStructure};
pub use structure::{MetaPath, MetaStructure};
