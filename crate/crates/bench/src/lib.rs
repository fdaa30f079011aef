//! Shared inputs for the benchmarks.

use std::path::PathBuf;

use hinsim_core::synth::{planted_partition, Planted, PlantedConfig};
use hinsim_core::Hin;

pub fn toy() -> Hin {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/toy_dblp");
    Hin::load(dir.join("nodes.tsv"), dir.join("edges.tsv")).expect("toy fixture")
}

/// Planted network scaled by `authors`, keeping the default proportions.
pub fn planted(authors: usize) -> Planted {
    planted_partition(&PlantedConfig {
        authors,
        papers: authors * 11 / 2,
        venues: (authors / 6).max(3),
        ..PlantedConfig::default()
    })
    .expect("planted network")
}
