//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use hinsim_core::{extract_schema, Hin, HinBuilder, MetaStructure, NetworkSchema, TypeId};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn toy() -> Hin {
    let dir = fixture("toy_dblp");
    Hin::load(dir.join("nodes.tsv"), dir.join("edges.tsv")).unwrap()
}

/// A random connected type graph on `n` types: a random spanning tree plus
/// extra edges, optionally with self-loops.
pub fn random_type_graph(rng: &mut impl Rng, n: usize, extra: f64, self_loops: f64) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for i in 1..n {
        pairs.push((rng.gen_range(0..i), i));
    }
    for i in 0..n {
        for j in i..n {
            let p = if i == j { self_loops } else { extra };
            if !pairs.contains(&(i, j)) && rng.gen_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// A random HIN with at most `max_objects` objects over `types` types.
pub fn random_hin(rng: &mut impl Rng, types: usize, max_objects: usize, density: f64) -> Hin {
    let pairs = random_type_graph(rng, types, 0.3, 0.15);
    let n = rng.gen_range(types..=max_objects);
    let mut b = HinBuilder::new();
    let mut by_type: Vec<Vec<_>> = vec![Vec::new(); types];
    for i in 0..n {
        // the first `types` objects cover every type once
        let t = if i < types { i } else { rng.gen_range(0..types) };
        let id = b.add_object(&format!("o{i}"), &format!("T{t}")).unwrap();
        by_type[t].push(id);
    }
    for &(x, y) in &pairs {
        for &u in &by_type[x] {
            for &v in &by_type[y] {
                if u != v && rng.gen_bool(density) {
                    b.add_link(u, v, None);
                }
            }
        }
    }
    b.build()
}

/// A random structure of height `height` valid against `schema`, or `None`
/// after too many rejected draws.
pub fn random_structure(rng: &mut impl Rng, schema: &NetworkSchema, height: usize) -> Option<MetaStructure> {
    let types: Vec<TypeId> = schema.types().collect();
    for _ in 0..200 {
        let mut layers = vec![vec![*types.choose(rng).unwrap()]];
        for i in 1..=height {
            let layer: Vec<TypeId> = if i == height {
                vec![*types.choose(rng).unwrap()]
            } else {
                let k = rng.gen_range(1..=types.len().min(3));
                types.choose_multiple(rng, k).copied().collect()
            };
            layers.push(layer);
        }
        if let Ok(ms) = MetaStructure::new(layers) {
            if ms.validate(schema).is_ok() {
                return Some(ms);
            }
        }
    }
    None
}

/// A random connected bipartite schema whose source sits at BFS height >= 2.
pub fn random_bipartite_schema(rng: &mut impl Rng, max_types: usize) -> NetworkSchema {
    loop {
        let n = rng.gen_range(3..=max_types);
        let side: Vec<bool> = (0..n).map(|i| i == 0 || rng.gen_bool(0.5)).collect();
        let mut pairs = Vec::new();
        // spanning tree across the two sides
        for i in 1..n {
            let opposite: Vec<usize> = (0..i).filter(|&j| side[j] != side[i]).collect();
            if let Some(&j) = opposite.choose(rng) {
                pairs.push((j, i));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if side[i] != side[j] && !pairs.contains(&(i, j)) && rng.gen_bool(0.25) {
                    pairs.push((i, j));
                }
            }
        }
        let names: Vec<String> = (0..n).map(|i| format!("T{i}")).collect();
        let schema = NetworkSchema::from_pairs(&names, &pairs);
        let connected = schema.unreachable_from(TypeId(0)).map(|u| u.is_empty()).unwrap_or(false);
        if connected && hinsim_core::bfs_tree_height(&schema, TypeId(0)).unwrap() >= 2 {
            return schema;
        }
    }
}

pub fn schema_of(hin: &Hin) -> NetworkSchema {
    extract_schema(hin)
}
