//! Type-level view of a network: which object types link to which.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::hin::{Hin, TypeId};

/// Symmetric type adjacency with per-type self-loop flags.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NetworkSchema {
    names: Vec<String>,
    // adjacency[t] = sorted neighbour types of t (includes t on a self-loop)
    adjacency: Vec<Vec<TypeId>>,
}

impl NetworkSchema {
    /// Builds a schema from type names and undirected type pairs.
    pub fn from_pairs<S: AsRef<str>>(names: &[S], pairs: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![Vec::new(); names.len()];
        for &(a, b) in pairs {
            adjacency[a].push(TypeId(b as u32));
            adjacency[b].push(TypeId(a as u32));
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Self {
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
            adjacency,
        }
    }

    pub fn num_types(&self) -> usize {
        self.names.len()
    }

    pub fn type_name(&self, ty: TypeId) -> &str {
        &self.names[ty.index()]
    }

    pub fn type_id(&self, name: &str) -> Option<TypeId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| TypeId(i as u32))
    }

    pub fn types(&self) -> impl Iterator<Item = TypeId> + '_ {
        (0..self.names.len()).map(|i| TypeId(i as u32))
    }

    pub fn neighbors(&self, ty: TypeId) -> &[TypeId] {
        &self.adjacency[ty.index()]
    }

    pub fn adjacent(&self, a: TypeId, b: TypeId) -> bool {
        self.adjacency[a.index()].binary_search(&b).is_ok()
    }

    pub fn has_self_loop(&self, ty: TypeId) -> bool {
        self.adjacent(ty, ty)
    }

    /// Number of distinct neighbour types (a self-loop counts once).
    pub fn degree(&self, ty: TypeId) -> usize {
        self.adjacency[ty.index()].len()
    }

    /// Undirected edges `(a, b)` with `a <= b`.
    pub fn edges(&self) -> Vec<(TypeId, TypeId)> {
        let mut out = Vec::new();
        for (a, list) in self.adjacency.iter().enumerate() {
            for &b in list {
                if a <= b.index() {
                    out.push((TypeId(a as u32), b));
                }
            }
        }
        out
    }

    fn check(&self, ty: TypeId) -> Result<()> {
        if ty.index() < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownType(format!("#{}", ty.0)))
        }
    }

    /// BFS distance from `source` to every type; `None` when unreachable.
    pub fn bfs_depths(&self, source: TypeId) -> Result<Vec<Option<usize>>> {
        self.check(source)?;
        let mut depth = vec![None; self.names.len()];
        depth[source.index()] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(t) = queue.pop_front() {
            let d = depth[t.index()].unwrap();
            for &n in self.neighbors(t) {
                if depth[n.index()].is_none() {
                    depth[n.index()] = Some(d + 1);
                    queue.push_back(n);
                }
            }
        }
        Ok(depth)
    }

    /// Types not reachable from `source`.
    pub fn unreachable_from(&self, source: TypeId) -> Result<Vec<TypeId>> {
        Ok(self
            .bfs_depths(source)?
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_none())
            .map(|(i, _)| TypeId(i as u32))
            .collect())
    }
}

/// Derives the schema of `hin`: one node per object type, one undirected
/// edge per pair of types joined by at least one link.
pub fn extract_schema(hin: &Hin) -> NetworkSchema {
    let names: Vec<&str> = hin.types().iter().map(|t| t.name.as_str()).collect();
    let pairs: Vec<(usize, usize)> = hin
        .links()
        .iter()
        .map(|l| (hin.type_of(l.src).index(), hin.type_of(l.dst).index()))
        .collect();
    NetworkSchema::from_pairs(&names, &pairs)
}

/// Height of the BFS spanning tree rooted at `source`; unreachable types are
/// ignored.
pub fn bfs_tree_height(schema: &NetworkSchema, source: TypeId) -> Result<usize> {
    Ok(schema
        .bfs_depths(source)?
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(0))
}
