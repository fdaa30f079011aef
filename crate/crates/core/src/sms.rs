//! Stratified meta structure: the infinite layered DAG obtained by repeated
//! neighbour expansion of the schema from a source type, stored finitely.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hin::TypeId;
use crate::schema::{bfs_tree_height, NetworkSchema};
use crate::structure::MetaStructure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratifiedMetaStructure {
    source_type: TypeId,
    h0: usize,
    // L_0 ..= L_{h0+1}, target type excluded except as the root
    layers: Vec<Vec<TypeId>>,
    // feeds_target[j]: the source type is a schema neighbour of some type in L_j
    feeds_target: Vec<bool>,
    degenerate: bool,
    degree1: bool,
    l1_prime: Vec<TypeId>,
    unreachable: Vec<TypeId>,
}

fn expand(schema: &NetworkSchema, source: TypeId, layer: &[TypeId]) -> (Vec<TypeId>, bool) {
    let mut next = BTreeSet::new();
    let mut feeds = false;
    for &t in layer {
        for &n in schema.neighbors(t) {
            if n == source {
                feeds = true;
                // two roles: an intermediate copy keeps expanding
                if schema.has_self_loop(source) {
                    next.insert(n);
                }
            } else {
                next.insert(n);
            }
        }
    }
    (next.into_iter().collect(), feeds)
}

/// Builds the SMS of `schema` rooted at `source` (which is also the target).
pub fn build_sms(schema: &NetworkSchema, source: TypeId) -> Result<StratifiedMetaStructure> {
    let h0 = bfs_tree_height(schema, source)?;
    let name = || schema.type_name(source).to_string();
    if h0 == 0 {
        return Err(Error::NoSms(name()));
    }
    let unreachable = schema.unreachable_from(source)?;
    if !unreachable.is_empty() {
        let names: Vec<&str> = unreachable.iter().map(|&t| schema.type_name(t)).collect();
        log::warn!(
            "types unreachable from `{}` are ignored: {}",
            schema.type_name(source),
            names.join(", ")
        );
    }

    let mut layers = vec![vec![source]];
    let mut feeds_target = Vec::new();
    for _ in 0..h0 + 3 {
        let (next, feeds) = expand(schema, source, layers.last().unwrap());
        feeds_target.push(feeds);
        layers.push(next);
    }
    let degenerate = layers[h0 + 1].is_empty();
    if !degenerate && (layers[h0 + 2] != layers[h0] || layers[h0 + 3] != layers[h0 + 1]) {
        return Err(Error::NotStratified(name()));
    }
    layers.truncate(h0 + 2);
    feeds_target.truncate(h0 + 2);

    let degree1 = schema.degree(source) == 1;
    let l1_prime = layers[1]
        .iter()
        .copied()
        .filter(|&t| schema.degree(t) > 1)
        .collect();
    Ok(StratifiedMetaStructure {
        source_type: source,
        h0,
        layers,
        feeds_target,
        degenerate,
        degree1,
        l1_prime,
        unreachable,
    })
}

/// Number of recurrent blocks inside the symmetric structure of depth `h`.
pub fn n_recurrences(h: usize, h0: usize) -> Result<usize> {
    if h < 2 || h % 2 == 1 {
        return Err(Error::InvalidDepth(h));
    }
    Ok((h / 2).saturating_sub(h0))
}

impl StratifiedMetaStructure {
    pub fn source_type(&self) -> TypeId {
        self.source_type
    }

    /// Only source == target is supported.
    pub fn target_type(&self) -> TypeId {
        self.source_type
    }

    pub fn h0(&self) -> usize {
        self.h0
    }

    /// Stored layers `L_0 ..= L_{h0+1}`.
    pub fn basic_layers(&self) -> &[Vec<TypeId>] {
        &self.layers
    }

    /// The repeating bipartite block `(L_{h0}, L_{h0+1})`.
    pub fn recurrent(&self) -> (&[TypeId], &[TypeId]) {
        (&self.layers[self.h0], &self.layers[self.h0 + 1])
    }

    /// True when `L_{h0+1}` is empty so nothing recurs.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn source_degree_is_one(&self) -> bool {
        self.degree1
    }

    /// Neighbour types of the source with schema degree above one.
    pub fn l1_prime(&self) -> &[TypeId] {
        &self.l1_prime
    }

    pub fn unreachable_types(&self) -> &[TypeId] {
        &self.unreachable
    }

    fn period(&self, h: usize) -> Option<usize> {
        if h <= self.h0 + 1 {
            Some(h)
        } else if self.degenerate {
            None
        } else {
            Some(self.h0 + (h - self.h0) % 2)
        }
    }

    /// `L_h` for any `h >= 0`.
    pub fn layer_types(&self, h: usize) -> &[TypeId] {
        match self.period(h) {
            Some(p) => &self.layers[p],
            None => &[],
        }
    }

    /// Whether the target type occurs on layer `h`.
    pub fn target_at(&self, h: usize) -> bool {
        h >= 1
            && self
                .period(h - 1)
                .is_some_and(|p| self.feeds_target[p])
    }

    /// Layers of the symmetric structure obtained by walking up from the
    /// target occurrence at layer `h`: layer `j` holds the types of `L_j`
    /// that can still reach that occurrence, i.e. `L_j ∩ L_{h-j}`.
    pub fn structure_layers(&self, h: usize) -> Result<Vec<Vec<TypeId>>> {
        if h < 2 || h % 2 == 1 {
            return Err(Error::InvalidDepth(h));
        }
        if !self.target_at(h) {
            return Err(Error::IncompatibleStructure(format!(
                "no target occurrence on layer {h}"
            )));
        }
        let mut out = Vec::with_capacity(h + 1);
        out.push(vec![self.source_type]);
        for j in 1..h {
            let right = self.layer_types(h - j);
            out.push(
                self.layer_types(j)
                    .iter()
                    .copied()
                    .filter(|t| right.contains(t))
                    .collect(),
            );
        }
        out.push(vec![self.source_type]);
        Ok(out)
    }

    pub fn meta_structure_at(&self, h: usize) -> Result<MetaStructure> {
        MetaStructure::new(self.structure_layers(h)?)
    }

    /// Renders layers `0 ..= 2h0 + 2` in `Type_layer` notation.
    pub fn render(&self, schema: &NetworkSchema) -> String {
        let mut out = String::new();
        let name = |t: TypeId| schema.type_name(t);
        let _ = writeln!(out, "source: {}", name(self.source_type));
        let _ = writeln!(out, "h0: {}", self.h0);
        for h in 0..=2 * self.h0 + 2 {
            let mut labels = Vec::new();
            if h > 0 && self.target_at(h) {
                labels.push(format!("{}_{h}", name(self.source_type)));
            }
            let types = if h == 0 {
                &self.layers[0][..]
            } else {
                self.layer_types(h)
            };
            for &t in types {
                labels.push(format!("{}_{h}", name(t)));
            }
            let _ = writeln!(out, "layer {h}: {}", labels.join(" "));
        }
        let set = |ts: &[TypeId]| {
            let names: Vec<&str> = ts.iter().map(|&t| name(t)).collect();
            format!("{{{}}}", names.join(","))
        };
        if self.degenerate {
            let _ = writeln!(out, "recurrent: none");
        } else {
            let (a, b) = self.recurrent();
            let _ = writeln!(out, "recurrent: {} <-> {}", set(a), set(b));
        }
        let _ = writeln!(out, "L1': {}", set(&self.l1_prime));
        out
    }
}

/// Role of a node in the literal layered expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Role {
    Source,
    Inner,
    Target,
}

/// The SMS unrolled node by node to a fixed depth, following the
/// construction rule literally. Used to cross-check the finite summary.
#[derive(Debug, Clone)]
pub struct ExplicitSms {
    // nodes[h] = (type, role) pairs on layer h
    nodes: Vec<Vec<(TypeId, Role)>>,
    // parents[h][i] = indices into nodes[h-1]
    parents: Vec<Vec<Vec<usize>>>,
}

impl ExplicitSms {
    pub fn expand(schema: &NetworkSchema, source: TypeId, depth: usize) -> Self {
        let mut nodes = vec![vec![(source, Role::Source)]];
        let mut parents: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
        for h in 0..depth {
            let mut next: Vec<(TypeId, Role)> = Vec::new();
            let mut next_parents: Vec<Vec<usize>> = Vec::new();
            for (pi, &(ty, role)) in nodes[h].iter().enumerate() {
                if role == Role::Target {
                    continue;
                }
                for &n in schema.neighbors(ty) {
                    let mut roles = Vec::new();
                    if n == source {
                        roles.push(Role::Target);
                        if schema.has_self_loop(source) {
                            roles.push(Role::Inner);
                        }
                    } else {
                        roles.push(Role::Inner);
                    }
                    for r in roles {
                        let idx = match next.iter().position(|&x| x == (n, r)) {
                            Some(i) => i,
                            None => {
                                next.push((n, r));
                                next_parents.push(Vec::new());
                                next.len() - 1
                            }
                        };
                        next_parents[idx].push(pi);
                    }
                }
            }
            nodes.push(next);
            parents.push(next_parents);
        }
        Self { nodes, parents }
    }

    pub fn depth(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Intermediate types on layer `h`, sorted.
    pub fn layer(&self, h: usize) -> Vec<TypeId> {
        let mut v: Vec<TypeId> = self.nodes[h]
            .iter()
            .filter(|(_, r)| *r == Role::Inner)
            .map(|(t, _)| *t)
            .collect();
        v.sort_unstable();
        v
    }

    /// Layers carrying a target occurrence.
    pub fn target_layers(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&h| self.nodes[h].iter().any(|(_, r)| *r == Role::Target))
            .collect()
    }

    /// Ancestors of the target occurrence on layer `h`, layer by layer.
    pub fn walk_up(&self, h: usize) -> Option<Vec<Vec<TypeId>>> {
        let start = self.nodes[h].iter().position(|(_, r)| *r == Role::Target)?;
        let mut current: BTreeSet<usize> = BTreeSet::from([start]);
        let mut out = vec![Vec::new(); h + 1];
        for j in (0..=h).rev() {
            let mut types: Vec<TypeId> = current.iter().map(|&i| self.nodes[j][i].0).collect();
            types.sort_unstable();
            types.dedup();
            out[j] = types;
            if j > 0 {
                current = current
                    .iter()
                    .flat_map(|&i| self.parents[j][i].iter().copied())
                    .collect();
            }
        }
        Some(out)
    }
}

/// Counts occurrences of the block `(a, b, a)` in `layers[lo ..= hi]`.
pub fn count_blocks(layers: &[Vec<TypeId>], a: &[TypeId], b: &[TypeId], lo: usize, hi: usize) -> usize {
    if hi < lo + 2 || hi >= layers.len() {
        return 0;
    }
    (lo..=hi - 2)
        .filter(|&i| layers[i] == a && layers[i + 1] == b && layers[i + 2] == a)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::tests::{bio, dblp};

    fn ids(v: &[u32]) -> Vec<TypeId> {
        v.iter().map(|&i| TypeId(i)).collect()
    }

    #[test]
    fn dblp_layers() {
        let sms = build_sms(&dblp(), TypeId(0)).unwrap();
        assert_eq!(sms.h0(), 2);
        assert_eq!(sms.layer_types(0), ids(&[0]));
        assert_eq!(sms.layer_types(1), ids(&[1]));
        assert_eq!(sms.layer_types(2), ids(&[2, 3]));
        assert_eq!(sms.layer_types(3), ids(&[1]));
        assert_eq!(sms.layer_types(17), ids(&[1]));
        let (a, b) = sms.recurrent();
        assert_eq!((a, b), (&ids(&[2, 3])[..], &ids(&[1])[..]));
        assert!(sms.source_degree_is_one());
    }

    #[test]
    fn dblp_structures() {
        let s = dblp();
        let sms = build_sms(&s, TypeId(0)).unwrap();
        assert_eq!(sms.meta_structure_at(2).unwrap().display(&s).to_string(), "(A,P,A)");
        assert_eq!(
            sms.meta_structure_at(4).unwrap().display(&s).to_string(),
            "(A,P,(V,T),P,A)"
        );
        assert_eq!(
            sms.meta_structure_at(6).unwrap().display(&s).to_string(),
            "(A,P,(V,T),P,(V,T),P,A)"
        );
        assert!(matches!(sms.meta_structure_at(3), Err(Error::InvalidDepth(3))));
        for h in (2..12).step_by(2) {
            let ms = sms.meta_structure_at(h).unwrap();
            assert_eq!(ms.reverse(), ms);
        }
    }

    #[test]
    fn bio_layers() {
        let s = bio();
        let g = s.type_id("G").unwrap();
        let sms = build_sms(&s, g).unwrap();
        let names = |ts: &[TypeId]| -> Vec<String> {
            ts.iter().map(|&t| s.type_name(t).to_string()).collect()
        };
        assert_eq!(names(sms.layer_types(1)), ["T", "GO", "CC"]);
        assert_eq!(names(sms.l1_prime()), ["CC"]);
        assert_eq!(names(sms.layer_types(2)), ["Sub", "Si"]);
        assert_eq!(names(sms.layer_types(4)), ["Sub", "Si"]);
        assert!(!sms.source_degree_is_one());
        // T and GO drop out of every structure deeper than h = 2
        assert_eq!(
            sms.meta_structure_at(2).unwrap().display(&s).to_string(),
            "(G,(T,GO,CC),G)"
        );
        assert_eq!(
            sms.meta_structure_at(4).unwrap().display(&s).to_string(),
            "(G,CC,(Sub,Si),CC,G)"
        );
    }

    #[test]
    fn path_schema_degenerates() {
        let s = NetworkSchema::from_pairs(&["A", "B"], &[(0, 1)]);
        let sms = build_sms(&s, TypeId(0)).unwrap();
        assert_eq!(sms.h0(), 1);
        assert_eq!(sms.layer_types(1), ids(&[1]));
        assert!(sms.is_degenerate());
        assert!(sms.layer_types(2).is_empty());
        assert!(sms.layer_types(5).is_empty());
        assert!(sms.target_at(2));
        assert!(!sms.target_at(4));
    }

    #[test]
    fn isolated_type_has_no_sms() {
        let s = NetworkSchema::from_pairs(&["A", "B"], &[]);
        assert!(matches!(build_sms(&s, TypeId(0)), Err(Error::NoSms(_))));
    }

    #[test]
    fn odd_cycle_is_rejected() {
        // A-B-C with a triangle C-D-E
        let s = NetworkSchema::from_pairs(
            &["A", "B", "C", "D", "E"],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 2)],
        );
        assert!(matches!(build_sms(&s, TypeId(0)), Err(Error::NotStratified(_))));
    }

    #[test]
    fn recurrence_counts() {
        assert_eq!(n_recurrences(6, 2).unwrap(), 1);
        assert_eq!(n_recurrences(4, 2).unwrap(), 0);
        assert_eq!(n_recurrences(2, 2).unwrap(), 0);
        assert_eq!(n_recurrences(12, 3).unwrap(), 3);
        assert!(n_recurrences(7, 2).is_err());
        assert!(n_recurrences(0, 2).is_err());
    }

    #[test]
    fn explicit_expansion_agrees_on_dblp() {
        let s = dblp();
        let sms = build_sms(&s, TypeId(0)).unwrap();
        let ex = ExplicitSms::expand(&s, TypeId(0), 10);
        assert_eq!(ex.target_layers(), [2, 4, 6, 8, 10]);
        for h in 1..=10 {
            assert_eq!(ex.layer(h), sms.layer_types(h), "layer {h}");
        }
        for h in (2..=10).step_by(2) {
            let up = ex.walk_up(h).unwrap();
            assert_eq!(up, sms.structure_layers(h).unwrap());
            let (a, b) = sms.recurrent();
            let n = count_blocks(&up, a, b, sms.h0(), h - sms.h0());
            assert_eq!(n, n_recurrences(h, sms.h0()).unwrap());
        }
    }

    #[test]
    fn self_loop_source_keeps_an_intermediate_copy() {
        // P-P citation plus P-A
        let s = NetworkSchema::from_pairs(&["P", "A"], &[(0, 0), (0, 1)]);
        let sms = build_sms(&s, TypeId(0)).unwrap();
        assert_eq!(sms.layer_types(1), ids(&[0, 1]));
        assert!(sms.target_at(1));
        let ex = ExplicitSms::expand(&s, TypeId(0), 4);
        assert_eq!(ex.layer(1), ids(&[0, 1]));
        assert_eq!(ex.target_layers(), [1, 2, 3, 4]);
    }

    #[test]
    fn render_uses_layer_labels() {
        let s = dblp();
        let text = build_sms(&s, TypeId(0)).unwrap().render(&s);
        assert!(text.contains("layer 2: A_2 V_2 T_2"));
        assert!(text.contains("layer 3: P_3"));
        assert!(text.contains("layer 6: A_6 V_6 T_6"));
        assert!(text.contains("recurrent: {V,T} <-> {P}"));
    }
}
