//! Cartesian products of per-type object sets and tuple adjacency.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hin::{Hin, ObjectId, TypeId};
use crate::schema::NetworkSchema;

/// An ordered set of object tuples over a fixed, canonically ordered list of
/// types. Tuples are sorted lexicographically by per-type ordinal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerProduct {
    types: Vec<TypeId>,
    // flattened, stride = types.len()
    tuples: Vec<ObjectId>,
    index: HashMap<Vec<ObjectId>, usize>,
}

impl LayerProduct {
    /// The full cartesian product of the objects of `types`.
    pub fn full(hin: &Hin, types: &[TypeId]) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::EmptyTypeSet);
        }
        let mut types = types.to_vec();
        types.sort_unstable();
        types.dedup();
        let sets: Vec<&[ObjectId]> = types.iter().map(|&t| hin.objects_of(t)).collect();
        let mut tuples = Vec::new();
        cartesian(&sets, &mut Vec::with_capacity(types.len()), &mut |t| {
            tuples.extend_from_slice(t)
        });
        Ok(Self::from_sorted(types, tuples))
    }

    /// Builds a product from arbitrary tuples (given in `types` order, which
    /// must already be canonical); duplicates are dropped.
    pub fn from_tuples(types: Vec<TypeId>, tuples: impl IntoIterator<Item = Vec<ObjectId>>) -> Self {
        debug_assert!(types.windows(2).all(|w| w[0] < w[1]));
        let mut list: Vec<Vec<ObjectId>> = tuples.into_iter().collect();
        list.sort_unstable();
        list.dedup();
        let flat = list.into_iter().flatten().collect();
        Self::from_sorted(types, flat)
    }

    fn from_sorted(types: Vec<TypeId>, tuples: Vec<ObjectId>) -> Self {
        let stride = types.len().max(1);
        let index = tuples
            .chunks(stride)
            .enumerate()
            .map(|(i, t)| (t.to_vec(), i))
            .collect();
        Self {
            types,
            tuples,
            index,
        }
    }

    pub fn types(&self) -> &[TypeId] {
        &self.types
    }

    pub fn len(&self) -> usize {
        if self.types.is_empty() {
            0
        } else {
            self.tuples.len() / self.types.len()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuple(&self, i: usize) -> &[ObjectId] {
        let k = self.types.len();
        &self.tuples[i * k..(i + 1) * k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[ObjectId]> {
        self.tuples.chunks(self.types.len().max(1))
    }

    pub fn position(&self, tuple: &[ObjectId]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// Keeps the tuples whose index satisfies `keep`, preserving order.
    pub fn retain_indices(&self, keep: impl Fn(usize) -> bool) -> Self {
        let tuples = self
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .flat_map(|(_, t)| t.iter().copied())
            .collect();
        Self::from_sorted(self.types.clone(), tuples)
    }

    /// Human-readable tuple label, e.g. `(TKDE,Similarity)`.
    pub fn label(&self, hin: &Hin, i: usize) -> String {
        let names: Vec<&str> = self.tuple(i).iter().map(|&o| hin.object_name(o)).collect();
        if names.len() == 1 {
            names[0].to_string()
        } else {
            format!("({})", names.join(","))
        }
    }
}

pub fn layer_product(hin: &Hin, types: &[TypeId]) -> Result<LayerProduct> {
    LayerProduct::full(hin, types)
}

fn cartesian(sets: &[&[ObjectId]], prefix: &mut Vec<ObjectId>, emit: &mut impl FnMut(&[ObjectId])) {
    if prefix.len() == sets.len() {
        emit(prefix);
        return;
    }
    for &o in sets[prefix.len()] {
        prefix.push(o);
        cartesian(sets, prefix, emit);
        prefix.pop();
    }
}

/// True iff every schema-adjacent pair `(u ∈ s, v ∈ t)` is linked in `hin`.
pub fn tuple_adjacent(hin: &Hin, schema: &NetworkSchema, s: &[ObjectId], t: &[ObjectId]) -> bool {
    s.iter().all(|&u| {
        t.iter().all(|&v| {
            !schema.adjacent(hin.type_of(u), hin.type_of(v)) || hin.are_linked(u, v)
        })
    })
}

/// For each type of the next layer, the objects compatible with `from`:
/// those linked to every member of `from` whose type is schema-adjacent.
pub fn candidates<'a>(
    hin: &'a Hin,
    schema: &NetworkSchema,
    from: &[ObjectId],
    to_types: &[TypeId],
) -> Vec<std::borrow::Cow<'a, [ObjectId]>> {
    use std::borrow::Cow;
    to_types
        .iter()
        .map(|&y| {
            let mut constrained = from
                .iter()
                .filter(|&&u| schema.adjacent(hin.type_of(u), y))
                .map(|&u| hin.neighbors_of_type(u, y));
            match constrained.next() {
                None => Cow::Borrowed(hin.objects_of(y)),
                Some(first) => {
                    let mut acc: Vec<ObjectId> = first.to_vec();
                    for list in constrained {
                        acc.retain(|o| list.binary_search(o).is_ok());
                    }
                    Cow::Owned(acc)
                }
            }
        })
        .collect()
}

/// Number of tuples over `to_types` adjacent to `from`.
pub fn forward_degree(hin: &Hin, schema: &NetworkSchema, from: &[ObjectId], to_types: &[TypeId]) -> usize {
    candidates(hin, schema, from, to_types)
        .iter()
        .map(|c| c.len())
        .product()
}

/// Every tuple over `to_types` (canonical order) adjacent to `from`, in
/// lexicographic order.
pub fn adjacent_tuples(
    hin: &Hin,
    schema: &NetworkSchema,
    from: &[ObjectId],
    to_types: &[TypeId],
) -> Vec<Vec<ObjectId>> {
    let cands = candidates(hin, schema, from, to_types);
    let sets: Vec<&[ObjectId]> = cands.iter().map(|c| c.as_ref()).collect();
    let mut out = Vec::new();
    cartesian(&sets, &mut Vec::with_capacity(sets.len()), &mut |t| {
        out.push(t.to_vec())
    });
    out
}
