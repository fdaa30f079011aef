//! Meta paths and layered meta structures.

use std::fmt;

use crate::error::{Error, Result};
use crate::hin::{Hin, LinkTypeId, TypeId};
use crate::schema::NetworkSchema;

/// A layered DAG of object types. Layer `i` connects to layer `i + 1` through
/// every schema-adjacent pair of types.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MetaStructure {
    layers: Vec<Vec<TypeId>>,
}

impl MetaStructure {
    /// Type sets are stored sorted by type handle.
    pub fn new(layers: Vec<Vec<TypeId>>) -> Result<Self> {
        if layers.is_empty() || layers.iter().any(Vec::is_empty) {
            return Err(Error::EmptyTypeSet);
        }
        if layers[0].len() != 1 || layers[layers.len() - 1].len() != 1 {
            return Err(Error::IncompatibleStructure(
                "first and last layers must hold a single type".into(),
            ));
        }
        let layers = layers
            .into_iter()
            .map(|mut l| {
                l.sort_unstable();
                l.dedup();
                l
            })
            .collect();
        Ok(Self { layers })
    }

    /// Parses the compact notation `A,P,(V,T),P,A` against a schema.
    pub fn parse(spec: &str, schema: &NetworkSchema) -> Result<Self> {
        let spec = spec.trim();
        let spec = spec
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .filter(|s| balanced(s))
            .unwrap_or(spec);
        let mut layers = Vec::new();
        let mut rest = spec;
        while !rest.is_empty() {
            rest = rest.trim_start();
            let (item, tail) = if let Some(inner) = rest.strip_prefix('(') {
                let end = inner.find(')').ok_or_else(|| {
                    Error::IncompatibleStructure(format!("unbalanced parenthesis in `{spec}`"))
                })?;
                let tail = inner[end + 1..].trim_start();
                (&inner[..end], tail.strip_prefix(',').unwrap_or(tail))
            } else {
                match rest.find(',') {
                    Some(i) => (&rest[..i], &rest[i + 1..]),
                    None => (rest, ""),
                }
            };
            let mut layer = Vec::new();
            for name in item.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                layer.push(
                    schema
                        .type_id(name)
                        .ok_or_else(|| Error::UnknownType(name.to_string()))?,
                );
            }
            layers.push(layer);
            rest = tail;
        }
        let s = Self::new(layers)?;
        s.validate(schema)?;
        Ok(s)
    }

    pub fn layers(&self) -> &[Vec<TypeId>] {
        &self.layers
    }

    /// Number of layer transitions.
    pub fn height(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn source_type(&self) -> TypeId {
        self.layers[0][0]
    }

    pub fn target_type(&self) -> TypeId {
        self.layers[self.layers.len() - 1][0]
    }

    pub fn reverse(&self) -> Self {
        let mut layers = self.layers.clone();
        layers.reverse();
        Self { layers }
    }

    pub fn is_symmetric(&self) -> bool {
        self.reverse() == *self
    }

    /// Every type must reach the next layer through a schema edge.
    pub fn validate(&self, schema: &NetworkSchema) -> Result<()> {
        for ty in self.layers.iter().flatten() {
            if ty.index() >= schema.num_types() {
                return Err(Error::UnknownType(format!("#{}", ty.0)));
            }
        }
        for (i, pair) in self.layers.windows(2).enumerate() {
            for &t in &pair[0] {
                if !pair[1].iter().any(|&u| schema.adjacent(t, u)) {
                    return Err(Error::IncompatibleStructure(format!(
                        "type `{}` on layer {i} has no neighbour on layer {}",
                        schema.type_name(t),
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Schema-adjacent type pairs between layer `i` and `i + 1`.
    pub fn edges(&self, schema: &NetworkSchema, i: usize) -> Vec<(TypeId, TypeId)> {
        let mut out = Vec::new();
        for &a in &self.layers[i] {
            for &b in &self.layers[i + 1] {
                if schema.adjacent(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn as_meta_path(&self) -> Option<Vec<TypeId>> {
        self.layers
            .iter()
            .map(|l| (l.len() == 1).then_some(l[0]))
            .collect()
    }

    pub fn display<'a>(&'a self, names: &'a NetworkSchema) -> impl fmt::Display + 'a {
        CompactDisplay {
            layers: &self.layers,
            schema: names,
        }
    }
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

struct CompactDisplay<'a> {
    layers: &'a [Vec<TypeId>],
    schema: &'a NetworkSchema,
}

impl fmt::Display for CompactDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, layer) in self.layers.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let names: Vec<&str> = layer.iter().map(|&t| self.schema.type_name(t)).collect();
            if names.len() == 1 {
                f.write_str(names[0])?;
            } else {
                write!(f, "({})", names.join(","))?;
            }
        }
        f.write_str(")")
    }
}

/// Alternating sequence of object types and link types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaPath {
    pub types: Vec<TypeId>,
    pub link_types: Vec<LinkTypeId>,
}

impl MetaPath {
    /// Resolves the link type of each step to the first registered link type
    /// joining the two object types.
    pub fn new(hin: &Hin, types: Vec<TypeId>) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::EmptyTypeSet);
        }
        let mut link_types = Vec::with_capacity(types.len() - 1);
        for w in types.windows(2) {
            let lt = hin
                .link_types()
                .iter()
                .find(|lt| lt.source_type == w[0] && lt.target_type == w[1])
                .ok_or_else(|| {
                    Error::IncompatibleStructure(format!(
                        "no link type from `{}` to `{}`",
                        hin.type_name(w[0]),
                        hin.type_name(w[1])
                    ))
                })?;
            link_types.push(lt.id);
        }
        Ok(Self { types, link_types })
    }

    /// Parses `A,P,A` style notation.
    pub fn parse(hin: &Hin, spec: &str) -> Result<Self> {
        let types = spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|n| hin.require_type(n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(hin, types)
    }

    pub fn len(&self) -> usize {
        self.link_types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.link_types.is_empty()
    }

    pub fn reverse(&self, hin: &Hin) -> Self {
        Self {
            types: self.types.iter().rev().copied().collect(),
            link_types: self
                .link_types
                .iter()
                .rev()
                .map(|&lt| hin.link_type(lt).reverse)
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.types.iter().eq(self.types.iter().rev())
    }

    pub fn to_structure(&self) -> MetaStructure {
        MetaStructure {
            layers: self.types.iter().map(|&t| vec![t]).collect(),
        }
    }

    pub fn display<'a>(&'a self, hin: &'a Hin) -> impl fmt::Display + 'a {
        PathDisplay { path: self, hin }
    }
}

struct PathDisplay<'a> {
    path: &'a MetaPath,
    hin: &'a Hin,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self
            .path
            .types
            .iter()
            .map(|&t| self.hin.type_name(t))
            .collect();
        write!(f, "({})", names.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::tests::dblp;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display_compact_notation() {
        let s = dblp();
        let ms = MetaStructure::parse("A,P,(V,T),P,A", &s).unwrap();
        assert_eq!(ms.height(), 4);
        assert_eq!(ms.display(&s).to_string(), "(A,P,(V,T),P,A)");
        assert!(ms.is_symmetric());
        let wrapped = MetaStructure::parse("(A,P,(T,V),P,A)", &s).unwrap();
        assert_eq!(wrapped, ms);
    }

    #[test]
    fn reverse_of_path() {
        let s = dblp();
        let ms = MetaStructure::parse("A,P,V", &s).unwrap();
        assert_eq!(ms.reverse().display(&s).to_string(), "(V,P,A)");
    }

    #[test]
    fn rejects_non_adjacent_layers() {
        let s = dblp();
        assert!(matches!(
            MetaStructure::parse("A,V", &s),
            Err(Error::IncompatibleStructure(_))
        ));
        assert!(matches!(
            MetaStructure::parse("A,Q", &s),
            Err(Error::UnknownType(_))
        ));
    }

    #[test]
    fn meta_path_reverse_uses_reverse_link_types() {
        let mut b = crate::hin::HinBuilder::new();
        let a = b.add_object("a", "A").unwrap();
        let p = b.add_object("p", "P").unwrap();
        b.add_link(a, p, Some("writes"));
        let hin = b.build();
        let path = MetaPath::parse(&hin, "A,P").unwrap();
        let rev = path.reverse(&hin);
        assert_eq!(hin.link_type(rev.link_types[0]).name, "writes^-1");
        assert_eq!(rev.reverse(&hin), path);
        assert_eq!(rev.display(&hin).to_string(), "(P,A)");
    }

    fn arb_structure() -> impl Strategy<Value = MetaStructure> {
        (
            0u32..4,
            prop::collection::vec(prop::collection::btree_set(0u32..4, 1..4), 0..5),
            0u32..4,
        )
            .prop_map(|(s, mid, t)| {
                let mut layers = vec![vec![TypeId(s)]];
                layers.extend(
                    mid.into_iter()
                        .map(|l| l.into_iter().map(TypeId).collect::<Vec<_>>()),
                );
                layers.push(vec![TypeId(t)]);
                MetaStructure::new(layers).unwrap()
            })
    }

    proptest! {
        #[test]
        fn reverse_round_trips(ms in arb_structure()) {
            let r = ms.reverse();
            prop_assert_eq!(r.source_type(), ms.target_type());
            prop_assert_eq!(r.target_type(), ms.source_type());
            prop_assert_eq!(r.reverse(), ms);
        }
    }
}
