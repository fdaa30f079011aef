//! Typed object/link storage for a heterogeneous information network.
//!
//! Objects are addressed by a dense global [`ObjectId`] (nodes-file order) and
//! also carry a dense per-type ordinal, which is the row/column index used by
//! every matrix built from the network. Links are stored in both directions.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub u32);

impl TypeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(pub u32);

impl ObjectId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkTypeId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectType {
    pub id: TypeId,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkType {
    pub id: LinkTypeId,
    pub source_type: TypeId,
    pub target_type: TypeId,
    pub name: String,
    pub reverse: LinkTypeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub src: ObjectId,
    pub dst: ObjectId,
    pub link_type: LinkTypeId,
}

/// An immutable heterogeneous information network.
#[derive(Debug, Clone, Default)]
pub struct Hin {
    types: Vec<ObjectType>,
    type_index: HashMap<String, TypeId>,
    names: Vec<String>,
    name_index: HashMap<String, ObjectId>,
    object_type: Vec<TypeId>,
    ordinal: Vec<u32>,
    by_type: Vec<Vec<ObjectId>>,
    link_types: Vec<LinkType>,
    links: Vec<Link>,
    // adjacency[object][type] = sorted neighbours of that type
    adjacency: Vec<Vec<Vec<ObjectId>>>,
}

impl Hin {
    /// Loads a network from the nodes and edges TSV files.
    pub fn load(nodes: impl AsRef<Path>, edges: impl AsRef<Path>) -> Result<Self> {
        let nodes_path = nodes.as_ref();
        let edges_path = edges.as_ref();
        let nodes_file = BufReader::new(File::open(nodes_path)?);
        let edges_file = BufReader::new(File::open(edges_path)?);
        Self::from_readers(
            nodes_file,
            &nodes_path.display().to_string(),
            edges_file,
            &edges_path.display().to_string(),
        )
    }

    /// Parses `object_id<TAB>type_name` lines and
    /// `src_id<TAB>dst_id[<TAB>link_type]` lines. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_readers(
        nodes: impl BufRead,
        nodes_name: &str,
        edges: impl BufRead,
        edges_name: &str,
    ) -> Result<Self> {
        let mut builder = HinBuilder::default();
        for (lineno, line) in nodes.lines().enumerate() {
            let line = line?;
            let Some(fields) = split_record(&line) else {
                continue;
            };
            if fields.len() != 2 || fields[0].is_empty() || fields[1].is_empty() {
                return Err(Error::Parse {
                    file: nodes_name.to_string(),
                    line: lineno + 1,
                    message: format!("expected `object_id<TAB>type_name`, got {line:?}"),
                });
            }
            builder.add_object(fields[0], fields[1])?;
        }
        for (lineno, line) in edges.lines().enumerate() {
            let line = line?;
            let Some(fields) = split_record(&line) else {
                continue;
            };
            if !(2..=3).contains(&fields.len()) || fields.iter().any(|f| f.is_empty()) {
                return Err(Error::Parse {
                    file: edges_name.to_string(),
                    line: lineno + 1,
                    message: format!("expected `src_id<TAB>dst_id[<TAB>link_type]`, got {line:?}"),
                });
            }
            let lookup = |id: &str| {
                builder
                    .object_id(id)
                    .ok_or_else(|| Error::UnknownEdgeEndpoint {
                        file: edges_name.to_string(),
                        line: lineno + 1,
                        id: id.to_string(),
                    })
            };
            let src = lookup(fields[0])?;
            let dst = lookup(fields[1])?;
            builder.add_link(src, dst, fields.get(2).copied());
        }
        Ok(builder.build())
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn num_objects(&self) -> usize {
        self.names.len()
    }

    /// Number of stored (directed) links; every input edge is stored twice
    /// unless it is a self-link.
    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn types(&self) -> &[ObjectType] {
        &self.types
    }

    pub fn type_name(&self, ty: TypeId) -> &str {
        &self.types[ty.index()].name
    }

    pub fn type_id(&self, name: &str) -> Option<TypeId> {
        self.type_index.get(name).copied()
    }

    pub fn require_type(&self, name: &str) -> Result<TypeId> {
        self.type_id(name)
            .ok_or_else(|| Error::UnknownType(name.to_string()))
    }

    pub fn object_name(&self, obj: ObjectId) -> &str {
        &self.names[obj.index()]
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.name_index.get(name).copied()
    }

    pub fn require_object(&self, name: &str) -> Result<ObjectId> {
        self.object_id(name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    /// φ: the type of an object.
    pub fn type_of(&self, obj: ObjectId) -> TypeId {
        self.object_type[obj.index()]
    }

    /// Dense position of `obj` among the objects of its own type.
    pub fn ordinal(&self, obj: ObjectId) -> usize {
        self.ordinal[obj.index()] as usize
    }

    pub fn objects_of(&self, ty: TypeId) -> &[ObjectId] {
        &self.by_type[ty.index()]
    }

    pub fn count_of(&self, ty: TypeId) -> usize {
        self.by_type[ty.index()].len()
    }

    pub fn link_types(&self) -> &[LinkType] {
        &self.link_types
    }

    pub fn link_type(&self, id: LinkTypeId) -> &LinkType {
        &self.link_types[id.0 as usize]
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Neighbours of `obj` whose type is `ty`, sorted by object id.
    pub fn neighbors_of_type(&self, obj: ObjectId, ty: TypeId) -> &[ObjectId] {
        &self.adjacency[obj.index()][ty.index()]
    }

    pub fn are_linked(&self, u: ObjectId, v: ObjectId) -> bool {
        self.neighbors_of_type(u, self.type_of(v))
            .binary_search(&v)
            .is_ok()
    }

    pub fn degree(&self, obj: ObjectId) -> usize {
        self.adjacency[obj.index()].iter().map(Vec::len).sum()
    }
}

fn split_record(line: &str) -> Option<Vec<&str>> {
    let line = line.trim_end_matches(['\r', '\n']);
    if line.trim().is_empty() || line.starts_with('#') {
        return None;
    }
    Some(line.split('\t').collect())
}

/// Incremental construction of a [`Hin`]; used by the TSV loader and by
/// generators.
#[derive(Debug, Default)]
pub struct HinBuilder {
    types: Vec<ObjectType>,
    type_index: HashMap<String, TypeId>,
    names: Vec<String>,
    name_index: HashMap<String, ObjectId>,
    object_type: Vec<TypeId>,
    link_types: Vec<LinkType>,
    link_type_index: HashMap<(TypeId, TypeId, String), LinkTypeId>,
    links: BTreeSet<Link>,
}

impl HinBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object_id(&self, name: &str) -> Option<ObjectId> {
        self.name_index.get(name).copied()
    }

    fn intern_type(&mut self, name: &str) -> TypeId {
        if let Some(&id) = self.type_index.get(name) {
            return id;
        }
        let id = TypeId(self.types.len() as u32);
        self.types.push(ObjectType {
            id,
            name: name.to_string(),
        });
        self.type_index.insert(name.to_string(), id);
        id
    }

    /// Adds an object. Re-declaring an object with the same type is a no-op.
    pub fn add_object(&mut self, name: &str, type_name: &str) -> Result<ObjectId> {
        if let Some(&existing) = self.name_index.get(name) {
            let existing_type = &self.types[self.object_type[existing.index()].index()].name;
            if existing_type != type_name {
                return Err(Error::ConflictingObjectType {
                    id: name.to_string(),
                    existing: existing_type.clone(),
                    conflicting: type_name.to_string(),
                });
            }
            return Ok(existing);
        }
        let ty = self.intern_type(type_name);
        let id = ObjectId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.name_index.insert(name.to_string(), id);
        self.object_type.push(ty);
        Ok(id)
    }

    fn intern_link_type(&mut self, src: TypeId, dst: TypeId, name: Option<&str>) -> LinkTypeId {
        let (forward, backward) = match name {
            Some(n) => (n.to_string(), format!("{n}^-1")),
            None => {
                let s = &self.types[src.index()].name;
                let d = &self.types[dst.index()].name;
                (format!("{s}-{d}"), format!("{d}-{s}"))
            }
        };
        if let Some(&id) = self.link_type_index.get(&(src, dst, forward.clone())) {
            return id;
        }
        // A named link type may already be registered as the reverse of its
        // counterpart, e.g. `writes^-1` declared explicitly.
        let fwd_id = LinkTypeId(self.link_types.len() as u32);
        let self_reverse = src == dst && forward == backward;
        let bwd_id = if self_reverse {
            fwd_id
        } else {
            LinkTypeId(fwd_id.0 + 1)
        };
        self.link_types.push(LinkType {
            id: fwd_id,
            source_type: src,
            target_type: dst,
            name: forward.clone(),
            reverse: bwd_id,
        });
        self.link_type_index.insert((src, dst, forward), fwd_id);
        if !self_reverse {
            self.link_types.push(LinkType {
                id: bwd_id,
                source_type: dst,
                target_type: src,
                name: backward.clone(),
                reverse: fwd_id,
            });
            self.link_type_index.insert((dst, src, backward), bwd_id);
        }
        fwd_id
    }

    /// Adds a link and its reverse. Duplicate links collapse.
    pub fn add_link(&mut self, src: ObjectId, dst: ObjectId, link_type: Option<&str>) {
        let st = self.object_type[src.index()];
        let dt = self.object_type[dst.index()];
        let lt = self.intern_link_type(st, dt, link_type);
        let rev = self.link_types[lt.0 as usize].reverse;
        self.links.insert(Link {
            src,
            dst,
            link_type: lt,
        });
        self.links.insert(Link {
            src: dst,
            dst: src,
            link_type: rev,
        });
    }

    pub fn build(self) -> Hin {
        let n_types = self.types.len();
        let mut by_type: Vec<Vec<ObjectId>> = vec![Vec::new(); n_types];
        let mut ordinal = Vec::with_capacity(self.names.len());
        for (i, ty) in self.object_type.iter().enumerate() {
            ordinal.push(by_type[ty.index()].len() as u32);
            by_type[ty.index()].push(ObjectId(i as u32));
        }
        let mut adjacency = vec![vec![Vec::new(); n_types]; self.names.len()];
        for link in &self.links {
            let dt = self.object_type[link.dst.index()];
            adjacency[link.src.index()][dt.index()].push(link.dst);
        }
        for per_obj in &mut adjacency {
            for list in per_obj.iter_mut() {
                list.sort_unstable();
                list.dedup();
            }
        }
        Hin {
            types: self.types,
            type_index: self.type_index,
            names: self.names,
            name_index: self.name_index,
            object_type: self.object_type,
            ordinal,
            by_type,
            link_types: self.link_types,
            links: self.links.into_iter().collect(),
            adjacency,
        }
    }
}

/// Object/link counts per type, as printed by `hinsim ingest`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub object_types: usize,
    /// Link types counted once per forward/reverse pair.
    pub link_types: usize,
    pub objects: usize,
    /// Undirected links.
    pub links: usize,
    pub per_type: Vec<(String, usize)>,
}

impl Hin {
    pub fn census(&self) -> Census {
        let link_types = self
            .link_types
            .iter()
            .filter(|lt| lt.id <= lt.reverse)
            .count();
        let self_links = self.links.iter().filter(|l| l.src == l.dst).count();
        Census {
            object_types: self.types.len(),
            link_types,
            objects: self.names.len(),
            links: (self.links.len() - self_links) / 2 + self_links,
            per_type: self
                .types
                .iter()
                .map(|t| (t.name.clone(), self.count_of(t.id)))
                .collect(),
        }
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} object types, {} link types, {} objects",
            self.object_types, self.link_types, self.objects
        )
    }
}
