//! Ground-truth files: clustering benchmarks and graded relevance judgments.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::hin::{Hin, ObjectId};

/// Reference clustering of a set of objects.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringBenchmark {
    pub objects: Vec<ObjectId>,
    /// Dense label ids in first-seen order.
    pub labels: Vec<usize>,
    pub label_names: Vec<String>,
}

impl ClusteringBenchmark {
    pub fn new(objects: Vec<ObjectId>, labels: Vec<usize>) -> Self {
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        Self {
            objects,
            labels,
            label_names: (0..k).map(|i| i.to_string()).collect(),
        }
    }

    /// Number of distinct labels.
    pub fn k(&self) -> usize {
        self.label_names.len()
    }

    pub fn load(hin: &Hin, path: impl AsRef<Path>) -> Result<Self> {
        let p = path.as_ref();
        Self::read(hin, BufReader::new(File::open(p)?), &p.display().to_string())
    }

    /// `object_id<TAB>cluster_label` lines.
    pub fn read(hin: &Hin, input: impl BufRead, name: &str) -> Result<Self> {
        let mut objects = Vec::new();
        let mut labels = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let Some(fields) = record(&line) else { continue };
            if fields.len() != 2 {
                return Err(parse_error(name, i, "expected `object_id<TAB>cluster_label`"));
            }
            let obj = lookup(hin, name, i, fields[0])?;
            let next = names.len();
            let label = *index.entry(fields[1].to_string()).or_insert(next);
            if label == next {
                names.push(fields[1].to_string());
            }
            objects.push(obj);
            labels.push(label);
        }
        Ok(Self {
            objects,
            labels,
            label_names: names,
        })
    }
}

/// Graded relevance (0..=3) per source object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RelevanceJudgments {
    pub per_source: BTreeMap<ObjectId, HashMap<ObjectId, f64>>,
}

impl RelevanceJudgments {
    pub fn load(hin: &Hin, path: impl AsRef<Path>) -> Result<Self> {
        let p = path.as_ref();
        Self::read(hin, BufReader::new(File::open(p)?), &p.display().to_string())
    }

    /// `source_id<TAB>object_id<TAB>gain` lines with integral gains 0..=3.
    pub fn read(hin: &Hin, input: impl BufRead, name: &str) -> Result<Self> {
        let mut per_source: BTreeMap<ObjectId, HashMap<ObjectId, f64>> = BTreeMap::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let Some(fields) = record(&line) else { continue };
            if fields.len() != 3 {
                return Err(parse_error(name, i, "expected `source_id<TAB>object_id<TAB>gain`"));
            }
            let src = lookup(hin, name, i, fields[0])?;
            let obj = lookup(hin, name, i, fields[1])?;
            let gain: u8 = fields[2]
                .trim()
                .parse()
                .ok()
                .filter(|g| *g <= 3)
                .ok_or_else(|| parse_error(name, i, "gain must be an integer in 0..=3"))?;
            per_source.entry(src).or_default().insert(obj, gain as f64);
        }
        Ok(Self { per_source })
    }

    pub fn for_source(&self, source: ObjectId) -> Option<&HashMap<ObjectId, f64>> {
        self.per_source.get(&source)
    }
}

fn record(line: &str) -> Option<Vec<&str>> {
    let line = line.trim_end_matches('\r');
    if line.trim().is_empty() || line.starts_with('#') {
        None
    } else {
        Some(line.split('\t').collect())
    }
}

fn parse_error(file: &str, i: usize, message: &str) -> Error {
    Error::Parse {
        file: file.to_string(),
        line: i + 1,
        message: message.to_string(),
    }
}

fn lookup(hin: &Hin, file: &str, i: usize, id: &str) -> Result<ObjectId> {
    hin.object_id(id).ok_or_else(|| Error::UnknownEdgeEndpoint {
        file: file.to_string(),
        line: i + 1,
        id: id.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hin() -> Hin {
        let mut b = crate::hin::HinBuilder::new();
        for n in ["a", "b", "c"] {
            b.add_object(n, "A").unwrap();
        }
        b.build()
    }

    #[test]
    fn benchmark_labels_are_dense() {
        let h = hin();
        let bm = ClusteringBenchmark::read(&h, &b"a\tx\nb\ty\n# note\nc\tx\n"[..], "bm").unwrap();
        assert_eq!(bm.labels, [0, 1, 0]);
        assert_eq!(bm.k(), 2);
        assert_eq!(bm.label_names, ["x", "y"]);
        assert!(ClusteringBenchmark::read(&h, &b"zz\tx\n"[..], "bm").is_err());
    }

    #[test]
    fn judgments_gain_range() {
        let h = hin();
        let j = RelevanceJudgments::read(&h, &b"a\tb\t3\na\tc\t0\n"[..], "j").unwrap();
        assert_eq!(j.for_source(h.object_id("a").unwrap()).unwrap().len(), 2);
        assert!(RelevanceJudgments::read(&h, &b"a\tb\t4\n"[..], "j").is_err());
        assert!(RelevanceJudgments::read(&h, &b"a\tb\t1.5\n"[..], "j").is_err());
    }
}
