//! Planted-partition author/paper/venue networks with known communities.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::ClusteringBenchmark;
use crate::hin::{Hin, HinBuilder};

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub communities: usize,
    pub authors: usize,
    pub papers: usize,
    pub venues: usize,
    /// Authors per paper, inclusive range.
    pub authors_per_paper: (usize, usize),
    /// Probability that an author or venue slot is drawn from any community.
    pub noise: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    /// About 2,000 objects in three communities.
    fn default() -> Self {
        Self {
            communities: 3,
            authors: 300,
            papers: 1650,
            venues: 50,
            authors_per_paper: (1, 3),
            noise: 0.05,
            seed: 0,
        }
    }
}

/// A generated network with the community of every author.
#[derive(Debug)]
pub struct Planted {
    pub hin: Hin,
    pub benchmark: ClusteringBenchmark,
    nodes: Vec<(String, &'static str)>,
    edges: Vec<(String, String)>,
}

impl Planted {
    /// Writes `nodes.tsv`, `edges.tsv` and `benchmark.tsv` into `dir`.
    pub fn write_tsv(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let mut w = BufWriter::new(File::create(dir.join("nodes.tsv"))?);
        for (name, ty) in &self.nodes {
            writeln!(w, "{name}\t{ty}")?;
        }
        w.flush()?;
        let mut w = BufWriter::new(File::create(dir.join("edges.tsv"))?);
        for (a, b) in &self.edges {
            writeln!(w, "{a}\t{b}")?;
        }
        w.flush()?;
        let mut w = BufWriter::new(File::create(dir.join("benchmark.tsv"))?);
        for (o, l) in self.benchmark.objects.iter().zip(&self.benchmark.labels) {
            writeln!(w, "{}\tc{l}", self.hin.object_name(*o))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Each author and venue belongs to one community, round robin. A paper picks
/// a community, then its venue and authors from it, except that each slot is
/// drawn from the whole population with probability `noise`.
pub fn planted_partition(config: &PlantedConfig) -> Result<Planted> {
    let c = config.communities;
    let (lo, hi) = config.authors_per_paper;
    if c == 0 || config.authors < c || config.venues < c {
        return Err(Error::InvalidParameter(
            "every community needs at least one author and one venue".into(),
        ));
    }
    if lo == 0 || lo > hi {
        return Err(Error::InvalidParameter("authors_per_paper must satisfy 1 <= lo <= hi".into()));
    }
    if !(0.0..=1.0).contains(&config.noise) {
        return Err(Error::InvalidParameter("noise must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let authors: Vec<String> = (0..config.authors).map(|i| format!("a{i}")).collect();
    let venues: Vec<String> = (0..config.venues).map(|i| format!("v{i}")).collect();
    let by_community = |n: usize| -> Vec<Vec<usize>> {
        let mut g = vec![Vec::new(); c];
        for i in 0..n {
            g[i % c].push(i);
        }
        g
    };
    let author_groups = by_community(config.authors);
    let venue_groups = by_community(config.venues);

    let mut nodes: Vec<(String, &'static str)> = Vec::new();
    nodes.extend(authors.iter().map(|a| (a.clone(), "Author")));
    nodes.extend((0..config.papers).map(|i| (format!("p{i}"), "Paper")));
    nodes.extend(venues.iter().map(|v| (v.clone(), "Venue")));

    let mut edges = Vec::new();
    for p in 0..config.papers {
        let paper = format!("p{p}");
        let home = rng.gen_range(0..c);
        let venue = if rng.gen_bool(config.noise) {
            rng.gen_range(0..config.venues)
        } else {
            *venue_groups[home].choose(&mut rng).unwrap()
        };
        edges.push((paper.clone(), venues[venue].clone()));
        let k = rng.gen_range(lo..=hi);
        let mut chosen = Vec::with_capacity(k);
        while chosen.len() < k.min(config.authors) {
            let a = if rng.gen_bool(config.noise) {
                rng.gen_range(0..config.authors)
            } else {
                *author_groups[home].choose(&mut rng).unwrap()
            };
            if !chosen.contains(&a) {
                chosen.push(a);
            }
            if chosen.len() == author_groups[home].len() && config.noise == 0.0 {
                break;
            }
        }
        for a in chosen {
            edges.push((authors[a].clone(), paper.clone()));
        }
    }

    let mut b = HinBuilder::new();
    for (name, ty) in &nodes {
        b.add_object(name, ty)?;
    }
    for (x, y) in &edges {
        let (x, y) = (b.object_id(x).unwrap(), b.object_id(y).unwrap());
        b.add_link(x, y, None);
    }
    let hin = b.build();
    let objects = authors.iter().map(|a| hin.object_id(a).unwrap()).collect();
    let labels = (0..config.authors).map(|i| i % c).collect();
    Ok(Planted {
        hin,
        benchmark: ClusteringBenchmark::new(objects, labels),
        nodes,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> PlantedConfig {
        PlantedConfig {
            communities: 2,
            authors: 20,
            papers: 80,
            venues: 4,
            noise: 0.0,
            ..PlantedConfig::default()
        }
    }

    #[test]
    fn sizes_and_labels() {
        let p = planted_partition(&PlantedConfig::default()).unwrap();
        assert_eq!(p.hin.num_objects(), 2000);
        assert_eq!(p.hin.num_types(), 3);
        assert_eq!(p.benchmark.k(), 3);
        assert_eq!(p.benchmark.objects.len(), 300);
    }

    #[test]
    fn noiseless_papers_stay_in_community() {
        let p = planted_partition(&small()).unwrap();
        let hin = &p.hin;
        let paper = hin.type_id("Paper").unwrap();
        let author = hin.type_id("Author").unwrap();
        for &q in hin.objects_of(paper) {
            let ids: Vec<usize> = hin
                .neighbors_of_type(q, author)
                .iter()
                .map(|a| hin.object_name(*a)[1..].parse::<usize>().unwrap() % 2)
                .collect();
            assert!(ids.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn seeded() {
        let a = planted_partition(&small()).unwrap();
        let b = planted_partition(&small()).unwrap();
        assert_eq!(a.edges, b.edges);
        let c = planted_partition(&PlantedConfig { seed: 1, ..small() }).unwrap();
        assert_ne!(a.edges, c.edges);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(planted_partition(&PlantedConfig { venues: 1, ..small() }).is_err());
        assert!(planted_partition(&PlantedConfig { authors_per_paper: (2, 1), ..small() }).is_err());
        assert!(planted_partition(&PlantedConfig { noise: 1.5, ..small() }).is_err());
    }

    #[test]
    fn tsv_round_trip() {
        let p = planted_partition(&small()).unwrap();
        let dir = std::env::temp_dir().join(format!("hinsim-synth-{}", std::process::id()));
        p.write_tsv(&dir).unwrap();
        let hin = Hin::load(dir.join("nodes.tsv"), dir.join("edges.tsv")).unwrap();
        assert_eq!(hin.census(), p.hin.census());
        let bm = ClusteringBenchmark::load(&hin, dir.join("benchmark.tsv")).unwrap();
        assert_eq!(bm.labels, p.benchmark.labels);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
