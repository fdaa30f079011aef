//! Grid over λ and Beta-sampled weights, scored by clustering or ranking quality.

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::data::{ClusteringBenchmark, RelevanceJudgments};
use crate::eval::kmeans::kmeans;
use crate::eval::metrics::{ndcg, nmi};
use crate::eval::weights::sample_weights_with;
use crate::hin::{Hin, ObjectId, TypeId};
use crate::matrix::local::combine;
use crate::matrix::{SmsPipeline, SmsWeights};
use crate::similarity::smss_from_matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub lambda_grid: Vec<f64>,
    pub beta_pairs: Vec<(f64, f64)>,
    pub samples_per_pair: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            lambda_grid: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            beta_pairs: (1..=9).map(|a| (a as f64, (10 - a) as f64)).collect(),
            samples_per_pair: 10,
            seed: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(l) = self.lambda_grid.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
            return Err(Error::InvalidParameter(format!("lambda {l} outside (0, 1)")));
        }
        if let Some((a, b)) = self.beta_pairs.iter().find(|(a, b)| !(*a >= 1.0 && *b >= 1.0)) {
            return Err(Error::InvalidParameter(format!(
                "Beta pair ({a}, {b}) needs both parameters >= 1"
            )));
        }
        Ok(())
    }

    /// Total number of (λ, w) cells.
    pub fn cells(&self) -> usize {
        self.lambda_grid.len() * self.beta_pairs.len() * self.samples_per_pair
    }
}

/// What a similarity matrix is scored against.
#[derive(Debug, Clone, Copy)]
pub enum Task<'a> {
    /// k-means over SMSS rows of the labeled objects, scored by NMI.
    Cluster(&'a ClusteringBenchmark),
    /// Mean nDCG over the given sources.
    Rank {
        judgments: &'a RelevanceJudgments,
        sources: &'a [ObjectId],
        at: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub pair: (f64, f64),
    pub sample: usize,
    pub weights: Vec<f64>,
    pub score: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Highest score; ties keep the earliest row.
    pub fn best(&self) -> Option<&SweepRow> {
        pick_best(self.rows.iter())
    }

    /// One optimum per λ, in grid order.
    pub fn best_per_lambda(&self) -> Vec<&SweepRow> {
        let mut lambdas: Vec<f64> = Vec::new();
        for r in &self.rows {
            if !lambdas.contains(&r.lambda) {
                lambdas.push(r.lambda);
            }
        }
        lambdas
            .into_iter()
            .filter_map(|l| pick_best(self.rows.iter().filter(|r| r.lambda == l)))
            .collect()
    }
}

fn pick_best<'a>(rows: impl Iterator<Item = &'a SweepRow>) -> Option<&'a SweepRow> {
    rows.fold(None, |best: Option<&SweepRow>, r| match best {
        Some(b) if b.score >= r.score => Some(b),
        _ => Some(r),
    })
}

/// Score an SMSS matrix over objects of type `ty`. `seed` drives k-means.
pub fn evaluate(hin: &Hin, ty: TypeId, smss: &Array2<f64>, task: &Task, seed: u64) -> Result<f64> {
    match task {
        Task::Cluster(bm) => {
            if bm.objects.is_empty() {
                return Err(Error::EmptyInput("benchmark"));
            }
            let n = smss.ncols();
            let mut x = Array2::zeros((bm.objects.len(), n));
            for (i, &o) in bm.objects.iter().enumerate() {
                x.row_mut(i).assign(&smss.row(ordinal_in(hin, ty, smss, o)?));
            }
            let pred = kmeans(&x, bm.k(), seed)?;
            nmi(&pred, &bm.labels)
        }
        Task::Rank { judgments, sources, at } => {
            if sources.is_empty() {
                return Err(Error::EmptyInput("ranking sources"));
            }
            let mut total = 0.0;
            for &s in sources.iter() {
                let row = smss.row(ordinal_in(hin, ty, smss, s)?);
                let peers = hin.objects_of(ty);
                let mut ranking: Vec<ObjectId> = peers.iter().copied().filter(|&o| o != s).collect();
                ranking.sort_by(|&a, &b| {
                    row[hin.ordinal(b)]
                        .total_cmp(&row[hin.ordinal(a)])
                        .then_with(|| hin.object_name(a).cmp(hin.object_name(b)))
                });
                let empty = Default::default();
                let gains = judgments.for_source(s).unwrap_or(&empty);
                total += ndcg(&ranking, gains, *at);
            }
            Ok(total / sources.len() as f64)
        }
    }
}

fn ordinal_in(hin: &Hin, ty: TypeId, m: &Array2<f64>, o: ObjectId) -> Result<usize> {
    if hin.type_of(o) != ty {
        return Err(Error::ObjectTypeMismatch {
            object: hin.object_name(o).to_string(),
            expected: hin.type_name(ty).to_string(),
            found: hin.type_name(hin.type_of(o)).to_string(),
        });
    }
    let i = hin.ordinal(o);
    if i >= m.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "object {} has ordinal {i} but the similarity matrix has {} rows",
            hin.object_name(o),
            m.nrows()
        )));
    }
    Ok(i)
}

/// Evaluate every cell of `config`. Weights are drawn once, in
/// (pair, sample) order, from a single stream seeded by `config.seed`; the
/// same vectors are reused for every λ.
pub fn sweep(pipeline: &SmsPipeline, task: &Task, config: &SweepConfig) -> Result<SweepTable> {
    config.validate()?;
    let hin = pipeline.hin();
    let h0 = pipeline.sms().h0();
    let ty = pipeline.sms().source_type();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut draws: Vec<((f64, f64), usize, Vec<f64>)> = Vec::new();
    for &pair in &config.beta_pairs {
        let ws = sample_weights_with(&mut rng, pair, h0, config.samples_per_pair)?;
        draws.extend(ws.into_iter().enumerate().map(|(i, w)| (pair, i, w)));
    }
    let basic = pipeline.basic_matrices();
    let mut rows = Vec::with_capacity(config.cells());
    for &lambda in &config.lambda_grid {
        let rec = pipeline.recurrent_matrix(lambda)?;
        let scored: Vec<SweepRow> = draws
            .par_iter()
            .map(|(pair, sample, w)| {
                SmsWeights::new(lambda, w.clone())?;
                let s = smss_from_matrix(&combine(&basic, &rec, w));
                Ok(SweepRow {
                    lambda,
                    pair: *pair,
                    sample: *sample,
                    weights: w.clone(),
                    score: evaluate(hin, ty, &s, task, config.seed)?,
                })
            })
            .collect::<Result<_>>()?;
        rows.extend(scored);
    }
    Ok(SweepTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::product::tests::toy;
    use crate::schema::extract_schema;
    use crate::sms::build_sms;

    fn row(lambda: f64, score: f64) -> SweepRow {
        SweepRow {
            lambda,
            pair: (1.0, 1.0),
            sample: 0,
            weights: vec![0.5, 0.5],
            score,
        }
    }

    #[test]
    fn best_rows() {
        let t = SweepTable {
            rows: vec![row(0.1, 0.2), row(0.1, 0.7), row(0.3, 0.7), row(0.3, 0.1)],
        };
        assert_eq!(t.best().unwrap().lambda, 0.1);
        let per = t.best_per_lambda();
        assert_eq!(per.len(), 2);
        assert_eq!(per[1].score, 0.7);
        assert!(SweepTable::default().best().is_none());
    }

    #[test]
    fn config_validation() {
        assert_eq!(SweepConfig::default().cells(), 450);
        assert!(SweepConfig::default().validate().is_ok());
        let c = SweepConfig { lambda_grid: vec![1.0], ..SweepConfig::default() };
        assert!(c.validate().is_err());
        let c = SweepConfig { beta_pairs: vec![(0.5, 2.0)], ..SweepConfig::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn toy_sweep_is_replayable() {
        let hin = toy();
        let s = extract_schema(&hin);
        let sms = build_sms(&s, hin.type_id("Author").unwrap()).unwrap();
        let p = SmsPipeline::new(&hin, &s, &sms).unwrap();
        let names = ["Chuan Shi", "Philip S. Yu", "Yizhou Sun", "Jiawei Han", "Xifeng Yan"];
        let objects = names.iter().map(|n| hin.object_id(n).unwrap()).collect();
        let bm = ClusteringBenchmark::new(objects, vec![0, 0, 1, 1, 1]);
        let config = SweepConfig {
            lambda_grid: vec![0.5],
            beta_pairs: vec![(2.0, 2.0)],
            samples_per_pair: 1,
            seed: 4,
        };
        let a = sweep(&p, &Task::Cluster(&bm), &config).unwrap();
        assert_eq!(a.rows.len(), 1);
        assert_eq!(a, sweep(&p, &Task::Cluster(&bm), &config).unwrap());
        let full = sweep(&p, &Task::Cluster(&bm), &SweepConfig { lambda_grid: vec![0.1, 0.9], samples_per_pair: 2, ..config }).unwrap();
        assert_eq!(full.rows.len(), 4);
        assert!(full.rows.iter().all(|r| (0.0..=1.0).contains(&r.score)));
    }
}
