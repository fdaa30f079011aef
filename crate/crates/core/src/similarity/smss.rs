use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::Result;
use crate::hin::{Hin, ObjectId};
use crate::matrix::{SmsPipeline, SmsWeights};
use crate::schema::NetworkSchema;
use crate::similarity::result::{Params, SimilarityResult};
use crate::sms::StratifiedMetaStructure;

/// `2 m_st / (m_ss + m_tt)`, or 0 when the denominator vanishes.
pub fn smss_score(m_st: f64, m_ss: f64, m_tt: f64) -> f64 {
    let d = m_ss + m_tt;
    if d > 0.0 {
        2.0 * m_st / d
    } else {
        0.0
    }
}

/// Applies [`smss_score`] to every entry of a square commuting matrix.
pub fn smss_from_matrix(m: &Array2<f64>) -> Array2<f64> {
    let d = m.diag().to_owned();
    Array2::from_shape_fn(m.dim(), |(i, j)| smss_score(m[[i, j]], d[i], d[j]))
}

/// SMSS with the diagonal of the commuting matrix memoized per (λ, w).
#[derive(Debug)]
pub struct SmssEngine<'a> {
    pipeline: SmsPipeline<'a>,
    diagonals: Mutex<HashMap<Vec<u64>, Arc<Vec<f64>>>>,
}

impl<'a> SmssEngine<'a> {
    pub fn new(hin: &'a Hin, schema: &'a NetworkSchema, sms: &'a StratifiedMetaStructure) -> Result<Self> {
        Ok(Self {
            pipeline: SmsPipeline::new(hin, schema, sms)?,
            diagonals: Mutex::new(HashMap::new()),
        })
    }

    pub fn pipeline(&self) -> &SmsPipeline<'a> {
        &self.pipeline
    }

    /// `M̄(t, t)` for every object of the source type.
    pub fn diagonal(&self, weights: &SmsWeights) -> Result<Arc<Vec<f64>>> {
        let key = weights.key();
        if let Some(d) = self.diagonals.lock().unwrap().get(&key) {
            return Ok(Arc::clone(d));
        }
        let hin = self.pipeline.hin();
        let diag: Vec<f64> = self
            .pipeline
            .sources()
            .par_iter()
            .map(|&t| Ok(self.pipeline.row(t, weights)?[hin.ordinal(t)]))
            .collect::<Result<_>>()?;
        let diag = Arc::new(diag);
        self.diagonals
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&diag));
        Ok(diag)
    }

    pub fn similarity(&self, source: ObjectId, weights: &SmsWeights) -> Result<SimilarityResult> {
        let row = self.pipeline.row(source, weights)?;
        let diag = self.diagonal(weights)?;
        let hin = self.pipeline.hin();
        let s = hin.ordinal(source);
        let scores = row
            .iter()
            .zip(diag.iter())
            .map(|(&m_st, &m_tt)| smss_score(m_st, diag[s], m_tt))
            .collect();
        Ok(SimilarityResult {
            source,
            metric: "smss",
            target_type: self.pipeline.sms().target_type(),
            scores,
            params: Params {
                lambda: Some(weights.lambda()),
                weights: Some(weights.weights().to_vec()),
                ..Params::default()
            },
        })
    }

    /// Full SMSS matrix over the source type.
    pub fn matrix(&self, weights: &SmsWeights) -> Result<Array2<f64>> {
        Ok(smss_from_matrix(&self.pipeline.matrix(weights)?))
    }
}

/// One-shot SMSS of `source` against every object of its type.
pub fn smss(
    hin: &Hin,
    schema: &NetworkSchema,
    sms: &StratifiedMetaStructure,
    source: ObjectId,
    weights: &SmsWeights,
) -> Result<SimilarityResult> {
    SmssEngine::new(hin, schema, sms)?.similarity(source, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::product::tests::toy;
    use crate::schema::extract_schema;
    use crate::sms::build_sms;

    #[test]
    fn score_edge_cases() {
        assert_eq!(smss_score(0.0, 0.0, 0.0), 0.0);
        assert_eq!(smss_score(0.4, 0.4, 0.4), 1.0);
        assert_eq!(smss_score(0.1, 0.3, 0.1), 0.5);
    }

    #[test]
    fn toy_self_scores_and_sun_han() {
        let hin = toy();
        let s = extract_schema(&hin);
        let sms = build_sms(&s, hin.type_id("Author").unwrap()).unwrap();
        let engine = SmssEngine::new(&hin, &s, &sms).unwrap();
        let w = SmsWeights::new(0.999, vec![0.3, 0.7]).unwrap();
        let sun = hin.object_id("Yizhou Sun").unwrap();
        let han = hin.object_id("Jiawei Han").unwrap();
        let r = engine.similarity(sun, &w).unwrap();
        assert!((r.score(&hin, sun) - 1.0).abs() < 1e-12);
        assert!((r.score(&hin, han) - 1.0).abs() < 1e-12);
        let ranked = r.ranked(&hin);
        assert_eq!(hin.object_name(ranked[0].0), "Jiawei Han");
        let m = engine.matrix(&w).unwrap();
        for &o in hin.objects_of(sms.source_type()) {
            let row = engine.similarity(o, &w).unwrap();
            for (j, v) in row.scores.iter().enumerate() {
                assert!((m[[hin.ordinal(o), j]] - v).abs() < 1e-12);
                assert!(v.is_finite() && *v >= 0.0);
            }
        }
    }
}
