use std::cmp::Ordering;

use crate::hin::{Hin, ObjectId, TypeId};

/// Parameters echoed alongside a score vector.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    pub lambda: Option<f64>,
    pub weights: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub structure: Option<String>,
}

/// Scores of one source against every object of the target type.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityResult {
    pub source: ObjectId,
    pub metric: &'static str,
    pub target_type: TypeId,
    /// Indexed by per-type ordinal of the target type.
    pub scores: Vec<f64>,
    pub params: Params,
}

impl SimilarityResult {
    pub fn score(&self, hin: &Hin, target: ObjectId) -> f64 {
        self.scores[hin.ordinal(target)]
    }

    /// Targets sorted by descending score, ties by object id ascending.
    pub fn ranked(&self, hin: &Hin) -> Vec<(ObjectId, f64)> {
        let mut out: Vec<(ObjectId, f64)> = hin
            .objects_of(self.target_type)
            .iter()
            .map(|&o| (o, self.scores[hin.ordinal(o)]))
            .collect();
        out.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(Ordering::Equal)
                .then_with(|| hin.object_name(a.0).cmp(hin.object_name(b.0)))
        });
        out
    }
}
