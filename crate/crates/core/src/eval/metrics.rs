//! Clustering and ranking quality measures.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information, `I(X;Y) / ((H(X) + H(Y)) / 2)`.
/// Two single-cluster labelings score 1.
pub fn nmi<A: Eq + Hash, B: Eq + Hash>(pred: &[A], truth: &[B]) -> Result<f64> {
    if pred.is_empty() {
        return Err(Error::EmptyInput("nmi needs at least one labeled object"));
    }
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} predictions for {} labels",
            pred.len(),
            truth.len()
        )));
    }
    let n = pred.len() as f64;
    let mut pa: HashMap<&A, usize> = HashMap::new();
    let mut tb: HashMap<&B, usize> = HashMap::new();
    let mut joint: HashMap<(&A, &B), usize> = HashMap::new();
    for (a, b) in pred.iter().zip(truth) {
        *pa.entry(a).or_default() += 1;
        *tb.entry(b).or_default() += 1;
        *joint.entry((a, b)).or_default() += 1;
    }
    let ha = entropy(pa.values().copied(), n);
    let hb = entropy(tb.values().copied(), n);
    if pa.len() == 1 && tb.len() == 1 {
        return Ok(1.0);
    }
    let mut mi = 0.0;
    for (&(a, b), &c) in &joint {
        let pab = c as f64 / n;
        let pa_ = pa[a] as f64 / n;
        let pb_ = tb[b] as f64 / n;
        mi += pab * (pab / (pa_ * pb_)).ln();
    }
    let denom = (ha + hb) / 2.0;
    Ok(if denom > 0.0 {
        (mi / denom).clamp(0.0, 1.0)
    } else {
        0.0
    })
}

/// DCG with discount `1 / log2(i + 1)` for 1-based position `i`.
pub fn dcg(gains: &[f64], at: Option<usize>) -> f64 {
    let k = at.unwrap_or(gains.len()).min(gains.len());
    gains[..k]
        .iter()
        .enumerate()
        .map(|(i, g)| g / ((i + 2) as f64).log2())
        .sum()
}

/// nDCG of `ranking` against graded `judgments`; unjudged objects gain 0.
/// The ideal ordering is built from all judged gains. All-zero gains give 0.
pub fn ndcg<T: Eq + Hash>(ranking: &[T], judgments: &HashMap<T, f64>, at: Option<usize>) -> f64 {
    let gains: Vec<f64> = ranking
        .iter()
        .map(|o| judgments.get(o).copied().unwrap_or(0.0))
        .collect();
    let mut ideal: Vec<f64> = judgments.values().copied().collect();
    ideal.sort_by(|a, b| b.total_cmp(a));
    let idcg = dcg(&ideal, at);
    if idcg > 0.0 {
        dcg(&gains, at) / idcg
    } else {
        0.0
    }
}
