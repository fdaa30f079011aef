//! Seeded k-means with k-means++ initialization.

use ndarray::{Array2, ArrayView1};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 300;

fn dist2(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: ArrayView1<f64>, centers: &Array2<f64>) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centers.rows().into_iter().enumerate() {
        let d = dist2(point, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn init_plus_plus(x: &Array2<f64>, k: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let n = x.nrows();
    let mut centers = Array2::zeros((k, x.ncols()));
    centers.row_mut(0).assign(&x.row(rng.gen_range(0..n)));
    let mut d: Vec<f64> = x.rows().into_iter().map(|r| dist2(r, centers.row(0))).collect();
    for c in 1..k {
        let pick = match WeightedIndex::new(&d) {
            Ok(w) => w.sample(rng),
            // every point already coincides with a center
            Err(_) => rng.gen_range(0..n),
        };
        centers.row_mut(c).assign(&x.row(pick));
        for (i, r) in x.rows().into_iter().enumerate() {
            d[i] = d[i].min(dist2(r, centers.row(c)));
        }
    }
    centers
}

/// Cluster the rows of `x` into `k` groups. Lloyd iterations run until the
/// assignment stops changing or [`MAX_ITERATIONS`] is reached. An emptied
/// cluster is re-seeded with the point farthest from its center.
pub fn kmeans(x: &Array2<f64>, k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = x.nrows();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "k = {k} exceeds the number of points ({n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = init_plus_plus(x, k, &mut rng);
    let mut assign: Vec<usize> = x.rows().into_iter().map(|r| nearest(r, &centers).0).collect();
    for _ in 0..MAX_ITERATIONS {
        let mut sums = Array2::<f64>::zeros(centers.dim());
        let mut counts = vec![0usize; k];
        for (i, r) in x.rows().into_iter().enumerate() {
            let mut row = sums.row_mut(assign[i]);
            row += &r;
            counts[assign[i]] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                let mean = &sums.row(c) / counts[c] as f64;
                centers.row_mut(c).assign(&mean);
            } else {
                let far = (0..n)
                    .max_by(|&a, &b| {
                        let da = dist2(x.row(a), centers.row(assign[a]));
                        let db = dist2(x.row(b), centers.row(assign[b]));
                        da.total_cmp(&db)
                    })
                    .unwrap();
                centers.row_mut(c).assign(&x.row(far));
            }
        }
        let next: Vec<usize> = x.rows().into_iter().map(|r| nearest(r, &centers).0).collect();
        if next == assign {
            break;
        }
        assign = next;
    }
    Ok(assign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::metrics::nmi;

    fn clouds() -> (Array2<f64>, Vec<usize>) {
        let mut rows = Vec::new();
        let mut truth = Vec::new();
        for i in 0..20 {
            let jitter = (i as f64 * 0.37).sin() * 0.1;
            rows.extend([jitter, 0.05 - jitter]);
            truth.push(0);
            rows.extend([10.0 + jitter, 10.0 - jitter]);
            truth.push(1);
        }
        (Array2::from_shape_vec((40, 2), rows).unwrap(), truth)
    }

    #[test]
    fn separates_two_clouds() {
        let (x, truth) = clouds();
        let got = kmeans(&x, 2, 7).unwrap();
        assert_eq!(nmi(&got, &truth).unwrap(), 1.0);
    }

    #[test]
    fn single_cluster() {
        let (x, _) = clouds();
        assert!(kmeans(&x, 1, 1).unwrap().iter().all(|&c| c == 0));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let (x, _) = clouds();
        assert_eq!(kmeans(&x, 3, 99).unwrap(), kmeans(&x, 3, 99).unwrap());
    }

    #[test]
    fn rejects_bad_k() {
        let (x, _) = clouds();
        assert!(kmeans(&x, 41, 0).is_err());
        assert!(kmeans(&x, 0, 0).is_err());
    }

    #[test]
    fn identical_points() {
        let x = Array2::from_elem((5, 3), 1.0);
        assert_eq!(kmeans(&x, 2, 3).unwrap().len(), 5);
    }
}
