//! Beta-distributed weight vectors for the parameter sweep.

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::error::{Error, Result};

/// Draws `samples` weight vectors of length `h0` from `rng`.
///
/// With `h0 = 2` the first weight is `Beta(a, b)` and the second is its
/// complement. Otherwise `h0` independent draws are normalized to sum 1.
pub fn sample_weights_with(
    rng: &mut impl Rng,
    (a, b): (f64, f64),
    h0: usize,
    samples: usize,
) -> Result<Vec<Vec<f64>>> {
    if h0 == 0 {
        return Err(Error::InvalidParameter("h0 must be at least 1".into()));
    }
    if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "invalid Beta hyper-parameters ({a}, {b})"
        )));
    }
    let beta = Beta::new(a, b).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let w = match h0 {
            1 => vec![1.0],
            2 => {
                let w0: f64 = beta.sample(rng);
                vec![w0, 1.0 - w0]
            }
            _ => {
                let raw: Vec<f64> = (0..h0).map(|_| beta.sample(rng)).collect();
                let s: f64 = raw.iter().sum();
                if s > 0.0 {
                    raw.iter().map(|v| v / s).collect()
                } else {
                    vec![1.0 / h0 as f64; h0]
                }
            }
        };
        out.push(w);
    }
    Ok(out)
}

/// Seeded convenience wrapper around [`sample_weights_with`].
pub fn sample_weights(pair: (f64, f64), h0: usize, samples: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    sample_weights_with(&mut rng, pair, h0, samples)
}
