//! Truncated power series, the reference for the closed-form recurrent term.

use ndarray::Array2;

/// `(1 - λ) · A_l · (Σ_{j=0..=k} λʲ R̄ʲ) · A_r`.
pub fn truncated_series(
    a_l: &Array2<f64>,
    r_bar: &Array2<f64>,
    a_r: &Array2<f64>,
    lambda: f64,
    k: usize,
) -> Array2<f64> {
    // Horner on the left factor keeps every intermediate at A_l's shape
    let mut term = a_l.clone();
    let mut acc = a_l.clone();
    for _ in 0..k {
        term = term.dot(r_bar) * lambda;
        acc += &term;
    }
    acc.dot(a_r) * (1.0 - lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn zero_terms() {
        let l = array![[1.0, 2.0]];
        let r = array![[0.5, 0.5], [1.0, 0.0]];
        let ar = array![[1.0], [3.0]];
        let got = truncated_series(&l, &r, &ar, 0.25, 0);
        assert_eq!(got, array![[0.75 * 7.0]]);
    }

    #[test]
    fn small_lambda_tends_to_first_term() {
        let l = array![[0.2, 0.8]];
        let r = array![[0.5, 0.5], [1.0, 0.0]];
        let ar = array![[1.0, 0.0], [0.0, 1.0]];
        let base = l.dot(&ar);
        let got = truncated_series(&l, &r, &ar, 1e-9, 50);
        for (a, b) in got.iter().zip(base.iter()) {
            assert!((a - b).abs() < 1e-8);
        }
    }
}
