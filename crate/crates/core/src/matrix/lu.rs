//! Dense LU factorization with partial pivoting.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// `P A = L U` with unit lower-triangular `L`, stored packed.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Array2<f64>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &Array2<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "LU needs a square matrix, got {}x{}",
                n,
                a.ncols()
            )));
        }
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = f64::EPSILON * (n.max(1) as f64) * scale.max(f64::MIN_POSITIVE);
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[[i, k]].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot <= tol {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    lu.swap([k, j], [p, j]);
                }
                perm.swap(k, p);
            }
            let d = lu[[k, k]];
            for i in k + 1..n {
                let f = lu[[i, k]] / d;
                lu[[i, k]] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[[i, j]] -= f * lu[[k, j]];
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    fn check(&self, b: &[f64]) -> Result<()> {
        if b.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "rhs of length {} for a {}x{} system",
                b.len(),
                self.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check(b)?;
        let n = self.dim();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[[i, j]] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[[i, j]] * x[j];
            }
            x[i] = s / self.lu[[i, i]];
        }
        Ok(x)
    }

    /// Solves `Aᵀ x = b` with the same factors.
    pub fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check(b)?;
        let n = self.dim();
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ z = b, Lᵀ y = z, x = Pᵀ y
        let mut z = b.to_vec();
        for i in 0..n {
            let mut s = z[i];
            for j in 0..i {
                s -= self.lu[[j, i]] * z[j];
            }
            z[i] = s / self.lu[[i, i]];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for j in i + 1..n {
                s -= self.lu[[j, i]] * z[j];
            }
            z[i] = s;
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        Ok(x)
    }
}

pub fn lu_solve(a: &Array2<f64>, b: &[f64]) -> Result<Vec<f64>> {
    Lu::new(a)?.solve(b)
}

pub fn residual_inf(a: &Array2<f64>, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.dot(&Array1::from(x.to_vec()));
    ax.iter()
        .zip(b)
        .map(|(l, r)| (l - r).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;

    #[test]
    fn identity_returns_rhs() {
        let b = [3.0, -1.5, 2.0];
        assert_eq!(lu_solve(&Array2::eye(3), &b).unwrap(), b);
    }

    #[test]
    fn diagonal_system() {
        let x = lu_solve(&array![[2.0, 0.0], [0.0, 4.0]], &[2.0, 8.0]).unwrap();
        assert_eq!(x, [1.0, 2.0]);
    }

    #[test]
    fn pivoting_needed() {
        let a = array![[0.0, 1.0], [1.0, 0.0]];
        assert_eq!(lu_solve(&a, &[3.0, 4.0]).unwrap(), [4.0, 3.0]);
    }

    #[test]
    fn singular_is_reported() {
        let a = array![[1.0, 2.0], [2.0, 4.0]];
        assert!(matches!(Lu::new(&a), Err(Error::Singular)));
        assert!(matches!(Lu::new(&Array2::zeros((2, 2))), Err(Error::Singular)));
    }

    #[test]
    fn empty_system() {
        let lu = Lu::new(&Array2::zeros((0, 0))).unwrap();
        assert!(lu.solve(&[]).unwrap().is_empty());
    }

    fn dominant(n: usize) -> impl Strategy<Value = (Array2<f64>, Vec<f64>)> {
        (
            prop::collection::vec(-1.0f64..1.0, n * n),
            prop::collection::vec(-10.0f64..10.0, n),
        )
            .prop_map(move |(vals, b)| {
                let mut a = Array2::from_shape_vec((n, n), vals).unwrap();
                for i in 0..n {
                    let off: f64 = a.row(i).iter().map(|v| v.abs()).sum();
                    a[[i, i]] = off + 1.0;
                }
                (a, b)
            })
    }

    proptest! {
        #[test]
        fn residual_is_small((a, b) in (1usize..12).prop_flat_map(dominant)) {
            let lu = Lu::new(&a).unwrap();
            let bnorm = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let x = lu.solve(&b).unwrap();
            prop_assert!(residual_inf(&a, &x, &b) <= 1e-10 * (1.0 + bnorm));
            let xt = lu.solve_transpose(&b).unwrap();
            prop_assert!(residual_inf(&a.t().to_owned(), &xt, &b) <= 1e-10 * (1.0 + bnorm));
        }
    }
}
