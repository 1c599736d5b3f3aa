//! Squared multiple correlation objective for sparse regression.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};

use super::{Objective, RestrictedSolve, SolverConfig};

/// `u(w) = 1 - ||y - A w||² / ||y||²`, normalized so that `u(0) = 0`, i.e.
/// `u(w) = (||y||² - ||y - A w||²) / ||y||²`.
///
/// Rows of `a` are samples, columns are features; the ground set is the
/// column index set. Restricted maximization is an exact least-squares solve
/// on the selected columns.
#[derive(Debug, Clone)]
pub struct QuadraticR2 {
    a: DMatrix<f64>,
    y: DVector<f64>,
    y_norm_sq: f64,
}

impl QuadraticR2 {
    pub fn new(a: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        if a.nrows() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: y.len(),
            });
        }
        if a.ncols() == 0 {
            return Err(Error::InvalidData("design matrix has no columns".into()));
        }
        let y_norm_sq = y.norm_squared();
        if y_norm_sq == 0.0 {
            return Err(Error::InvalidData(
                "response vector is zero; R² is undefined".into(),
            ));
        }
        Ok(QuadraticR2 { a, y, y_norm_sq })
    }

    /// Builds from row-major sample data.
    pub fn from_rows(rows: &[Vec<f64>], y: Vec<f64>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidData("no samples".into()));
        }
        let ncols = rows[0].len();
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidData("ragged design matrix".into()));
        }
        let a = DMatrix::from_row_iterator(rows.len(), ncols, rows.iter().flatten().copied());
        Ok(Self::new(a, DVector::from_vec(y))?)
    }

    pub fn n_samples(&self) -> usize {
        self.a.nrows()
    }

    /// Scaled Hessian of `-u`: `H = 2 AᵀA / ||y||²`. Restricted strong
    /// concavity and smoothness constants are extremal eigenvalues of its
    /// principal submatrices.
    pub fn scaled_hessian(&self) -> DMatrix<f64> {
        (self.a.transpose() * &self.a) * (2.0 / self.y_norm_sq)
    }
}

impl Objective for QuadraticR2 {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn eval(&self, w: &[f64]) -> f64 {
        debug_assert_eq!(w.len(), self.dim());
        let w = DVector::from_column_slice(w);
        let residual = &self.y - &self.a * w;
        (self.y_norm_sq - residual.norm_squared()) / self.y_norm_sq
    }

    fn grad(&self, w: &[f64]) -> Vec<f64> {
        debug_assert_eq!(w.len(), self.dim());
        let w = DVector::from_column_slice(w);
        let residual = &self.y - &self.a * w;
        let g = self.a.transpose() * residual * (2.0 / self.y_norm_sq);
        g.data.into()
    }

    fn restricted_argmax(&self, support: &[usize], _cfg: &SolverConfig) -> Option<RestrictedSolve> {
        let cols = DMatrix::from_columns(
            &support.iter().map(|&j| self.a.column(j)).collect::<Vec<_>>(),
        );
        let gram = cols.transpose() * &cols;
        let rhs = cols.transpose() * &self.y;
        let (coeffs, regularized) = match Cholesky::new(gram.clone()) {
            Some(chol) => (chol.solve(&rhs), false),
            None => {
                // Rank-deficient column selection: ridge fallback. The value
                // is perturbed by O(1e-10), well below the set-level tolerance.
                let mut ridged = gram;
                for i in 0..ridged.nrows() {
                    ridged[(i, i)] += 1e-10;
                }
                let chol = Cholesky::new(ridged)
                    .expect("gram matrix with ridge must be positive definite");
                (chol.solve(&rhs), true)
            }
        };
        let mut w = vec![0.0; self.dim()];
        for (k, &j) in support.iter().enumerate() {
            w[j] = coeffs[k];
        }
        let value = self.eval(&w);
        Some(RestrictedSolve {
            w,
            value,
            regularized,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::objective::SetOracle;
    use crate::set::SupportSet;

    /// A = I₂, y = (3, 4): f({0}) = 9/25, f({1}) = 16/25, f({0,1}) = 1.
    fn r1() -> QuadraticR2 {
        QuadraticR2::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]], vec![3.0, 4.0]).unwrap()
    }

    /// Columns (1,0), (0,1), (1,1)/√2, y = (3,4).
    fn r2() -> QuadraticR2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        QuadraticR2::from_rows(&[vec![1.0, 0.0, s], vec![0.0, 1.0, s]], vec![3.0, 4.0]).unwrap()
    }

    #[test]
    fn normalization_and_perfect_fit() {
        let obj = r1();
        assert_eq!(obj.eval(&[0.0, 0.0]), 0.0);
        assert!((obj.eval(&[3.0, 4.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gradient_closed_form() {
        let obj = r1();
        let g = obj.grad(&[3.0, 0.0]);
        assert!((g[0] - 0.0).abs() < 1e-15);
        assert!((g[1] - 8.0 / 25.0).abs() < 1e-15);
        // Stationarity at the full least-squares solution.
        let g = obj.grad(&[3.0, 4.0]);
        assert!(g.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn gradient_matches_central_differences() {
        let obj = r2();
        let h = 1e-6;
        let points = [
            vec![0.3, -1.2, 0.7],
            vec![1.0, 1.0, 1.0],
            vec![-2.0, 0.1, 3.4],
        ];
        for w in &points {
            let g = obj.grad(w);
            for i in 0..3 {
                let mut wp = w.clone();
                let mut wm = w.clone();
                wp[i] += h;
                wm[i] -= h;
                let fd = (obj.eval(&wp) - obj.eval(&wm)) / (2.0 * h);
                let scale = g[i].abs().max(1.0);
                assert!(
                    (fd - g[i]).abs() / scale < 1e-5,
                    "coordinate {i}: fd={fd}, grad={}",
                    g[i]
                );
            }
        }
    }

    #[test]
    fn restricted_maximizer_r1() {
        let mut oracle = SetOracle::new(Arc::new(r1()));
        let solve = oracle
            .restricted_maximizer(&SupportSet::singleton(1))
            .unwrap();
        assert!((solve.w[1] - 4.0).abs() < 1e-12);
        assert_eq!(solve.w[0], 0.0);
        assert!((solve.value - 0.64).abs() < 1e-12);
        assert!(!solve.regularized);
    }

    #[test]
    fn restricted_maximizer_r2_diagonal_column() {
        let mut oracle = SetOracle::new(Arc::new(r2()));
        let f = oracle.value(&SupportSet::singleton(2)).unwrap();
        assert!((f - 0.98).abs() < 1e-12);
    }

    #[test]
    fn marginal_gains_r1() {
        let mut oracle = SetOracle::new(Arc::new(r1()));
        let g = oracle.marginal_gain(&SupportSet::empty(), 1).unwrap();
        assert!((g - 0.64).abs() < 1e-12);
        let g = oracle.marginal_gain(&SupportSet::singleton(1), 0).unwrap();
        assert!((g - 0.36).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_support_uses_ridge() {
        // Duplicate columns make any 2-support singular.
        let obj =
            QuadraticR2::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]], vec![3.0, 4.0]).unwrap();
        let mut oracle = SetOracle::new(Arc::new(obj));
        let solve = oracle
            .restricted_maximizer(&SupportSet::from_iter([0, 1]))
            .unwrap();
        assert!(solve.regularized);
        assert_eq!(oracle.regularized_solves(), 1);
        assert!((solve.value - 9.0 / 25.0).abs() < 1e-6);
    }

    #[test]
    fn repeated_solves_agree_bitwise() {
        let mut oracle = SetOracle::new(Arc::new(r2()));
        let x = SupportSet::from_iter([0, 2]);
        let a = oracle.restricted_maximizer(&x).unwrap();
        let b = oracle.restricted_maximizer(&x).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!(a
            .w
            .iter()
            .zip(&b.w)
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn zero_response_rejected() {
        let err = QuadraticR2::from_rows(&[vec![1.0], vec![1.0]], vec![0.0, 0.0]);
        assert!(err.is_err());
    }
}
