use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Invertible n×n map with a cached inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    matrix: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

const INVERSE_CHECK: f64 = 1e-10;

impl LinearMap {
    /// Accepts the matrix when `A · A⁻¹` is the identity within 1e-10 entrywise.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() < 2 {
            return Err(Error::Dimension(format!(
                "linear map must be square with n >= 2, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::Singular("matrix has non-finite entries".to_string()));
        }
        let inverse =
            matrix.clone().try_inverse().ok_or_else(|| Error::Singular("matrix is not invertible".to_string()))?;
        let n = matrix.nrows();
        let residual = &matrix * &inverse - DMatrix::<f64>::identity(n, n);
        if residual.iter().any(|x| !(x.abs() <= INVERSE_CHECK)) {
            return Err(Error::Singular(format!("inverse check failed, max residual {:e}", residual.amax())));
        }
        Ok(Self { matrix, inverse })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rows must form a square matrix".to_string()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        let id = DMatrix::identity(n, n);
        Self { matrix: id.clone(), inverse: id }
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries)))
    }

    pub fn scaling(n: usize, r: f64) -> Result<Self> {
        Self::diagonal(&vec![r; n])
    }

    /// Planar rotation by `angle`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let m = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        Self { inverse: m.transpose(), matrix: m }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<Self> {
        Self::new(&self.matrix * &other.matrix)
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn determinant(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.matrix, x)
    }

    pub fn apply_inverse(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.inverse, x)
    }

    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dimension();
        (0..n).map(|j| (0..n).map(|i| self.matrix[(i, j)] * x[i]).sum()).collect()
    }

    /// `(σ_min, σ_max)` of the matrix.
    pub fn singular_value_range(&self) -> (f64, f64) {
        let sv = self.matrix.clone().singular_values();
        let max = sv.iter().cloned().fold(0.0, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        (min, max)
    }
}

fn mat_vec(m: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    let n = m.nrows();
    (0..n).map(|i| (0..n).map(|j| m[(i, j)] * x[j]).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_singular() {
        let err = LinearMap::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap_err();
        assert!(matches!(err, Error::Singular(_)));
        assert!(matches!(LinearMap::from_rows(&[vec![1.0, 0.0]]), Err(Error::Dimension(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let a = LinearMap::from_rows(&[vec![2.0, 1.0], vec![0.5, 3.0]]).unwrap();
        let x = [0.3, -1.2];
        let y = a.apply_inverse(&a.apply(&x));
        assert!((y[0] - x[0]).abs() < 1e-15 && (y[1] - x[1]).abs() < 1e-15);
        assert!((a.determinant() - 5.5).abs() < 1e-14);
    }

    #[test]
    fn singular_values_of_diagonal() {
        let a = LinearMap::diagonal(&[3.0, -0.5, 2.0]).unwrap();
        let (lo, hi) = a.singular_value_range();
        assert!((lo - 0.5).abs() < 1e-14 && (hi - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_is_orthogonal() {
        let r = LinearMap::rotation(0.7);
        assert!((r.determinant() - 1.0).abs() < 1e-15);
        let (lo, hi) = r.singular_value_range();
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 1.0).abs() < 1e-14);
    }
}
