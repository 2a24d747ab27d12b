use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense square matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("matrix rows must all have length equal to the row count".into()));
        }
        Ok(Self { dim, entries: rows.iter().flat_map(|r| r.iter().copied()).collect() })
    }

    pub fn from_row_major(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidParameter(format!("{} entries for a {dim}x{dim} matrix", entries.len())));
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum());
            }
        }
        out
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// Lower-triangular `L` with `L Lᵀ = self`.
    pub fn cholesky(&self) -> Result<SquareMatrix> {
        let n = self.dim;
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut pivot = self.get(j, j);
            for k in 0..j {
                pivot -= l.get(j, k) * l.get(j, k);
            }
            if !(pivot > 0.0) {
                return Err(Error::NotPositiveDefinite { row: j, pivot });
            }
            let ljj = pivot.sqrt();
            l.set(j, j, ljj);
            for i in (j + 1)..n {
                let mut v = self.get(i, j);
                for k in 0..j {
                    v -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, v / ljj);
            }
        }
        Ok(l)
    }
}

/// Inverse of a symmetric positive definite matrix through its Cholesky factor.
pub fn spd_inverse(m: &SquareMatrix) -> Result<SquareMatrix> {
    if !m.is_symmetric(1e-8 * m.entries.iter().fold(1.0, |a: f64, b| a.max(b.abs()))) {
        return Err(Error::InvalidParameter("matrix is not symmetric".into()));
    }
    let l = m.cholesky()?;
    let n = m.dim;
    // Invert L column by column, then form L⁻ᵀ L⁻¹.
    let mut linv = SquareMatrix::zeros(n);
    for col in 0..n {
        for i in col..n {
            let mut v = if i == col { 1.0 } else { 0.0 };
            for k in col..i {
                v -= l.get(i, k) * linv.get(k, col);
            }
            linv.set(i, col, v / l.get(i, i));
        }
    }
    let mut inv = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let v: f64 = (i..n).map(|k| linv.get(k, i) * linv.get(k, j)).sum();
            inv.set(i, j, v);
            inv.set(j, i, v);
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_inverse() {
        let i3 = SquareMatrix::identity(3);
        assert_eq!(spd_inverse(&i3).unwrap(), i3);
    }

    #[test]
    fn diagonal_inverse() {
        let inv = spd_inverse(&SquareMatrix::diagonal(&[4.0, 9.0])).unwrap();
        assert!(inv.max_abs_diff(&SquareMatrix::diagonal(&[0.25, 1.0 / 9.0])) < 1e-15);
    }

    #[test]
    fn two_by_two_adjugate() {
        let m = SquareMatrix::from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let expected = SquareMatrix::from_rows(&[&[2.0 / 3.0, -1.0 / 3.0], &[-1.0 / 3.0, 2.0 / 3.0]]).unwrap();
        assert!(spd_inverse(&m).unwrap().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn indefinite_is_rejected() {
        let m = SquareMatrix::from_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(matches!(spd_inverse(&m), Err(Error::NotPositiveDefinite { row: 1, .. })));
    }

    fn random_spd(dim: usize, raw: &[f64]) -> SquareMatrix {
        // A Aᵀ + dim I
        let a = SquareMatrix::from_row_major(dim, raw[..dim * dim].to_vec()).unwrap();
        let mut m = a.matmul(&a.transpose());
        for i in 0..dim {
            m.set(i, i, m.get(i, i) + dim as f64);
        }
        m
    }

    proptest! {
        #[test]
        fn inverse_is_inverse(dim in 1usize..=4, raw in proptest::collection::vec(-3.0f64..3.0, 16)) {
            let m = random_spd(dim, &raw);
            let inv = spd_inverse(&m).unwrap();
            prop_assert!(m.matmul(&inv).max_abs_diff(&SquareMatrix::identity(dim)) <= 1e-8);
        }

        #[test]
        fn double_inverse_roundtrips(dim in 1usize..=4, raw in proptest::collection::vec(-3.0f64..3.0, 16)) {
            let m = random_spd(dim, &raw);
            let back = spd_inverse(&spd_inverse(&m).unwrap()).unwrap();
            let scale = m.entries().iter().fold(0.0f64, |a, b| a.max(b.abs()));
            prop_assert!(back.max_abs_diff(&m) <= 1e-6 * scale);
        }
    }
}
