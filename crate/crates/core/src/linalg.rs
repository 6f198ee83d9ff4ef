//! Dense exact linear algebra over the ambient number field.
//!
//! Everything here is plain Gaussian elimination with exact field division;
//! reduced row echelon form doubles as the canonical form for subspace bases.

use std::sync::Arc;

use crate::field::{NumberField, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
    field: Arc<NumberField>,
}

impl Matrix {
    pub fn zero(field: &Arc<NumberField>, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
            field: Arc::clone(field),
        }
    }

    pub fn identity(field: &Arc<NumberField>, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn from_rows(field: &Arc<NumberField>, rows: Vec<Vec<Scalar>>, cols: usize) -> Matrix {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols);
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols,
            data,
            field: Arc::clone(field),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j).clone();
                    *out.at_mut(i, j) = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self.at(i, k).is_zero() {
                        acc = acc + self.at(i, k).clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
            field: Arc::clone(&self.field),
        }
    }

    /// Reduced row echelon form; returns the transformed matrix and the
    /// pivot column of each nonzero row.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    let a = m.at(p, c).clone();
                    let b = m.at(row, c).clone();
                    *m.at_mut(p, c) = b;
                    *m.at_mut(row, c) = a;
                }
            }
            let inv = m.at(row, col).inv();
            for c in col..m.cols {
                let v = m.at(row, c).clone() * inv.clone();
                *m.at_mut(row, c) = v;
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = m.at(r, c).clone() - factor.clone() * m.at(row, c).clone();
                        *m.at_mut(r, c) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {x : Mx = 0}, via the standard free-column
    /// construction on the reduced row echelon form.
    pub fn right_kernel(&self) -> Vec<Vec<Scalar>> {
        let (rr, pivots) = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rr.at(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.at(r, c);
                if r == c {
                    if !e.is_one() {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qmat(rows: Vec<Vec<i64>>) -> Matrix {
        let f = NumberField::rational();
        let cols = rows[0].len();
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| f.integer(x)).collect())
            .collect();
        Matrix::from_rows(&f, rows, cols)
    }

    #[test]
    fn rref_and_rank() {
        let m = qmat(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        let (rr, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.rank(), 2);
        assert!(rr.at(0, 0).is_one());
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = qmat(vec![vec![1, 2, 3], vec![0, 1, 1]]);
        let ker = m.right_kernel();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn mul_identity() {
        let m = qmat(vec![vec![1, 2], vec![3, 4]]);
        let id = Matrix::identity(m.field(), 2);
        assert_eq!(m.mul(&id), m);
        assert!(id.is_identity());
    }
}
