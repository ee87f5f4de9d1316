use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use super::rat::{from_int, Int, Rat};
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type MatQ = Mat<Rat>;
pub type MatZ = Mat<Int>;

impl<T: Clone + Zero> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self
    where
        T: One,
    {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Mat { rows: rows.len(), cols, data: rows.concat() }
    }

    /// Matrix whose columns are the given vectors; `dim` fixes the row count for empty input.
    pub fn from_cols(cols: &[Vec<T>], dim: usize) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim, "column length");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Sub-matrix of the given row and column ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (bi, i) in rows.clone().enumerate() {
            for (bj, j) in cols.clone().enumerate() {
                m[(bi, bj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T> Mat<T>
where
    T: Clone + Zero + Add<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "mul_vec dimension");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, j| acc + &self[(i, j)] * &v[j])
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    let cur = std::mem::replace(&mut m[(i, j)], T::zero());
                    m[(i, j)] = cur + p;
                }
            }
        }
        m
    }
}

impl<T> Mul for &Mat<T>
where
    T: Clone + Zero + Add<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        self.matmul(rhs)
    }
}

impl<T: Clone + Zero + Sub<Output = T>> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl MatZ {
    pub fn to_q(&self) -> MatQ {
        self.map(from_int)
    }
}

/// Result of Gauss-Jordan elimination.
pub struct Rref {
    pub matrix: MatQ,
    pub pivots: Vec<usize>,
    pub det_sign_scale: Rat,
}

impl MatQ {
    /// Reduced row echelon form; `det_sign_scale` is the determinant when square and full rank.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det = Rat::one();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            if p != row {
                m.swap_rows(p, row);
                det = -det;
            }
            let piv = m[(row, col)].clone();
            det *= &piv;
            for j in 0..m.cols {
                m[(row, j)] = &m[(row, j)] / &piv;
            }
            for i in 0..m.rows {
                if i != row && !m[(i, col)].is_zero() {
                    let f = m[(i, col)].clone();
                    for j in col..m.cols {
                        let d = &f * &m[(row, j)];
                        m[(i, j)] -= d;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if pivots.len() < self.rows.min(self.cols) || self.rows != self.cols {
            det = Rat::zero();
        }
        Rref { matrix: m, pivots, det_sign_scale: det }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        if self.rows == 0 {
            return Rat::one();
        }
        self.rref().det_sign_scale
    }

    pub fn inverse(&self) -> Result<MatQ> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut aug = MatQ::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let r = aug.rref();
        if r.pivots.len() < n || r.pivots[n - 1] >= n {
            return Err(Error::RankDeficient);
        }
        Ok(r.matrix.block(0..n, n..2 * n))
    }

    /// Solve `A x = b`; returns `None` if inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = MatQ::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let r = aug.rref();
        if r.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (i, &p) in r.pivots.iter().enumerate() {
            x[p] = r.matrix[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let r = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !r.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (i, &p) in r.pivots.iter().enumerate() {
                    v[p] = -r.matrix[(i, f)].clone();
                }
                v
            })
            .collect()
    }
}

pub fn rank_of(vectors: &[Vec<Rat>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    MatQ::from_cols(vectors, dim).rank()
}

pub fn rank_of_z(vectors: &[Vec<Int>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    MatZ::from_cols(vectors, dim).to_q().rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::rat::{rat, ri};

    fn q(rows: &[&[i64]]) -> MatQ {
        MatQ::from_rows(&rows.iter().map(|r| r.iter().map(|&x| ri(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn det_inverse_solve() {
        let a = q(&[&[2, 1], &[1, 3]]);
        assert_eq!(a.det(), ri(5));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, MatQ::identity(2));
        assert_eq!(a.solve(&[ri(1), ri(0)]).unwrap(), vec![rat(3, 5), rat(-1, 5)]);
        assert!(q(&[&[1, 2], &[2, 4]]).inverse().is_err());
        assert_eq!(q(&[&[0, 1], &[1, 0]]).det(), ri(-1));
    }

    #[test]
    fn kernel_and_rank() {
        let a = q(&[&[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.nullspace();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
        assert!(q(&[&[1, 1], &[1, 1]]).solve(&[ri(1), ri(2)]).is_none());
    }
}
