//! Dense matrices over an exact field, with the kernel/rank computations the
//! pencil analysis needs. Row reduction over a field is exact; no pivoting
//! heuristics are required.

use crate::scalar::{CScalar, Field, Scalar};
use std::fmt;
use std::ops::{Index, IndexMut};

#[derive(Clone, PartialEq)]
pub struct Mat<K> {
    rows: usize,
    cols: usize,
    a: Vec<K>,
}

impl<K: Field> Mat<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            a: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> K>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Mat<K> {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, rhs: &Mat<K>) -> Mat<K> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].add_ref(&rhs[(i, j)])
        })
    }

    pub fn sub(&self, rhs: &Mat<K>) -> Mat<K> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].sub_ref(&rhs[(i, j)])
        })
    }

    pub fn neg(&self) -> Mat<K> {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].neg_ref())
    }

    pub fn scale(&self, c: &K) -> Mat<K> {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mul_ref(c))
    }

    pub fn mul(&self, rhs: &Mat<K>) -> Mat<K> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out: Mat<K> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lik = &self[(i, k)];
                if lik.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)].add_ref(&lik.mul_ref(&rhs[(k, j)]));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = K::zero();
                for j in 0..self.cols {
                    acc = acc.add_ref(&self[(i, j)].mul_ref(&v[j]));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.rows)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn is_skew(&self) -> bool {
        self.rows == self.cols && self.transpose() == self.neg()
    }

    pub fn trace(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let mut t = K::zero();
        for i in 0..self.rows {
            t = t.add_ref(&self[(i, i)]);
        }
        t
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat<K> {
        Mat::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat<K>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    /// Row echelon form in place; returns pivot column indices.
    fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !self[(i, col)].is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                let tmp = self[(row, j)].clone();
                self[(row, j)] = self[(p, j)].clone();
                self[(p, j)] = tmp;
            }
            let inv = self[(row, col)].inv();
            for j in col..self.cols {
                self[(row, j)] = self[(row, j)].mul_ref(&inv);
            }
            for i in 0..self.rows {
                if i == row || self[(i, col)].is_zero() {
                    continue;
                }
                let factor = self[(i, col)].clone();
                for j in col..self.cols {
                    let delta = factor.mul_ref(&self[(row, j)]);
                    self[(i, j)] = self[(i, j)].sub_ref(&delta);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of the right kernel {v : M v = 0}, exact.
    pub fn kernel_basis(&self) -> Vec<Vec<K>> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![K::zero(); self.cols];
                v[fc] = K::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m[(r, fc)].neg_ref();
                }
                v
            })
            .collect()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

impl<K> Index<(usize, usize)> for Mat<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        &self.a[i * self.cols + j]
    }
}

impl<K> IndexMut<(usize, usize)> for Mat<K> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        let c = self.cols;
        &mut self.a[i * c + j]
    }
}

impl<K: Field> fmt::Debug for Mat<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}, ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mat<Scalar> {
    pub fn complexify(&self) -> Mat<CScalar> {
        Mat::from_fn(self.rows, self.cols, |i, j| {
            CScalar::real(self[(i, j)].clone())
        })
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64())
    }
}

impl Mat<CScalar> {
    /// Real 2n×2n embedding [[Re, -Im], [Im, Re]]; every complex singular
    /// value appears twice among its singular values.
    pub fn to_f64_real_embedding(&self) -> nalgebra::DMatrix<f64> {
        let (r, c) = (self.rows, self.cols);
        let mut m = nalgebra::DMatrix::zeros(2 * r, 2 * c);
        for i in 0..r {
            for j in 0..c {
                let (re, im) = self[(i, j)].to_f64_pair();
                m[(i, j)] = re;
                m[(i, j + c)] = -im;
                m[(i + r, j)] = im;
                m[(i + r, j + c)] = re;
            }
        }
        m
    }
}

/// Gram matrix ⟨v_i, v_j⟩ of a list of vectors.
pub fn gram(vectors: &[Vec<Scalar>]) -> Mat<Scalar> {
    Mat::from_fn(vectors.len(), vectors.len(), |i, j| {
        dot(&vectors[i], &vectors[j])
    })
}

pub fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    assert_eq!(u.len(), v.len());
    let mut acc = Scalar::default();
    for (a, b) in u.iter().zip(v) {
        acc = &acc + &(a * b);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    #[test]
    fn product_and_transpose() {
        let a = Mat::from_rows(vec![vec![s(1), s(2)], vec![s(3), s(4)]]);
        let b = Mat::from_rows(vec![vec![s(0), s(1)], vec![s(1), s(0)]]);
        let ab = a.mul(&b);
        assert_eq!(ab, Mat::from_rows(vec![vec![s(2), s(1)], vec![s(4), s(3)]]));
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn kernel_of_rank_one() {
        // rows (1,1,0) and (2,2,0): kernel spanned by (1,-1,0) and (0,0,1)
        let m = Mat::from_rows(vec![vec![s(1), s(1), s(0)], vec![s(2), s(2), s(0)]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(m.rank(), 1);
        assert_eq!(m.nullity(), 2);
    }

    #[test]
    fn kernel_over_complex_field() {
        use crate::scalar::CScalar;
        // (1, i; i, -1) has rank 1 over C
        let one = CScalar::real(s(1));
        let i = CScalar::i();
        let m = Mat::from_rows(vec![
            vec![one.clone(), i.clone()],
            vec![i.clone(), one.neg_ref()],
        ]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn real_embedding_shape() {
        let m = Mat::from_rows(vec![vec![CScalar::i()]]);
        let e = m.to_f64_real_embedding();
        assert_eq!(e[(0, 0)], 0.0);
        assert_eq!(e[(0, 1)], -1.0);
        assert_eq!(e[(1, 0)], 1.0);
        assert_eq!(e[(1, 1)], 0.0);
    }

    #[test]
    fn identity_checks() {
        let id: Mat<Scalar> = Mat::identity(3);
        assert!(id.is_identity());
        assert!(id.is_symmetric());
        assert!(!id.is_skew());
        assert_eq!(id.trace(), s(3));
    }
}
