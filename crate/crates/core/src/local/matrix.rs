//! Dense matrices over any [`Ring`], with division-free characteristic
//! polynomials (Berkowitz).

use std::fmt;

use super::poly::Poly;
use super::scalar::Ring;

#[derive(Clone, PartialEq)]
pub struct Matrix<R: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring + Eq> Eq for Matrix<R> {}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl<R: Ring> Matrix<R> {
    pub fn filled(rows: usize, cols: usize, value: R) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize, like: &R) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { like.one_like() } else { like.zero_like() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<R>]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, |c| c.len());
        Matrix::from_fn(nrows, ncols, |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<R> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<R>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let zero = self.data.first().or(other.data.first()).expect("nonempty").zero_like();
        Matrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = zero.clone();
            for k in 0..self.cols {
                acc = acc + self.get(r, k).clone() * other.get(k, c).clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = v[0].zero_like();
                for (k, x) in v.iter().enumerate() {
                    acc = acc + self.get(r, k).clone() * x.clone();
                }
                acc
            })
            .collect()
    }

    /// Characteristic polynomial `det(T - A)`, low degree first.
    pub fn charpoly(&self) -> Poly<R> {
        assert_eq!(self.rows, self.cols, "charpoly of a non-square matrix");
        let n = self.rows;
        assert!(n > 0);
        let a = |r: usize, c: usize| self.get(r, c).clone();
        let zero = a(0, 0).zero_like();
        let one = a(0, 0).one_like();
        // v holds coefficients high degree first
        let mut v = vec![one.clone(), -a(0, 0)];
        for r in 1..n {
            // leading (r+1)x(r+1) block: S = A[0..r][0..r], R = row r, C = column r
            let mut t = vec![one.clone(), -a(r, r)];
            let mut sc: Vec<R> = (0..r).map(|i| a(i, r)).collect();
            for _ in 0..r {
                let mut rsc = zero.clone();
                for (j, x) in sc.iter().enumerate() {
                    rsc = rsc + a(r, j) * x.clone();
                }
                t.push(-rsc);
                sc = (0..r)
                    .map(|i| {
                        let mut acc = zero.clone();
                        for (j, x) in sc.iter().enumerate() {
                            acc = acc + a(i, j) * x.clone();
                        }
                        acc
                    })
                    .collect();
            }
            let mut next = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc = zero.clone();
                for j in 0..=i.min(r) {
                    if i - j < t.len() {
                        acc = acc + t[i - j].clone() * v[j].clone();
                    }
                }
                next.push(acc);
            }
            v = next;
        }
        v.reverse();
        Poly::new(v)
    }

    pub fn det(&self) -> R {
        let n = self.rows;
        let c0 = self.charpoly().coeff(0, self.get(0, 0));
        if n.is_multiple_of(2) {
            c0
        } else {
            -c0
        }
    }
}
