//! Dense univariate polynomials over any [`Ring`], low degree first.

use std::fmt;

use super::matrix::Matrix;
use super::scalar::Ring;

#[derive(Clone, PartialEq)]
pub struct Poly<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<R: Ring> Poly<R> {
    /// Trailing exact zeros are dropped; an empty vector is the zero polynomial.
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize, like: &R) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(|| like.zero_like())
    }

    pub fn lead(&self) -> Option<&R> {
        self.coeffs.last()
    }

    /// `T - root`.
    pub fn linear(root: R) -> Self {
        let one = root.one_like();
        Poly::new(vec![-root, one])
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.from_i64_like(i as i64) * c.clone())
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.clone() + b.clone(),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::new(Vec::new());
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// `P(-T)`.
    pub fn reflect(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    pub fn product(polys: &[Self], one: &R) -> Self {
        polys.iter().fold(Poly::new(vec![one.clone()]), |acc, p| acc.mul(p))
    }

    /// Sylvester matrix of `self` (degree m) and `other` (degree n), size m+n.
    pub fn sylvester(&self, other: &Self) -> Matrix<R> {
        let m = self.degree().expect("nonzero polynomial");
        let n = other.degree().expect("nonzero polynomial");
        let zero = self.coeffs[0].zero_like();
        let size = m + n;
        let mut mat = Matrix::filled(size, size, zero);
        for row in 0..n {
            for k in 0..=m {
                mat.set(row, row + k, self.coeffs[m - k].clone());
            }
        }
        for row in 0..m {
            for k in 0..=n {
                mat.set(n + row, row + k, other.coeffs[n - k].clone());
            }
        }
        mat
    }

    /// `Res(self, other)` as the Sylvester determinant; zero if either
    /// polynomial is zero.
    pub fn resultant(&self, other: &Self) -> R {
        match (self.degree(), other.degree()) {
            (None, Some(_)) => other.coeffs[0].zero_like(),
            (Some(_), None) => self.coeffs[0].zero_like(),
            (None, None) => panic!("resultant of two zero polynomials"),
            (Some(0), Some(n)) => pow(&self.coeffs[0], n),
            (Some(m), Some(0)) => pow(&other.coeffs[0], m),
            _ => self.sylvester(other).det(),
        }
    }

    /// `Res(P, P')`; the constant 1 in degree one.
    pub fn discriminant(&self) -> R {
        if self.degree() == Some(1) {
            return self.coeffs[0].one_like();
        }
        self.resultant(&self.derivative())
    }
}

pub fn pow<R: Ring>(x: &R, k: usize) -> R {
    let mut acc = x.one_like();
    for _ in 0..k {
        acc = acc * x.clone();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn poly(c: &[i64]) -> Poly<BigRational> {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res((T-1)(T-2), T-3) = (1-3)(2-3) = 2
        let a = poly(&[2, -3, 1]);
        let b = poly(&[-3, 1]);
        assert_eq!(a.resultant(&b), q(2));
    }

    #[test]
    fn discriminant_of_quadratic() {
        // Res(T^2 + bT + c, 2T + b) = 4c - b^2
        let a = poly(&[5, 3, 1]);
        assert_eq!(a.discriminant(), q(4 * 5 - 9));
    }

    #[test]
    fn eval_and_derivative() {
        let a = poly(&[1, 0, 3]);
        assert_eq!(a.eval(&q(2)), q(13));
        assert_eq!(a.derivative(), poly(&[0, 6]));
        assert_eq!(a.reflect(), a);
    }
}
