//! Polynomial geometry of the characteristic map: the Kostant section,
//! spectral discriminants, the endoscopic product map and the local
//! intersection profile of two characteristic polynomials.

use crate::chardata::Datum;
use crate::error::{Result, UflError};
use crate::local::fqlinalg::{self, Subspace, Vector};
use crate::local::gf::fp_poly;
use crate::local::{Gf, GfCtx, Matrix, Poly, Ring, Series};
use crate::orbital::Partition;

/// Monic `T^n + a_1 T^{n-1} + ... + a_n` from `(a_1, ..., a_n)`.
pub fn poly_of_point<R: Ring>(a: &[R], one: &R) -> Poly<R> {
    let mut coeffs: Vec<R> = a.iter().rev().cloned().collect();
    coeffs.push(one.one_like());
    Poly::new(coeffs)
}

/// `(a_1, ..., a_n)` of a monic polynomial of degree `n`.
pub fn point_of_poly<R: Ring>(p: &Poly<R>) -> Vec<R> {
    let n = p.degree().expect("nonzero polynomial");
    (1..=n).map(|i| p.coeffs()[n - i].clone()).collect()
}

/// Does `tau(a_i) = (-1)^i a_i` hold for every coefficient?
pub fn has_tau_parity(a: &[Series]) -> bool {
    a.iter().enumerate().all(|(k, x)| {
        let t = x.tau();
        if (k + 1) % 2 == 0 {
            t.agrees_with(x)
        } else {
            t.agrees_with(&-x.clone())
        }
    })
}

/// The matrix with first row `-b_1, ..., -b_{n-1}, -2 b_n`, ones on the
/// subdiagonal and last column `-b_{n-r}` in rows `r >= 1`.
pub fn kostant_matrix<R: Ring>(b: &[R]) -> Matrix<R> {
    let n = b.len();
    assert!(n > 0);
    let zero = b[0].zero_like();
    let mut m = Matrix::filled(n, n, zero);
    for c in 0..n - 1 {
        m.set(0, c, -b[c].clone());
    }
    m.set(0, n - 1, -(b[n - 1].clone() + b[n - 1].clone()));
    for r in 1..n {
        m.set(r, r - 1, b[0].one_like());
        m.set(r, n - 1, -b[n - r - 1].clone());
    }
    m
}

/// Coefficient of `T^{n-i}` in the characteristic polynomial.
fn char_coeff<R: Ring>(m: &Matrix<R>, i: usize) -> R {
    let p = m.charpoly();
    let n = m.rows();
    p.coeff(n - i, m.get(0, 0))
}

/// The `b_i` with `charpoly(kostant_matrix(b)) = T^n + a_1 T^{n-1} + ...`,
/// solved one degree at a time: `a_i = 2 b_i + (terms in b_1..b_{i-1})`.
pub fn kostant_coeffs<R: Ring>(a: &[R]) -> Vec<R> {
    let n = a.len();
    let mut b: Vec<R> = a.iter().map(|x| x.zero_like()).collect();
    for i in 1..=n {
        let partial = char_coeff(&kostant_matrix(&b), i);
        b[i - 1] = (a[i - 1].clone() - partial).scale_inv_int(2);
    }
    b
}

pub fn kostant_section<R: Ring>(a: &[R]) -> Matrix<R> {
    kostant_matrix(&kostant_coeffs(a))
}

/// Coefficients of the product of the two monic polynomials.
pub fn endo_product<R: Ring>(a1: &[R], a2: &[R], one: &R) -> Vec<R> {
    point_of_poly(&poly_of_point(a1, one).mul(&poly_of_point(a2, one)))
}

/// `D(a) = (-1)^{n(n-1)/2} Res(P, P')`, and `1` for `n = 1`.
pub fn spectral_discriminant(a: &[Series], one: &Series) -> Series {
    let n = a.len();
    let d = poly_of_point(a, one).discriminant();
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

/// The spectral curve is reduced iff `D(a)` is nonzero.
pub fn is_reduced(a: &[Series], one: &Series) -> Result<bool> {
    let d = spectral_discriminant(a, one);
    nonzero(&d)
}

fn nonzero(x: &Series) -> Result<bool> {
    if x.is_exact_zero() {
        return Ok(false);
    }
    x.valuation()?;
    Ok(true)
}

/// Injectivity of `(dP_1, dP_2) -> P_1 dP_2 + P_2 dP_1`, i.e. coprimality.
pub fn tangent_injectivity(a1: &[Series], a2: &[Series], one: &Series) -> Result<bool> {
    let res = poly_of_point(a1, one).resultant(&poly_of_point(a2, one));
    nonzero(&res)
}

/// Distinct monic irreducible factors over `F_p` of a nonzero polynomial,
/// by trial division with every monic irreducible of increasing degree.
pub fn fp_irreducible_factors(f: &[u32], p: u32) -> Vec<Vec<u32>> {
    let mut rest = f.to_vec();
    fp_poly::trim(&mut rest);
    let mut out = Vec::new();
    let mut d = 1;
    while rest.len() > 1 {
        if 2 * d > rest.len() - 1 {
            // what is left is irreducible
            let lead = fp_poly::inv(*rest.last().unwrap(), p);
            let monic: Vec<u32> = rest.iter().map(|&c| (c as u64 * lead as u64 % p as u64) as u32).collect();
            out.push(monic);
            break;
        }
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g: Vec<u32> = (0..d).map(|i| ((code / (p as u64).pow(i as u32)) % p as u64) as u32).collect();
            g.push(1);
            if !fp_poly::is_irreducible(&g, p) {
                continue;
            }
            let mut hit = false;
            while rest.len() > d && fp_poly::rem(&rest, &g, p).is_empty() {
                rest = fp_div(&rest, &g, p);
                hit = true;
            }
            if hit {
                out.push(g);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

fn fp_div(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = fp_poly::inv(m[dm], p);
    let mut q = vec![0u32; r.len() - dm];
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        q[shift] = c;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c as u64 * mi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        fp_poly::trim(&mut r);
    }
    q
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfilePoint {
    /// The irreducible factor over `F_p` of `gcd(Q1 mod t, Q2 mod t)`.
    pub factor: Vec<u32>,
    pub degree: u32,
    pub multiplicity: u32,
    pub inert: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionProfile {
    pub points: Vec<ProfilePoint>,
    pub m: u32,
    pub r_total: u32,
}

impl IntersectionProfile {
    pub fn sign(&self) -> i32 {
        if self.m.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// `Q(S) = zeta^n P(S / zeta)` with `zeta = eps`; its coefficients lie in
/// `F_p[[t]]`, returned as polynomials in `t` (low first) truncated at `t^prec`.
pub fn rescaled_poly(datum: &Datum, j: &[usize], prec: usize) -> Result<Vec<Vec<u32>>> {
    let p = datum.poly_j(j);
    let n = p.degree().expect("nonzero");
    let eps = datum.field().eps();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let c = p.coeffs()[k].scale(eps.pow((n - k) as u64));
        let mut coeffs = vec![0u32; prec];
        for (e, x) in c.terms() {
            if e < 0 {
                return Err(UflError::InconsistentInvariants("characteristic polynomial is not integral".into()));
            }
            let v = x.prime_value().ok_or_else(|| {
                UflError::InconsistentInvariants("rescaled polynomial has coefficients outside F_p".into())
            })?;
            if (e as usize) < prec {
                coeffs[e as usize] = v;
            }
        }
        if c.prec() < prec as i64 {
            return Err(UflError::PrecisionExhausted("rescaled polynomial".into()));
        }
        out.push(coeffs);
    }
    Ok(out)
}

/// `F_p[t, u] / (t^R, Q_1(u), Q_2(u))` split along the closed points of the
/// intersection of `Q_1 = 0` and `Q_2 = 0`.
pub fn intersection_profile(datum: &Datum, part: &Partition) -> Result<IntersectionProfile> {
    let p = datum.p();
    let k = GfCtx::get(p, 1);
    let mut r = 0i64;
    for &i in &part.i1 {
        for &j in &part.i2 {
            r += datum.resultant_valuation(i, j)?;
        }
    }
    let big_r = r as usize + 1;
    let q1 = rescaled_poly(datum, &part.i1, big_r)?;
    let q2 = rescaled_poly(datum, &part.i2, big_r)?;
    let n1 = q1.len() - 1;
    let dim = big_r * n1;
    let idx = |tj: usize, uk: usize| tj * n1 + uk;
    let fp = |x: u32| k.from_int(x as i64);

    // multiplication by u and by t on F_p[t, u] / (t^R, Q_1)
    let mul_u = |v: &Vector| -> Vector {
        let mut out = vec![k.zero(); dim];
        for tj in 0..big_r {
            for uk in 0..n1 {
                let c = v[idx(tj, uk)];
                if c.is_zero() {
                    continue;
                }
                if uk + 1 < n1 {
                    out[idx(tj, uk + 1)] += c;
                } else {
                    // u^{n1} = -sum_l q1_l u^l
                    for (l, ql) in q1.iter().enumerate().take(n1) {
                        for (s, &qs) in ql.iter().enumerate() {
                            if qs != 0 && tj + s < big_r {
                                out[idx(tj + s, l)] -= c * fp(qs);
                            }
                        }
                    }
                }
            }
        }
        out
    };
    let mul_t = |v: &Vector| -> Vector {
        let mut out = vec![k.zero(); dim];
        for tj in 0..big_r - 1 {
            for uk in 0..n1 {
                out[idx(tj + 1, uk)] = v[idx(tj, uk)];
            }
        }
        out
    };
    let mul_q2 = |v: &Vector| -> Vector {
        let mut acc = vec![k.zero(); dim];
        let mut upow = v.clone();
        for coeff in &q2 {
            let mut term = upow.clone();
            let mut scaled = vec![k.zero(); dim];
            for &c in coeff {
                if c != 0 {
                    for (a, &b) in scaled.iter_mut().zip(&term) {
                        *a += fp(c) * b;
                    }
                }
                term = mul_t(&term);
            }
            for (a, b) in acc.iter_mut().zip(scaled) {
                *a += b;
            }
            upow = mul_u(&upow);
        }
        acc
    };
    let unit = |a: usize| -> Vector {
        let mut v = vec![k.zero(); dim];
        v[a] = k.one();
        v
    };
    let image: Vec<Vector> = (0..dim).map(|a| mul_q2(&unit(a))).collect();
    let ideal = Subspace::span(dim, &image);
    let free: Vec<usize> = (0..dim).filter(|c| !ideal.pivots().contains(c)).collect();
    let d = free.len();
    if d as i64 != r {
        return Err(UflError::InconsistentInvariants(format!(
            "intersection algebra has dimension {d} but r = {r}"
        )));
    }
    // matrix of u on the quotient, in the basis of non-pivot unit vectors
    let u_cols: Vec<Vector> = free
        .iter()
        .map(|&c| {
            let w = ideal.reduce(&mul_u(&unit(c)));
            free.iter().map(|&f| w[f]).collect()
        })
        .collect();
    let u_rows: Vec<Vector> = (0..d).map(|i| (0..d).map(|j| u_cols[j][i]).collect()).collect();

    let bar = |q: &[Vec<u32>]| -> Vec<u32> {
        let mut v: Vec<u32> = q.iter().map(|c| c[0]).collect();
        fp_poly::trim(&mut v);
        v
    };
    let g = fp_poly::gcd(&bar(&q1), &bar(&q2), p);
    let mut points = Vec::new();
    if g.len() > 1 && d > 0 {
        for phi in fp_irreducible_factors(&g, p) {
            let deg = phi.len() as u32 - 1;
            let mut m = mat_poly(&u_rows, &phi, k);
            let base = m.clone();
            for _ in 1..d {
                m = mat_mul(&m, &base, k);
            }
            let kernel = fqlinalg::kernel(&m, d, k).len() as u32;
            if kernel == 0 {
                continue;
            }
            if !kernel.is_multiple_of(deg) {
                return Err(UflError::InconsistentInvariants("component dimension not divisible by degree".into()));
            }
            points.push(ProfilePoint { factor: phi, degree: deg, multiplicity: kernel / deg, inert: deg % 2 == 1 });
        }
    }
    let r_total: u32 = points.iter().map(|z| z.degree * z.multiplicity).sum();
    if r_total as i64 != r {
        return Err(UflError::InconsistentInvariants(format!(
            "sum of r_z d_z is {r_total} but r = {r}"
        )));
    }
    let m = points.iter().filter(|z| z.inert).map(|z| z.multiplicity).sum();
    Ok(IntersectionProfile { points, m, r_total })
}

fn mat_mul(a: &[Vector], b: &[Vector], k: &'static GfCtx) -> Vec<Vector> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(k.zero(), |acc, l| acc + a[i][l] * b[l][j]))
                .collect()
        })
        .collect()
}

fn mat_poly(a: &[Vector], phi: &[u32], k: &'static GfCtx) -> Vec<Vector> {
    let n = a.len();
    let mut acc: Vec<Vector> = vec![vec![k.zero(); n]; n];
    for &c in phi.iter().rev() {
        acc = mat_mul(&acc, a, k);
        let cg: Gf = k.from_int(c as i64);
        for i in 0..n {
            acc[i][i] += cg;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chardata::{Coeff, FactorSpec};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn kostant_closed_forms() {
        let (a1, a2, a3) = (q(3, 1), q(-5, 2), q(7, 3));
        assert_eq!(kostant_coeffs(std::slice::from_ref(&a1)), vec![q(3, 2)]);
        let b = kostant_coeffs(&[a1.clone(), a2.clone(), a3.clone()]);
        assert_eq!(b[1], &a2 / q(2, 1) - &a1 * &a1 / q(8, 1));
        assert_eq!(b[2], &a3 / q(2, 1) - &a1 * &a2 / q(4, 1) + &a1 * &a1 * &a1 / q(16, 1));
        let m = kostant_section(&[a1.clone(), a2.clone(), a3.clone()]);
        assert_eq!(point_of_poly(&m.charpoly()), vec![a1, a2, a3]);
        let zero = kostant_coeffs(&[q(0, 1), q(0, 1)]);
        assert!(zero.iter().all(|x| *x == q(0, 1)));
    }

    #[test]
    fn discriminants() {
        let k = GfCtx::get(3, 2);
        let one = Series::one(k);
        let t = Series::t_pow(k, 1);
        // T^2 + t
        let d = spectral_discriminant(&[Series::zero(k), t.clone()], &one);
        assert_eq!(d, t.scale(k.from_int(-4)));
        assert_eq!(spectral_discriminant(std::slice::from_ref(&t), &one), one);
        // T (T - g t)
        let gt = t.scale(k.generator());
        let a = endo_product(&[Series::zero(k)], &[-gt.clone()], &one);
        assert_eq!(a, vec![-gt.clone(), Series::zero(k)]);
        assert_eq!(spectral_discriminant(&a, &one).valuation().unwrap(), 2);
        assert!(tangent_injectivity(&[Series::zero(k)], &[-gt], &one).unwrap());
        assert!(!tangent_injectivity(&[Series::zero(k)], &[Series::zero(k)], &one).unwrap());
    }

    #[test]
    fn factoring() {
        // (x + 1)(x^2 + 1) over F_3
        let f = fp_poly::mul(&[1, 1], &[1, 0, 1], 3);
        assert_eq!(fp_irreducible_factors(&f, 3), vec![vec![1, 0, 1], vec![1, 1]]);
        assert_eq!(fp_irreducible_factors(&[0, 0, 1], 5), vec![vec![0, 1]]);
    }

    fn two(p: u32, g2: i64) -> Datum {
        Datum::from_specs(
            p,
            &[
                FactorSpec { id: "1".into(), e: 1, f: 1, gamma: vec![] },
                FactorSpec { id: "2".into(), e: 1, f: 1, gamma: vec![(g2, 0, Coeff::Eps)] },
            ],
        )
        .unwrap()
    }

    #[test]
    fn profiles() {
        let part = Partition::new(vec![0], vec![1]).unwrap();
        let node = intersection_profile(&two(3, 1), &part).unwrap();
        assert_eq!((node.m, node.sign(), node.r_total), (1, -1, 1));
        assert_eq!(node.points.len(), 1);
        let tac = intersection_profile(&two(3, 2), &part).unwrap();
        assert_eq!((tac.m, tac.sign(), tac.r_total), (2, 1, 2));
        assert_eq!(tac.points[0].multiplicity, 2);
        let split = Datum::from_specs(
            3,
            &[
                FactorSpec { id: "1".into(), e: 1, f: 1, gamma: vec![(0, 0, Coeff::Eps)] },
                FactorSpec { id: "2".into(), e: 1, f: 1, gamma: vec![(1, 0, Coeff::Eps)] },
            ],
        )
        .unwrap();
        let s = intersection_profile(&split, &part).unwrap();
        assert_eq!((s.m, s.r_total, s.points.len()), (0, 0, 0));
    }
}
