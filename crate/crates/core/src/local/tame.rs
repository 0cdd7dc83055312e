//! Tame extensions `E' = F_{p^{2f}}((pi))` of `F' = F_{p^2}((t))` with
//! `pi^e = t`, and their elements.
//!
//! All coefficients live in one common field `K = F_{p^{2F}}` with `f | F`;
//! an extension knows the subfield `F_{p^{2f}}` of `K` through a generator
//! `omega`. The `F'`-basis used for coordinates is `pi^j omega^l`,
//! `0 <= j < e`, `0 <= l < f`, flattened as `j * f + l`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::fqlinalg;
use super::gf::{Gf, GfCtx};
use super::matrix::Matrix;
use super::poly::Poly;
use super::scalar::Ring;
use super::series::{Series, EXACT};
use crate::error::Result;

#[derive(Debug)]
pub struct TameExt {
    e: u32,
    f: u32,
    ctx: &'static GfCtx,
    omega_pows: Vec<Gf>,
    dual: Vec<Gf>,
}

impl TameExt {
    /// Extension with ramification `e` and residue degree `f` (odd, dividing
    /// half the degree of `ctx`).
    pub fn new(ctx: &'static GfCtx, e: u32, f: u32) -> Arc<TameExt> {
        let big = ctx.degree();
        assert!(big.is_multiple_of(2 * f), "residue field does not embed");
        let sub_size = (ctx.characteristic() as u64).pow(2 * f);
        let omega = ctx.primitive().pow((ctx.size() as u64 - 1) / (sub_size - 1));
        let omega_pows: Vec<Gf> = (0..2 * f as u64).map(|k| omega.pow(k)).collect();
        let tr = |x: Gf| -> Gf { (0..f).fold(ctx.zero(), |acc, k| acc + x.frob(2 * k)) };
        let gram: Vec<Vec<Gf>> = (0..f as usize)
            .map(|l| (0..f as usize).map(|m| tr(omega_pows[l + m])).collect())
            .collect();
        let ginv = fqlinalg::inverse(&gram, ctx).expect("trace form is nondegenerate");
        let dual = (0..f as usize)
            .map(|l| (0..f as usize).fold(ctx.zero(), |acc, m| acc + ginv[l][m] * omega_pows[m]))
            .collect();
        Arc::new(TameExt { e, f, ctx, omega_pows, dual })
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn degree(&self) -> usize {
        (self.e * self.f) as usize
    }

    pub fn ctx(&self) -> &'static GfCtx {
        self.ctx
    }

    pub fn omega_pow(&self, l: usize) -> Gf {
        self.omega_pows[l]
    }

    /// Trace from the residue field `F_{p^{2f}}` to `F_{p^2}`.
    pub fn residue_trace(&self, x: Gf) -> Gf {
        (0..self.f).fold(self.ctx.zero(), |acc, k| acc + x.frob(2 * k))
    }

    /// Coordinates of a residue element in the basis `omega^l` over `F_{p^2}`.
    pub fn residue_coords(&self, x: Gf) -> Vec<Gf> {
        if self.f == 1 {
            return vec![x];
        }
        self.dual.iter().map(|&d| self.residue_trace(x * d)).collect()
    }

    pub fn in_residue_field(&self, x: Gf) -> bool {
        x.frob(2 * self.f) == x
    }
}

#[derive(Clone)]
pub struct Tame {
    ext: Arc<TameExt>,
    s: Series,
}

impl Tame {
    /// Element `sum s_k pi^k` from a series in `pi`.
    pub fn from_pi_series(ext: &Arc<TameExt>, s: Series) -> Tame {
        Tame { ext: ext.clone(), s }
    }

    /// Image of an element of `F'` (a series in `t`).
    pub fn from_base(ext: &Arc<TameExt>, s: &Series) -> Tame {
        Tame { ext: ext.clone(), s: s.inflate(ext.e) }
    }

    pub fn zero(ext: &Arc<TameExt>) -> Tame {
        Tame { ext: ext.clone(), s: Series::zero(ext.ctx) }
    }

    pub fn one(ext: &Arc<TameExt>) -> Tame {
        Tame { ext: ext.clone(), s: Series::one(ext.ctx) }
    }

    pub fn constant(ext: &Arc<TameExt>, c: Gf) -> Tame {
        Tame { ext: ext.clone(), s: Series::constant(c) }
    }

    /// `c * pi^k`.
    pub fn monomial(ext: &Arc<TameExt>, c: Gf, k: i64) -> Tame {
        Tame { ext: ext.clone(), s: Series::monomial(c, k) }
    }

    /// `pi^j omega^l`.
    pub fn basis_element(ext: &Arc<TameExt>, j: usize, l: usize) -> Tame {
        Tame::monomial(ext, ext.omega_pows[l], j as i64)
    }

    pub fn ext(&self) -> &Arc<TameExt> {
        &self.ext
    }

    pub fn pi_series(&self) -> &Series {
        &self.s
    }

    /// Normalized valuation, `v(pi) = 1`; `EXACT` for the exact zero.
    pub fn val(&self) -> Result<i64> {
        self.s.valuation()
    }

    pub fn prec(&self) -> i64 {
        self.s.prec()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.s.is_exact_zero()
    }

    pub fn tau(&self) -> Tame {
        Tame { ext: self.ext.clone(), s: self.s.tau() }
    }

    pub fn truncate(&self, prec: i64) -> Tame {
        Tame { ext: self.ext.clone(), s: self.s.truncate(prec) }
    }

    pub fn scale(&self, c: Gf) -> Tame {
        Tame { ext: self.ext.clone(), s: self.s.scale(c) }
    }

    /// Multiply by `pi^k`.
    pub fn shift(&self, k: i64) -> Tame {
        Tame { ext: self.ext.clone(), s: self.s.shift(k) }
    }

    /// Inverse; `cap` bounds the precision in `pi`.
    pub fn inv(&self, cap: i64) -> Result<Tame> {
        Ok(Tame { ext: self.ext.clone(), s: self.s.inv(cap)? })
    }

    /// `t^(prec of t-component)`: precision in `t` of component `j`.
    fn component_prec(&self, j: u32) -> i64 {
        let n = self.s.prec();
        if n >= EXACT {
            EXACT
        } else {
            let e = self.ext.e as i64;
            (n - j as i64 + e - 1).div_euclid(e)
        }
    }

    /// The `e` series `c_j(t)` with `x = sum_j c_j(t) pi^j`.
    pub fn components(&self) -> Vec<Series> {
        let e = self.ext.e as i64;
        (0..self.ext.e)
            .map(|j| {
                let terms: Vec<(i64, Gf)> = self
                    .s
                    .terms()
                    .filter(|&(k, _)| (k - j as i64).rem_euclid(e) == 0)
                    .map(|(k, c)| ((k - j as i64).div_euclid(e), c))
                    .collect();
                Series::from_terms(self.ext.ctx, &terms, self.component_prec(j))
            })
            .collect()
    }

    /// Coordinates over `F'` in the basis `pi^j omega^l`.
    pub fn coords(&self) -> Vec<Series> {
        let ext = &self.ext;
        let e = ext.e as i64;
        let f = ext.f as usize;
        let mut out = Vec::with_capacity(ext.degree());
        for j in 0..ext.e {
            let mut per_l: Vec<Vec<(i64, Gf)>> = vec![Vec::new(); f];
            for (k, c) in self.s.terms().filter(|&(k, _)| (k - j as i64).rem_euclid(e) == 0) {
                let kt = (k - j as i64).div_euclid(e);
                for (l, a) in ext.residue_coords(c).into_iter().enumerate() {
                    if !a.is_zero() {
                        per_l[l].push((kt, a));
                    }
                }
            }
            let prec = self.component_prec(j);
            for terms in per_l {
                out.push(Series::from_terms(ext.ctx, &terms, prec));
            }
        }
        out
    }

    pub fn from_coords(ext: &Arc<TameExt>, coords: &[Series]) -> Tame {
        assert_eq!(coords.len(), ext.degree());
        let f = ext.f as usize;
        let mut acc = Series::zero(ext.ctx);
        for (idx, c) in coords.iter().enumerate() {
            let (j, l) = (idx / f, idx % f);
            let term = c.inflate(ext.e).scale(ext.omega_pows[l]).shift(j as i64);
            acc = &acc + &term;
        }
        Tame { ext: ext.clone(), s: acc }
    }

    /// `Tr_{E'/F'}`.
    pub fn trace(&self) -> Series {
        let e = self.ext.e as i64;
        let terms: Vec<(i64, Gf)> = self
            .s
            .terms()
            .filter(|&(k, _)| k.rem_euclid(e) == 0)
            .map(|(k, c)| (k.div_euclid(e), self.ext.residue_trace(c) * self.ext.ctx.from_int(e)))
            .collect();
        Series::from_terms(self.ext.ctx, &terms, self.component_prec(0))
    }

    /// Matrix over `F'` of multiplication by `self` in the coordinate basis.
    pub fn mult_matrix(&self) -> Matrix<Series> {
        let ext = &self.ext;
        let f = ext.f as usize;
        let cols: Vec<Vec<Series>> = (0..ext.degree())
            .map(|idx| (self * &Tame::basis_element(ext, idx / f, idx % f)).coords())
            .collect();
        Matrix::from_columns(&cols)
    }

    /// Characteristic polynomial over `F'`.
    pub fn char_poly(&self) -> Poly<Series> {
        self.mult_matrix().charpoly()
    }

    /// Evaluate a polynomial over `F'` at `self`.
    pub fn eval_base_poly(&self, p: &Poly<Series>) -> Tame {
        let mut acc = Tame::zero(&self.ext);
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * self) + &Tame::from_base(&self.ext, c);
        }
        acc
    }

    pub fn agrees_with(&self, other: &Tame) -> bool {
        self.s.agrees_with(&other.s)
    }

    pub fn pow(&self, k: u32) -> Tame {
        Tame { ext: self.ext.clone(), s: self.s.pow(k) }
    }
}

impl PartialEq for Tame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ext, &other.ext) && self.s == other.s
    }
}

impl fmt::Debug for Tame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = format!("{}", self.s).replace('t', "pi");
        write!(f, "{text}")
    }
}

impl Add for &Tame {
    type Output = Tame;
    fn add(self, rhs: &Tame) -> Tame {
        Tame { ext: self.ext.clone(), s: &self.s + &rhs.s }
    }
}

impl Sub for &Tame {
    type Output = Tame;
    fn sub(self, rhs: &Tame) -> Tame {
        Tame { ext: self.ext.clone(), s: &self.s - &rhs.s }
    }
}

impl Mul for &Tame {
    type Output = Tame;
    fn mul(self, rhs: &Tame) -> Tame {
        Tame { ext: self.ext.clone(), s: &self.s * &rhs.s }
    }
}

impl Neg for &Tame {
    type Output = Tame;
    fn neg(self) -> Tame {
        Tame { ext: self.ext.clone(), s: -&self.s }
    }
}

impl Add for Tame {
    type Output = Tame;
    fn add(self, rhs: Tame) -> Tame {
        &self + &rhs
    }
}

impl Sub for Tame {
    type Output = Tame;
    fn sub(self, rhs: Tame) -> Tame {
        &self - &rhs
    }
}

impl Mul for Tame {
    type Output = Tame;
    fn mul(self, rhs: Tame) -> Tame {
        &self * &rhs
    }
}

impl Neg for Tame {
    type Output = Tame;
    fn neg(self) -> Tame {
        -&self
    }
}

impl Ring for Tame {
    fn zero_like(&self) -> Self {
        Tame::zero(&self.ext)
    }
    fn one_like(&self) -> Self {
        Tame::one(&self.ext)
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        Tame::constant(&self.ext, self.ext.ctx.from_int(n))
    }
    fn scale_inv_int(&self, n: i64) -> Self {
        self.scale(self.ext.ctx.from_int(n).inv().expect("integer not invertible"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> &'static GfCtx {
        GfCtx::get(3, 2)
    }

    #[test]
    fn valuation_of_pi() {
        let ext = TameExt::new(f9(), 2, 1);
        let pi = Tame::monomial(&ext, f9().one(), 1);
        assert_eq!(pi.val().unwrap(), 1);
        assert_eq!(pi.tau(), pi);
    }

    #[test]
    fn traces_in_ramified_quadratic() {
        let k = f9();
        let ext = TameExt::new(k, 2, 1);
        let pi = Tame::monomial(&ext, k.one(), 1);
        assert!(pi.trace().is_exact_zero());
        let pi2 = &pi * &pi;
        assert_eq!(pi2.trace(), Series::monomial(k.from_int(2), 1));
        let triv = TameExt::new(k, 1, 1);
        let c = Series::monomial(k.generator(), 3);
        assert_eq!(Tame::from_base(&triv, &c).trace(), c);
    }

    #[test]
    fn char_poly_of_g_pi() {
        let k = f9();
        let ext = TameExt::new(k, 2, 1);
        let gamma = Tame::monomial(&ext, k.generator(), 1);
        let p = gamma.char_poly();
        assert_eq!(p.coeffs(), &[Series::t_pow(k, 1), Series::zero(k), Series::one(k)]);
        assert!(gamma.eval_base_poly(&p).is_exact_zero());
    }

    #[test]
    fn coordinates_round_trip_with_residue_degree_three() {
        let k = GfCtx::get(3, 6);
        let ext = TameExt::new(k, 1, 3);
        for code in [5u32, 17, 100, 300] {
            let x = Tame::constant(&ext, k.from_code(code));
            if !ext.in_residue_field(k.from_code(code)) {
                continue;
            }
            let back = Tame::from_coords(&ext, &x.coords());
            assert_eq!(back, x);
        }
        let w = Tame::basis_element(&ext, 0, 1);
        let cp = w.char_poly();
        assert_eq!(cp.degree(), Some(3));
        assert!(w.eval_base_poly(&cp).is_exact_zero());
    }
}
