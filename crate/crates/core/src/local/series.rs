//! Truncated Laurent series over a finite field with explicit precision.
//!
//! A series stores the coefficients below its precision `prec`; every
//! exponent `>= prec` is unknown. `prec == EXACT` means the stored terms are
//! the whole series. The zero series at finite precision is a different value
//! from the exact zero: its valuation is undetermined.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gf::{Gf, GfCtx};
use crate::error::{Result, UflError};

/// Precision of an exactly known series. Arithmetic saturates at this value.
pub const EXACT: i64 = i64::MAX / 4;

#[inline]
fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        a.saturating_add(b).clamp(-EXACT, EXACT)
    }
}

#[derive(Clone)]
pub struct Series {
    ctx: &'static GfCtx,
    start: i64,
    coeffs: Vec<Gf>,
    prec: i64,
}

impl Series {
    fn normalized(ctx: &'static GfCtx, start: i64, mut coeffs: Vec<Gf>, prec: i64) -> Series {
        let keep = if prec >= EXACT { coeffs.len() as i64 } else { (prec - start).max(0) };
        coeffs.truncate(keep.min(coeffs.len() as i64) as usize);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        let coeffs = coeffs.split_off(lead);
        let start = if coeffs.is_empty() { 0 } else { start + lead as i64 };
        Series { ctx, start, coeffs, prec: prec.min(EXACT) }
    }

    pub fn zero(ctx: &'static GfCtx) -> Series {
        Series { ctx, start: 0, coeffs: Vec::new(), prec: EXACT }
    }

    /// Zero known only modulo `t^prec`.
    pub fn zero_at(ctx: &'static GfCtx, prec: i64) -> Series {
        Series { ctx, start: 0, coeffs: Vec::new(), prec }
    }

    pub fn one(ctx: &'static GfCtx) -> Series {
        Series::constant(ctx.one())
    }

    pub fn constant(c: Gf) -> Series {
        Series::monomial(c, 0)
    }

    pub fn monomial(c: Gf, k: i64) -> Series {
        Series::normalized(c.ctx(), k, vec![c], EXACT)
    }

    /// `t^k`.
    pub fn t_pow(ctx: &'static GfCtx, k: i64) -> Series {
        Series::monomial(ctx.one(), k)
    }

    /// Series with the given coefficients starting at exponent `start`.
    pub fn from_coeffs(ctx: &'static GfCtx, start: i64, coeffs: Vec<Gf>, prec: i64) -> Series {
        Series::normalized(ctx, start, coeffs, prec)
    }

    /// Series from `(exponent, coefficient)` terms; repeated exponents add up.
    pub fn from_terms(ctx: &'static GfCtx, terms: &[(i64, Gf)], prec: i64) -> Series {
        let mut acc = Series::zero_at(ctx, prec);
        for &(k, c) in terms {
            acc = &acc + &Series::monomial(c, k);
        }
        acc
    }

    pub fn ctx(&self) -> &'static GfCtx {
        self.ctx
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.is_exact()
    }

    /// Whether no nonzero coefficient is known.
    pub fn is_zero_at_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest known-nonzero exponent, or the precision when none is known.
    pub fn low(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            self.start
        }
    }

    /// Exponent one past the last stored nonzero coefficient.
    pub fn high(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// t-adic valuation; `EXACT` for the exact zero.
    pub fn valuation(&self) -> Result<i64> {
        if !self.coeffs.is_empty() {
            Ok(self.start)
        } else if self.is_exact() {
            Ok(EXACT)
        } else {
            Err(UflError::IndeterminateValuation { precision: self.prec })
        }
    }

    pub fn coeff(&self, k: i64) -> Gf {
        if k < self.start || k >= self.high() {
            self.ctx.zero()
        } else {
            self.coeffs[(k - self.start) as usize]
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Gf)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.start + i as i64, c))
    }

    pub fn lead_coeff(&self) -> Option<Gf> {
        self.coeffs.first().copied()
    }

    /// Forget everything at exponents `>= prec`.
    pub fn truncate(&self, prec: i64) -> Series {
        let p = prec.min(self.prec);
        Series::normalized(self.ctx, self.start, self.coeffs.clone(), p)
    }

    /// Declare the stored terms to be the exact series.
    pub fn into_exact(self) -> Series {
        Series { prec: EXACT, ..self }
    }

    pub fn with_prec(&self, prec: i64) -> Series {
        Series::normalized(self.ctx, self.start, self.coeffs.clone(), prec)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Series {
        Series {
            ctx: self.ctx,
            start: if self.coeffs.is_empty() { 0 } else { self.start + k },
            coeffs: self.coeffs.clone(),
            prec: sat_add(self.prec, k),
        }
    }

    pub fn scale(&self, c: Gf) -> Series {
        if c.is_zero() {
            return Series::zero(self.ctx);
        }
        Series {
            ctx: self.ctx,
            start: self.start,
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
            prec: self.prec,
        }
    }

    /// Apply a field map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(Gf) -> Gf) -> Series {
        Series::normalized(self.ctx, self.start, self.coeffs.iter().map(|&c| f(c)).collect(), self.prec)
    }

    /// Coefficientwise `x -> x^(p^(k/2))` of the coefficient field.
    pub fn tau(&self) -> Series {
        self.map_coeffs(|c| c.tau())
    }

    /// Substitute `t -> t^e`.
    pub fn inflate(&self, e: u32) -> Series {
        let e64 = e as i64;
        if self.coeffs.is_empty() {
            return Series { prec: if self.is_exact() { EXACT } else { self.prec * e64 }, ..self.clone() };
        }
        let mut coeffs = vec![self.ctx.zero(); (self.coeffs.len() - 1) * e as usize + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * e as usize] = c;
        }
        let prec = if self.is_exact() { EXACT } else { self.prec * e64 };
        Series { ctx: self.ctx, start: self.start * e64, coeffs, prec }
    }

    /// Coefficient of `t^-1`.
    pub fn residue(&self) -> Result<Gf> {
        if self.prec <= -1 {
            return Err(UflError::PrecisionExhausted("residue beyond precision".into()));
        }
        Ok(self.coeff(-1))
    }

    /// Part with exponents `>= 0`.
    pub fn integral_part(&self) -> Series {
        if self.start >= 0 {
            return self.clone();
        }
        let skip = (-self.start) as usize;
        let coeffs = if skip >= self.coeffs.len() { Vec::new() } else { self.coeffs[skip..].to_vec() };
        Series::normalized(self.ctx, 0, coeffs, self.prec)
    }

    /// Part with exponents `< 0`, exact.
    pub fn polar_part(&self) -> Series {
        if self.start >= 0 {
            return Series::zero(self.ctx);
        }
        let take = ((-self.start) as usize).min(self.coeffs.len());
        Series::normalized(self.ctx, self.start, self.coeffs[..take].to_vec(), EXACT)
    }

    /// Terms with exponent in `[lo, hi)`, as an exact series.
    pub fn window(&self, lo: i64, hi: i64) -> Series {
        let terms: Vec<(i64, Gf)> = self.terms().filter(|&(k, _)| k >= lo && k < hi).collect();
        Series::from_terms(self.ctx, &terms, EXACT)
    }

    /// Multiplicative inverse known up to `min(prec - 2v, cap)`.
    pub fn inv(&self, cap: i64) -> Result<Series> {
        if self.coeffs.is_empty() {
            return Err(if self.is_exact() {
                UflError::DivisionByZero
            } else {
                UflError::IndeterminateValuation { precision: self.prec }
            });
        }
        let v = self.start;
        let prec = if self.is_exact() { cap } else { (self.prec - 2 * v).min(cap) };
        let n = prec + v;
        if n <= 0 {
            return Ok(Series::zero_at(self.ctx, prec));
        }
        let n = n as usize;
        let w0 = self.coeffs[0].inv().expect("leading coefficient is nonzero");
        let mut w = Vec::with_capacity(n);
        w.push(w0);
        for k in 1..n {
            let mut acc = self.ctx.zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc += self.coeffs[j] * w[k - j];
            }
            w.push(-(w0 * acc));
        }
        Ok(Series::normalized(self.ctx, -v, w, prec))
    }

    pub fn div(&self, other: &Series, cap: i64) -> Result<Series> {
        Ok(self * &other.inv(cap)?)
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one(self.ctx);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Equality of the known parts: both agree below the smaller precision.
    pub fn agrees_with(&self, other: &Series) -> bool {
        let p = self.prec.min(other.prec);
        (self - other).truncate(p).is_zero_at_prec()
    }
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec
            && self.coeffs == other.coeffs
            && (self.coeffs.is_empty() || self.start == other.start)
    }
}

impl Eq for Series {}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms()
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 if c.is_one() => "t".to_string(),
                1 => format!("{c}*t"),
                _ if c.is_one() => format!("t^{k}"),
                _ => format!("{c}*t^{k}"),
            })
            .collect();
        if !self.is_exact() {
            parts.push(format!("O(t^{})", self.prec));
        }
        if parts.is_empty() {
            parts.push("0".to_string());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn add_impl(a: &Series, b: &Series, negate_b: bool) -> Series {
    let prec = a.prec.min(b.prec);
    if b.coeffs.is_empty() {
        return a.truncate(prec);
    }
    if a.coeffs.is_empty() {
        let b2 = if negate_b { -b } else { b.clone() };
        return b2.truncate(prec);
    }
    let lo = a.start.min(b.start);
    let hi = a.high().max(b.high()).min(prec);
    if hi <= lo {
        return Series::zero_at(a.ctx, prec);
    }
    let mut coeffs = vec![a.ctx.zero(); (hi - lo) as usize];
    for (i, &c) in a.coeffs.iter().enumerate() {
        let k = a.start + i as i64;
        if k < hi {
            coeffs[(k - lo) as usize] = c;
        }
    }
    for (i, &c) in b.coeffs.iter().enumerate() {
        let k = b.start + i as i64;
        if k < hi {
            let slot = &mut coeffs[(k - lo) as usize];
            *slot = if negate_b { *slot - c } else { *slot + c };
        }
    }
    Series::normalized(a.ctx, lo, coeffs, prec)
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        add_impl(self, rhs, false)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        add_impl(self, rhs, true)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let prec = sat_add(self.prec, rhs.low()).min(sat_add(rhs.prec, self.low()));
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Series::zero_at(self.ctx, prec);
        }
        let lo = self.start + rhs.start;
        let full = self.coeffs.len() + rhs.coeffs.len() - 1;
        let len = if prec >= EXACT { full } else { ((prec - lo).max(0) as usize).min(full) };
        let mut coeffs = vec![self.ctx.zero(); len];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if x.is_zero() {
                continue;
            }
            for (j, &y) in rhs.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += x * y;
            }
        }
        Series::normalized(self.ctx, lo, coeffs, prec)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            ctx: self.ctx,
            start: self.start,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
            prec: self.prec,
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $m(self, rhs: &Series) -> Series {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> &'static GfCtx {
        GfCtx::get(3, 2)
    }

    #[test]
    fn valuation_of_simple_series() {
        let k = f9();
        let x = &Series::t_pow(k, 2) + &Series::t_pow(k, 3);
        assert_eq!(x.valuation().unwrap(), 2);
        let gt = Series::monomial(k.generator(), 1);
        assert_eq!(gt.valuation().unwrap(), 1);
        assert_eq!(Series::zero(k).valuation().unwrap(), EXACT);
        assert!(Series::zero_at(k, 5).valuation().is_err());
    }

    #[test]
    fn precision_rules() {
        let k = f9();
        let a = Series::one(k).with_prec(10);
        let b = Series::t_pow(k, 3).with_prec(7);
        // min(v(a) + prec(b), v(b) + prec(a))
        assert_eq!((&a * &b).prec(), 7);
        assert_eq!((&a + &b).prec(), 7);
        let inv = (&Series::one(k) + &Series::t_pow(k, 1)).inv(6).unwrap();
        assert_eq!(inv.prec(), 6);
        for i in 0..6 {
            assert_eq!(inv.coeff(i), k.from_int(if i % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn inverse_of_non_unit() {
        let k = f9();
        let x = (&Series::t_pow(k, 2) + &Series::t_pow(k, 3)).with_prec(10);
        let y = x.inv(EXACT).unwrap();
        assert_eq!(y.valuation().unwrap(), -2);
        assert_eq!(y.prec(), 6);
        let prod = &x * &y;
        assert!(prod.agrees_with(&Series::one(k)));
    }

    #[test]
    fn tau_of_g_t() {
        let k = f9();
        let g = k.generator();
        let x = Series::monomial(g, 1);
        assert_eq!(x.tau(), Series::monomial(-g, 1));
    }
}
