//! Finite fields `F_{p^k}` presented by the lexicographically least monic
//! irreducible polynomial of degree `k` over `F_p`.
//!
//! Elements are stored as their base-`p` digit code (`sum d_i p^i`, digit `i`
//! is the coordinate of `g^i`). Multiplication goes through log/exp tables
//! built from a primitive element; contexts are interned and live for the
//! whole process so elements can be `Copy`.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

/// Largest field size for which a full addition table is kept.
const ADD_TABLE_LIMIT: u32 = 1024;

pub struct GfCtx {
    p: u32,
    degree: u32,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg: Vec<u32>,
    pow_p: Vec<u32>,
}

impl fmt::Debug for GfCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.degree)
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), &'static GfCtx>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), &'static GfCtx>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Polynomials over `F_p`, low degree first, used only while building tables.
pub(crate) mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let sub = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x as u64 * y as u64;
            }
        }
        let mut v: Vec<u32> = out.into_iter().map(|c| (c % p as u64) as u32).collect();
        trim(&mut v);
        v
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut v: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut v);
        v
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    pub fn inv(a: u32, p: u32) -> u32 {
        // p is prime, Fermat
        let mut result = 1u64;
        let mut base = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        result as u32
    }

    /// `x^(p^i) mod m` for i = 1..=upto.
    pub fn frobenius_powers(m: &[u32], p: u32, upto: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0, 1];
        for _ in 0..upto {
            // cur <- cur^p mod m
            let mut acc = vec![1];
            for _ in 0..p {
                acc = mulmod(&acc, &cur, m, p);
            }
            cur = acc;
            out.push(cur.clone());
        }
        out
    }

    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let k = (m.len() - 1) as u32;
        if k == 1 {
            return true;
        }
        if m[0] == 0 {
            return false;
        }
        let pows = frobenius_powers(m, p, k / 2);
        for xp in &pows {
            let g = gcd(m, &sub(xp, &[0, 1], p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

/// Lexicographically least monic irreducible of degree `k` over `F_p`,
/// comparing the coefficient vectors `(c_0, c_1, ..., c_{k-1})` with `c_0`
/// most significant. Returned low degree first, including the leading 1.
pub fn lex_least_irreducible(p: u32, k: u32) -> Vec<u32> {
    let total = (p as u64).pow(k);
    for idx in 0..total {
        // c_0 most significant digit of idx
        let mut coeffs = vec![0u32; k as usize + 1];
        let mut rest = idx;
        for i in (0..k as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[k as usize] = 1;
        if fp_poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl GfCtx {
    /// Interned context for `F_{p^degree}`. Panics if `p` is not prime or
    /// the field has more than 2^22 elements.
    pub fn get(p: u32, degree: u32) -> &'static GfCtx {
        assert!(is_prime(p), "characteristic {p} is not prime");
        assert!(degree >= 1);
        let mut reg = registry().lock().expect("field registry poisoned");
        if let Some(ctx) = reg.get(&(p, degree)) {
            return ctx;
        }
        let ctx: &'static GfCtx = Box::leak(Box::new(GfCtx::build(p, degree)));
        reg.insert((p, degree), ctx);
        ctx
    }

    fn build(p: u32, degree: u32) -> GfCtx {
        let size64 = (p as u64).pow(degree);
        assert!(size64 <= 1 << 22, "field too large for table arithmetic");
        let size = size64 as u32;
        let modulus = lex_least_irreducible(p, degree);
        let to_poly = |code: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(degree as usize);
            let mut c = code;
            for _ in 0..degree {
                v.push(c % p);
                c /= p;
            }
            fp_poly::trim(&mut v);
            v
        };
        let to_code = |poly: &[u32]| -> u32 {
            poly.iter().rev().fold(0u32, |acc, &d| acc * p + d)
        };
        let order = size - 1;
        let factors = prime_factors(order.max(1));
        let mut exp = vec![0u32; 2 * order as usize + 2];
        let mut log = vec![0u32; size as usize];
        let mut found = false;
        'search: for cand in 1..size {
            let cp = to_poly(cand);
            // powers of the candidate
            let mut cur = vec![1u32];
            let mut seq = Vec::with_capacity(order as usize);
            for _ in 0..order {
                seq.push(to_code(&cur));
                cur = fp_poly::mulmod(&cur, &cp, &modulus, p);
            }
            // primitive iff cand^(order/r) != 1 for all prime r | order
            if order > 1 {
                for &r in &factors {
                    if seq[(order / r) as usize] == 1 {
                        continue 'search;
                    }
                }
            }
            for (i, &c) in seq.iter().enumerate() {
                exp[i] = c;
                exp[i + order as usize] = c;
                log[c as usize] = i as u32;
            }
            found = true;
            break;
        }
        assert!(found, "no primitive element found");
        let digits_add = |a: u32, b: u32| -> u32 {
            let (mut x, mut y) = (a, b);
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..degree {
                let d = (x % p + y % p) % p;
                out += d * place;
                place *= p;
                x /= p;
                y /= p;
            }
            out
        };
        let neg: Vec<u32> = (0..size)
            .map(|a| {
                let mut x = a;
                let mut out = 0;
                let mut place = 1;
                for _ in 0..degree {
                    out += ((p - x % p) % p) * place;
                    place *= p;
                    x /= p;
                }
                out
            })
            .collect();
        let add_table = if size <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    t[(a * size + b) as usize] = digits_add(a, b);
                }
            }
            Some(t)
        } else {
            None
        };
        let pow_p: Vec<u32> = (0..size)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    let l = log[a as usize] as u64 * p as u64 % order.max(1) as u64;
                    exp[l as usize]
                }
            })
            .collect();
        GfCtx {
            p,
            degree,
            size,
            modulus,
            exp,
            log,
            add_table,
            neg,
            pow_p,
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Defining polynomial, low degree first (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element used for the log tables.
    pub fn primitive(&'static self) -> Gf {
        Gf { code: self.exp[if self.size > 2 { 1 } else { 0 }], ctx: self }
    }

    pub fn zero(&'static self) -> Gf {
        Gf { code: 0, ctx: self }
    }

    pub fn one(&'static self) -> Gf {
        Gf { code: 1, ctx: self }
    }

    /// The generator `g` (class of X modulo the defining polynomial).
    pub fn generator(&'static self) -> Gf {
        if self.degree == 1 {
            // F_p: the polynomial is X - c for the least c
            let c = (self.p - self.modulus[0]) % self.p;
            Gf { code: c, ctx: self }
        } else {
            Gf { code: self.p, ctx: self }
        }
    }

    pub fn from_int(&'static self, n: i64) -> Gf {
        let r = n.rem_euclid(self.p as i64) as u32;
        Gf { code: r, ctx: self }
    }

    pub fn from_code(&'static self, code: u32) -> Gf {
        assert!(code < self.size, "element code out of range");
        Gf { code, ctx: self }
    }

    /// Element with the given coordinates in the power basis (low first).
    pub fn from_digits(&'static self, digits: &[u32]) -> Option<Gf> {
        if digits.len() > self.degree as usize || digits.iter().any(|&d| d >= self.p) {
            return None;
        }
        let code = digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d);
        Some(Gf { code, ctx: self })
    }

    /// All elements, by code.
    pub fn elements(&'static self) -> impl Iterator<Item = Gf> {
        (0..self.size).map(move |c| Gf { code: c, ctx: self })
    }

    /// Elements of the subfield of size `p^d` (requires `d | degree`).
    pub fn subfield(&'static self, d: u32) -> Vec<Gf> {
        assert!(self.degree.is_multiple_of(d), "not a subfield degree");
        self.elements().filter(|x| x.frob(d) == *x).collect()
    }

    /// Elements in lexicographic order of their coordinate vectors, with the
    /// constant coordinate most significant.
    pub fn lex_elements(&'static self) -> impl Iterator<Item = Gf> {
        let p = self.p;
        let k = self.degree;
        (0..self.size).map(move |idx| {
            let mut digits = vec![0u32; k as usize];
            let mut rest = idx;
            for i in (0..k as usize).rev() {
                digits[i] = rest % p;
                rest /= p;
            }
            self.from_digits(&digits).expect("digits in range")
        })
    }

    #[inline]
    fn add_codes(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.add_table {
            return t[(a * self.size + b) as usize];
        }
        let p = self.p;
        let (mut x, mut y) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        out
    }

    #[inline]
    fn mul_codes(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }
}

/// An element of an interned finite field.
#[derive(Clone, Copy)]
pub struct Gf {
    code: u32,
    ctx: &'static GfCtx,
}

impl Gf {
    #[inline]
    pub fn ctx(&self) -> &'static GfCtx {
        self.ctx
    }

    #[inline]
    pub fn code(&self) -> u32 {
        self.code
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.code == 1
    }

    pub fn digits(&self) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.ctx.degree as usize);
        let mut c = self.code;
        for _ in 0..self.ctx.degree {
            v.push(c % self.ctx.p);
            c /= self.ctx.p;
        }
        v
    }

    pub fn inv(&self) -> Option<Gf> {
        if self.code == 0 {
            return None;
        }
        let order = self.ctx.size - 1;
        let l = self.ctx.log[self.code as usize];
        let code = self.ctx.exp[((order - l) % order.max(1)) as usize];
        Some(Gf { code, ctx: self.ctx })
    }

    pub fn pow(&self, mut e: u64) -> Gf {
        if self.code == 0 {
            return if e == 0 { self.ctx.one() } else { *self };
        }
        let order = (self.ctx.size - 1) as u64;
        e %= order.max(1);
        let l = self.ctx.log[self.code as usize] as u64 * e % order.max(1);
        Gf { code: self.ctx.exp[l as usize], ctx: self.ctx }
    }

    /// `x^(p^j)`.
    pub fn frob(&self, j: u32) -> Gf {
        let mut code = self.code;
        for _ in 0..(j % self.ctx.degree) {
            code = self.ctx.pow_p[code as usize];
        }
        Gf { code, ctx: self.ctx }
    }

    /// The order-two automorphism `x -> x^(p^(k/2))` of an even degree field.
    pub fn tau(&self) -> Gf {
        debug_assert!(self.ctx.degree.is_multiple_of(2));
        self.frob(self.ctx.degree / 2)
    }

    /// Integer value of an element of the prime field.
    pub fn prime_value(&self) -> Option<u32> {
        (self.code < self.ctx.p).then_some(self.code)
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(std::ptr::eq(self.ctx, other.ctx), "mixed fields");
        self.code == other.code
    }
}

impl Eq for Gf {}

impl Hash for Gf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl PartialOrd for Gf {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Gf {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code.cmp(&other.code)
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.degree == 1 || self.code < self.ctx.p {
            return write!(f, "{}", self.code);
        }
        let digits = self.digits();
        let mut terms = Vec::new();
        for (i, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            terms.push(match (d, i) {
                (_, 0) => d.to_string(),
                (1, _) => mono,
                _ => format!("{d}{mono}"),
            });
        }
        write!(f, "({})", terms.join("+"))
    }
}

impl Add for Gf {
    type Output = Gf;
    #[inline]
    fn add(self, rhs: Gf) -> Gf {
        Gf { code: self.ctx.add_codes(self.code, rhs.code), ctx: self.ctx }
    }
}

impl Sub for Gf {
    type Output = Gf;
    #[inline]
    fn sub(self, rhs: Gf) -> Gf {
        let n = self.ctx.neg[rhs.code as usize];
        Gf { code: self.ctx.add_codes(self.code, n), ctx: self.ctx }
    }
}

impl Neg for Gf {
    type Output = Gf;
    #[inline]
    fn neg(self) -> Gf {
        Gf { code: self.ctx.neg[self.code as usize], ctx: self.ctx }
    }
}

impl Mul for Gf {
    type Output = Gf;
    #[inline]
    fn mul(self, rhs: Gf) -> Gf {
        Gf { code: self.ctx.mul_codes(self.code, rhs.code), ctx: self.ctx }
    }
}

impl Div for Gf {
    type Output = Gf;
    fn div(self, rhs: Gf) -> Gf {
        self * rhs.inv().expect("division by zero in finite field")
    }
}

impl AddAssign for Gf {
    fn add_assign(&mut self, rhs: Gf) {
        *self = *self + rhs;
    }
}

impl SubAssign for Gf {
    fn sub_assign(&mut self, rhs: Gf) {
        *self = *self - rhs;
    }
}

impl MulAssign for Gf {
    fn mul_assign(&mut self, rhs: Gf) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_is_presented_by_x2_plus_1() {
        let ctx = GfCtx::get(3, 2);
        assert_eq!(ctx.modulus(), &[1, 0, 1]);
        let g = ctx.generator();
        assert_eq!(g * g, ctx.from_int(-1));
        // tau(g) = g^3 = -g
        assert_eq!(g.tau(), -g);
    }

    #[test]
    fn f25_is_presented_by_x2_plus_x_plus_1() {
        let ctx = GfCtx::get(5, 2);
        assert_eq!(ctx.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn field_axioms_small() {
        for &(p, k) in &[(3, 2), (5, 2), (7, 2), (3, 6)] {
            let ctx = GfCtx::get(p, k);
            let els: Vec<Gf> = ctx.elements().step_by(((ctx.size() / 40) as usize).max(1)).collect();
            for &a in &els {
                assert_eq!(a + (-a), ctx.zero());
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), ctx.one());
                }
                for &b in &els {
                    assert_eq!(a * b, b * a);
                    assert_eq!((a + b) - b, a);
                    assert_eq!((a + b).frob(1), a.frob(1) + b.frob(1));
                }
            }
            assert_eq!(ctx.subfield(1).len(), p as usize);
        }
    }

    #[test]
    fn generator_matches_digits() {
        let ctx = GfCtx::get(5, 2);
        assert_eq!(ctx.generator().digits(), vec![0, 1]);
        assert_eq!(ctx.from_digits(&[2, 3]).unwrap().digits(), vec![2, 3]);
        assert!(ctx.from_digits(&[5]).is_none());
    }
}
