//! Characteristic data `(gamma_i)` and their numerical invariants.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Result, UflError};
use crate::local::{Gf, GfCtx, Matrix, Poly, Series, Tame, TameExt};
use crate::SeriesPoly;

/// Residue-field data shared by every factor: the prime `p`, the common
/// coefficient field `F_{p^{2F}}` and the element `eps` of `F_{p^2}` with
/// `tau(eps) = -eps`.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    p: u32,
    big: &'static GfCtx,
    eps: Gf,
}

impl FieldSpec {
    /// `big_f` is the odd integer `F`; coefficients live in `F_{p^{2F}}`.
    pub fn new(p: u32, big_f: u32) -> FieldSpec {
        assert!(p % 2 == 1 && big_f % 2 == 1);
        let big = GfCtx::get(p, 2 * big_f);
        let quad = GfCtx::get(p, 2);
        let eps_small = quad
            .lex_elements()
            .find(|x| !x.is_zero() && x.frob(1) == -*x)
            .expect("F_{p^2} has elements with x^p = -x");
        let eps = embed(quad, big, &eps_small.digits());
        FieldSpec { p, big, eps }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ctx(&self) -> &'static GfCtx {
        self.big
    }

    pub fn eps(&self) -> Gf {
        self.eps
    }

    /// Decode base-`p` digits of an element of `F_{p^{2f}}` (in its own
    /// lexicographically least presentation) into the common field.
    pub fn residue_from_digits(&self, f: u32, digits: &[u32]) -> Option<Gf> {
        if digits.len() > 2 * f as usize || digits.iter().any(|&d| d >= self.p) {
            return None;
        }
        let sub = GfCtx::get(self.p, 2 * f);
        Some(embed(sub, self.big, digits))
    }
}

/// Image of `sum d_i g^i` under the embedding sending the generator of `sub`
/// to the first root (by code) of its defining polynomial in `big`.
fn embed(sub: &'static GfCtx, big: &'static GfCtx, digits: &[u32]) -> Gf {
    let root = embedding_root(sub, big);
    let mut acc = big.zero();
    let mut pw = big.one();
    for &d in digits {
        acc += pw * big.from_int(d as i64);
        pw *= root;
    }
    acc
}

fn embedding_root(sub: &'static GfCtx, big: &'static GfCtx) -> Gf {
    static CACHE: std::sync::OnceLock<Mutex<HashMap<(u32, u32, u32), u32>>> = std::sync::OnceLock::new();
    if sub.degree() == big.degree() {
        return big.generator();
    }
    let key = (big.characteristic(), sub.degree(), big.degree());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&code) = cache.lock().expect("cache poisoned").get(&key) {
        return big.from_code(code);
    }
    let modulus: Vec<Gf> = sub.modulus().iter().map(|&c| big.from_int(c as i64)).collect();
    let root = big
        .elements()
        .find(|x| {
            let mut acc = big.zero();
            for &c in modulus.iter().rev() {
                acc = acc * *x + c;
            }
            acc.is_zero()
        })
        .expect("subfield embeds");
    cache.lock().expect("cache poisoned").insert(key, root.code());
    root
}

/// Slope of a Newton polygon segment: the common valuation of its roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slope {
    Finite(Rational64),
    Infinite,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Slope::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Slope::Infinite => write!(f, "inf"),
        }
    }
}

/// Newton polygon of a polynomial over `F'` as `(root valuation, length)`
/// segments, in increasing valuation; roots equal to zero form a final
/// segment of infinite slope.
pub fn newton_polygon(p: &SeriesPoly) -> Result<Vec<(Slope, usize)>> {
    let mut pts: Vec<(i64, i64)> = Vec::new();
    let mut zero_roots = 0usize;
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_exact_zero() {
            if pts.is_empty() {
                zero_roots += 1;
            }
            continue;
        }
        pts.push((i as i64, c.valuation()?));
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt.0 - x1) >= (pt.1 - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut segs: Vec<(Slope, usize)> = hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            (Slope::Finite(Rational64::new(y1 - y2, x2 - x1)), (x2 - x1) as usize)
        })
        .collect();
    segs.reverse();
    if zero_roots > 0 {
        segs.push((Slope::Infinite, zero_roots));
    }
    Ok(segs)
}

/// A residue-field coefficient of an input monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeff {
    Digits(Vec<u32>),
    Eps,
}

/// One factor as given in an instance: `gamma = sum coeff * t^a * pi^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSpec {
    pub id: String,
    pub e: u32,
    pub f: u32,
    pub gamma: Vec<(i64, i64, Coeff)>,
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub id: String,
    pub ext: Arc<TameExt>,
    pub gamma: Tame,
    pub poly: SeriesPoly,
}

impl Factor {
    pub fn n(&self) -> usize {
        self.ext.degree()
    }
    pub fn e(&self) -> u32 {
        self.ext.e()
    }
    pub fn f(&self) -> u32 {
        self.ext.f()
    }
}

/// A validated characteristic datum.
#[derive(Debug)]
pub struct Datum {
    field: FieldSpec,
    factors: Vec<Factor>,
    memo: Mutex<HashMap<Vec<usize>, Arc<Invariants>>>,
    precision_override: Option<i64>,
}

impl Clone for Datum {
    fn clone(&self) -> Self {
        Datum {
            field: self.field.clone(),
            factors: self.factors.clone(),
            memo: Mutex::new(HashMap::new()),
            precision_override: self.precision_override,
        }
    }
}

fn lcm_all(xs: impl Iterator<Item = u32>) -> u32 {
    xs.fold(1u32, |acc, x| acc.lcm(&x))
}

impl Datum {
    /// Build from instance-level factor descriptions.
    pub fn from_specs(p: u32, specs: &[FactorSpec]) -> Result<Datum> {
        check_prime(p)?;
        for s in specs {
            if s.e == 0 || s.f == 0 || s.f % 2 == 0 {
                return Err(UflError::InconsistentInvariants(format!(
                    "factor {}: need e >= 1 and odd f",
                    s.id
                )));
            }
        }
        let n: usize = specs.iter().map(|s| (s.e * s.f) as usize).sum();
        if p as usize <= n {
            return Err(UflError::CharacteristicTooSmall { p, n });
        }
        let field = FieldSpec::new(p, lcm_all(specs.iter().map(|s| s.f)));
        let mut gammas = Vec::new();
        for s in specs {
            let ext = TameExt::new(field.ctx(), s.e, s.f);
            let mut gamma = Tame::zero(&ext);
            for (tp, pp, c) in &s.gamma {
                let coeff = match c {
                    Coeff::Eps => field.eps(),
                    Coeff::Digits(d) => field.residue_from_digits(s.f, d).ok_or_else(|| {
                        UflError::InconsistentInvariants(format!(
                            "factor {}: coefficient digits outside F_(p^{})",
                            s.id,
                            2 * s.f
                        ))
                    })?,
                };
                gamma = &gamma + &Tame::monomial(&ext, coeff, tp * s.e as i64 + pp);
            }
            gammas.push((s.id.clone(), ext, gamma));
        }
        Datum::from_gammas(field, gammas)
    }

    /// Build from explicit elements; every `gamma` must be exact.
    pub fn from_gammas(field: FieldSpec, gammas: Vec<(String, Arc<TameExt>, Tame)>) -> Result<Datum> {
        check_prime(field.p())?;
        let n: usize = gammas.iter().map(|g| g.1.degree()).sum();
        if field.p() as usize <= n {
            return Err(UflError::CharacteristicTooSmall { p: field.p(), n });
        }
        let mut factors = Vec::new();
        for (id, ext, gamma) in gammas {
            factors.push(validate_factor(&id, &ext, gamma)?);
        }
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                let res = factors[i].poly.resultant(&factors[j].poly);
                if res.is_exact_zero() {
                    return Err(UflError::FactorsNotCoprime {
                        a: factors[i].id.clone(),
                        b: factors[j].id.clone(),
                    });
                }
            }
        }
        Ok(Datum { field, factors, memo: Mutex::new(HashMap::new()), precision_override: None })
    }

    pub fn with_precision_override(mut self, n: Option<i64>) -> Datum {
        self.precision_override = n;
        self.memo = Mutex::new(HashMap::new());
        self
    }

    pub fn precision_override(&self) -> Option<i64> {
        self.precision_override
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn ctx(&self) -> &'static GfCtx {
        self.field.ctx()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.id == id)
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.factors.len()).collect()
    }

    pub fn n_total(&self, j: &[usize]) -> usize {
        j.iter().map(|&i| self.factors[i].n()).sum()
    }

    /// `P_J` as a product of the factor polynomials.
    pub fn poly_j(&self, j: &[usize]) -> SeriesPoly {
        let one = Series::one(self.ctx());
        let ps: Vec<SeriesPoly> = j.iter().map(|&i| self.factors[i].poly.clone()).collect();
        Poly::product(&ps, &one)
    }

    /// `P_i'(gamma_i)` in `E'_i`.
    pub fn derivative_at(&self, i: usize) -> Tame {
        let f = &self.factors[i];
        f.gamma.eval_base_poly(&f.poly.derivative())
    }

    /// `prod_{j in J, j != i} P_j(gamma_i)` in `E'_i`.
    pub fn cofactor_at(&self, j: &[usize], i: usize) -> Tame {
        let f = &self.factors[i];
        let mut acc = Tame::one(&f.ext);
        for &k in j {
            if k != i {
                acc = &acc * &f.gamma.eval_base_poly(&self.factors[k].poly);
            }
        }
        acc
    }

    /// `r_ij = v(Res(P_i, P_j))`.
    pub fn resultant_valuation(&self, i: usize, j: usize) -> Result<i64> {
        if i == j {
            return Ok(0);
        }
        self.factors[i].poly.resultant(&self.factors[j].poly).valuation()
    }

    /// `r_ij = n_i v_{E'_i}(P_j(gamma_i)) / e_i`.
    pub fn resultant_valuation_by_evaluation(&self, i: usize, j: usize) -> Result<i64> {
        if i == j {
            return Ok(0);
        }
        let fi = &self.factors[i];
        let v = fi.gamma.eval_base_poly(&self.factors[j].poly).val()?;
        Ok(fi.n() as i64 * v / fi.e() as i64)
    }

    /// `delta_i` from the valuation of `P_i'(gamma_i)`.
    pub fn serre_delta(&self, i: usize) -> Result<i64> {
        let f = &self.factors[i];
        let (n, e) = (f.n() as i64, f.e() as i64);
        let v = self.derivative_at(i).val()?;
        let num = (v - e + 1) * n;
        if num < 0 || num % (2 * e) != 0 {
            return Err(UflError::InconsistentInvariants(format!(
                "factor {}: delta from v(P'(gamma)) = {v} is not a nonnegative integer",
                f.id
            )));
        }
        Ok(num / (2 * e))
    }

    /// `delta_i` from `v(Disc P_i) = 2 delta_i + n_i - n_i/e_i`.
    pub fn serre_delta_by_discriminant(&self, i: usize) -> Result<i64> {
        let f = &self.factors[i];
        let (n, e) = (f.n() as i64, f.e() as i64);
        let vd = f.poly.discriminant().valuation()?;
        let twice = vd - n + n / e;
        if twice < 0 || twice % 2 != 0 {
            return Err(UflError::InconsistentInvariants(format!(
                "factor {}: discriminant valuation {vd} is inconsistent",
                f.id
            )));
        }
        Ok(twice / 2)
    }

    /// Co-length of `O_F'[gamma_i]` in `O_{E'_i}` from the power-basis
    /// determinant.
    pub fn serre_delta_by_colength(&self, i: usize) -> Result<i64> {
        let f = &self.factors[i];
        let cols: Vec<Vec<Series>> = (0..f.n()).map(|k| f.gamma.pow(k as u32).coords()).collect();
        Matrix::from_columns(&cols).det().valuation()
    }

    /// `lambda_i(c) = f_i v_E(c) + n_i - f_i mod 2` for `c` fixed by tau.
    pub fn disc_class(&self, i: usize, c: &Tame) -> Result<u8> {
        if !c.tau().agrees_with(c) {
            return Err(UflError::NotInFixedField);
        }
        let f = &self.factors[i];
        let v = c.val()?;
        let fi = f.f() as i64;
        Ok((fi * v + f.n() as i64 - fi).rem_euclid(2) as u8)
    }

    /// Invariants of the sub-datum `J` (indices into the factor list, in
    /// increasing order). Cached.
    pub fn invariants(&self, j: &[usize]) -> Result<Arc<Invariants>> {
        let key = j.to_vec();
        if let Some(inv) = self.memo.lock().expect("memo poisoned").get(&key) {
            return Ok(inv.clone());
        }
        let inv = Arc::new(Invariants::compute(self, j, None)?);
        self.memo.lock().expect("memo poisoned").insert(key, inv.clone());
        Ok(inv)
    }

    /// Invariants recomputed at an explicit working precision.
    pub fn invariants_at(&self, j: &[usize], precision: i64) -> Result<Invariants> {
        Invariants::compute(self, j, Some(precision))
    }
}

fn check_prime(p: u32) -> Result<()> {
    let prime = p >= 3 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    if !prime {
        return Err(UflError::schema("/q", format!("q = {p} must be an odd prime")));
    }
    Ok(())
}

fn validate_factor(id: &str, ext: &Arc<TameExt>, gamma: Tame) -> Result<Factor> {
    let n = ext.degree();
    if !gamma.pi_series().is_exact() {
        return Err(UflError::InconsistentInvariants(format!("factor {id}: gamma must be exact")));
    }
    if gamma.pi_series().terms().any(|(_, c)| !ext.in_residue_field(c)) {
        return Err(UflError::InconsistentInvariants(format!(
            "factor {id}: coefficients outside the residue field"
        )));
    }
    if !gamma.is_exact_zero() && gamma.val()? < 0 {
        return Err(UflError::InconsistentInvariants(format!("factor {id}: gamma is not integral")));
    }
    if gamma.tau() != -&gamma {
        return Err(UflError::NotAntiHermitian { id: id.to_string() });
    }
    let cols: Vec<Vec<Series>> = (0..n).map(|k| gamma.pow(k as u32).coords()).collect();
    if Matrix::from_columns(&cols).det().is_exact_zero() {
        return Err(UflError::NotAGenerator { id: id.to_string() });
    }
    let poly = gamma.char_poly();
    let quad_ok = poly.coeffs().iter().all(|c| c.terms().all(|(_, x)| x.frob(2) == x));
    let tau_poly = poly.map(|c| c.tau());
    let reflected = poly.reflect();
    let expected = if n.is_multiple_of(2) { reflected } else { reflected.neg() };
    if !quad_ok || tau_poly != expected {
        return Err(UflError::InconsistentInvariants(format!(
            "factor {id}: characteristic polynomial fails P^tau(T) = (-1)^n P(-T)"
        )));
    }
    let np = newton_polygon(&poly)?;
    let expected_np = if gamma.is_exact_zero() {
        vec![(Slope::Infinite, n)]
    } else {
        vec![(Slope::Finite(Rational64::new(gamma.val()?, ext.e() as i64)), n)]
    };
    if np != expected_np {
        return Err(UflError::InconsistentInvariants(format!(
            "factor {id}: Newton polygon {np:?} does not match (e, f)"
        )));
    }
    Ok(Factor { id: id.to_string(), ext: ext.clone(), gamma, poly })
}

/// Invariants of a sub-datum `J`; vectors are indexed by position in `J`.
#[derive(Clone, Debug)]
pub struct Invariants {
    pub idx: Vec<usize>,
    pub n: Vec<usize>,
    pub e: Vec<u32>,
    pub f: Vec<u32>,
    pub delta: Vec<i64>,
    pub r: Vec<Vec<i64>>,
    pub a: Vec<i64>,
    pub delta_j: i64,
    pub c0: Vec<Tame>,
    pub lambda0: Vec<u8>,
    /// Duality exponents of the base form `c0`.
    pub b0: Vec<i64>,
    pub m_j: i64,
    pub disc_valuation: i64,
    /// Working precision in powers of `t`.
    pub precision: i64,
}

impl Invariants {
    fn compute(d: &Datum, j: &[usize], precision: Option<i64>) -> Result<Invariants> {
        assert!(!j.is_empty() && j.windows(2).all(|w| w[0] < w[1]), "J must be sorted");
        let fs: Vec<&Factor> = j.iter().map(|&i| &d.factors[i]).collect();
        let k = j.len();
        let n: Vec<usize> = fs.iter().map(|f| f.n()).collect();
        let e: Vec<u32> = fs.iter().map(|f| f.e()).collect();
        let f: Vec<u32> = fs.iter().map(|f| f.f()).collect();
        let mut delta = Vec::with_capacity(k);
        for &i in j {
            let d1 = d.serre_delta(i)?;
            let d2 = d.serre_delta_by_discriminant(i)?;
            let d3 = d.serre_delta_by_colength(i)?;
            if d1 != d2 || d1 != d3 {
                return Err(UflError::InconsistentInvariants(format!(
                    "factor {}: delta computed as {d1}, {d2}, {d3}",
                    d.factors[i].id
                )));
            }
            delta.push(d1);
        }
        let mut r = vec![vec![0i64; k]; k];
        for x in 0..k {
            for y in 0..k {
                if x == y {
                    continue;
                }
                let r1 = d.resultant_valuation(j[x], j[y])?;
                let r2 = d.resultant_valuation_by_evaluation(j[x], j[y])?;
                if r1 != r2 {
                    return Err(UflError::InconsistentInvariants(format!(
                        "r between {} and {}: {r1} by resultant, {r2} by evaluation",
                        d.factors[j[x]].id, d.factors[j[y]].id
                    )));
                }
                r[x][y] = r1;
            }
        }
        let mut a = Vec::with_capacity(k);
        for x in 0..k {
            let cross: i64 = (0..k).filter(|&y| y != x).map(|y| r[x][y]).sum();
            let num = (2 * delta[x] + cross) * e[x] as i64;
            if num % n[x] as i64 != 0 {
                return Err(UflError::InconsistentInvariants(format!(
                    "conductor exponent of {} is not an integer",
                    fs[x].id
                )));
            }
            a.push(num / n[x] as i64);
        }
        let off: i64 = (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).filter(|(x, y)| x != y).map(|(x, y)| r[x][y]).sum();
        let delta_j = delta.iter().sum::<i64>() + off / 2;
        let af: i64 = a.iter().zip(&f).map(|(&ai, &fi)| ai * fi as i64).sum();
        if af != 2 * delta_j {
            return Err(UflError::InconsistentInvariants(format!(
                "sum a_i f_i = {af} but 2 delta_J = {}",
                2 * delta_j
            )));
        }
        let p_j = d.poly_j(j);
        let n_j: usize = n.iter().sum();
        let disc_valuation = p_j.discriminant().valuation()?;
        let m_j = n_j as i64 * disc_valuation + 1;

        let denoms: Vec<Tame> = j.iter().map(|&i| &d.derivative_at(i) * &d.cofactor_at(j, i)).collect();
        let mut b0 = Vec::with_capacity(k);
        for (x, den) in denoms.iter().enumerate() {
            b0.push(-den.val()? + e[x] as i64 - 1);
        }
        let default_prec = m_j
            + 2 * (0..k)
                .map(|x| (a[x] + b0[x].abs() + e[x] as i64 - 1) / e[x] as i64)
                .max()
                .unwrap_or(0)
            + 8;
        let precision = precision.or(d.precision_override).unwrap_or(default_prec);
        let eps_pow = d.field.eps().pow(n_j as u64 - 1);
        let mut c0 = Vec::with_capacity(k);
        for (x, den) in denoms.iter().enumerate() {
            let cap = precision * e[x] as i64;
            c0.push(den.inv(cap)?.scale(eps_pow));
        }
        let mut lambda0 = Vec::with_capacity(k);
        for x in 0..k {
            let closed = (0..k).filter(|&y| y != x).map(|y| r[y][x]).sum::<i64>().rem_euclid(2) as u8;
            let direct = d.disc_class(j[x], &c0[x])?;
            if closed != direct {
                return Err(UflError::InconsistentInvariants(format!(
                    "base class of {}: {closed} by congruence, {direct} from c0",
                    fs[x].id
                )));
            }
            lambda0.push(closed);
        }
        Ok(Invariants {
            idx: j.to_vec(),
            n,
            e,
            f,
            delta,
            r,
            a,
            delta_j,
            c0,
            lambda0,
            b0,
            m_j,
            disc_valuation,
            precision,
        })
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn n_total(&self) -> usize {
        self.n.iter().sum()
    }

    /// Canonical representative `c(lambda) = c0 * pi^s` of a class.
    pub fn class_form(&self, lambda: &[u8]) -> Vec<Tame> {
        assert_eq!(lambda.len(), self.len());
        self.c0
            .iter()
            .zip(lambda.iter().zip(&self.lambda0))
            .map(|(c, (&l, &l0))| if (l + l0) % 2 == 1 { c.shift(1) } else { c.clone() })
            .collect()
    }
}

/// Does a series over the big field have all coefficients in `F_{p^2}`?
pub fn in_quadratic_subfield(s: &Series) -> bool {
    s.terms().all(|(_, c)| c.frob(2) == c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(p: u32, second: Vec<(i64, i64, Coeff)>) -> Datum {
        Datum::from_specs(
            p,
            &[
                FactorSpec { id: "1".into(), e: 1, f: 1, gamma: vec![] },
                FactorSpec { id: "2".into(), e: 1, f: 1, gamma: second },
            ],
        )
        .unwrap()
    }

    #[test]
    fn eps_choice() {
        let f9 = FieldSpec::new(3, 1);
        assert_eq!(f9.eps(), f9.ctx().generator());
        let f25 = FieldSpec::new(5, 1);
        let g = f25.ctx().generator();
        assert_eq!(f25.eps(), f25.ctx().one() + g + g);
        assert_eq!(f25.eps() * f25.eps(), f25.ctx().from_int(2));
    }

    #[test]
    fn node3_invariants() {
        let d = node(3, vec![(1, 0, Coeff::Eps)]);
        let inv = d.invariants(&[0, 1]).unwrap();
        assert_eq!(inv.r, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(inv.delta, vec![0, 0]);
        assert_eq!(inv.a, vec![1, 1]);
        assert_eq!(inv.delta_j, 1);
        assert_eq!(inv.lambda0, vec![1, 1]);
        assert_eq!(inv.b0, vec![-1, -1]);
        assert_eq!(inv.m_j, 5);
        let k = d.ctx();
        assert!(inv.c0[0].agrees_with(&Tame::monomial(&d.factors()[0].ext, k.from_int(-1), -1)));
        assert!(inv.c0[1].agrees_with(&Tame::monomial(&d.factors()[1].ext, k.one(), -1)));
    }

    #[test]
    fn tac3_and_splitmax_resultants() {
        let tac = node(3, vec![(2, 0, Coeff::Eps)]);
        assert_eq!(tac.resultant_valuation(0, 1).unwrap(), 2);
        let split = Datum::from_specs(
            3,
            &[
                FactorSpec { id: "1".into(), e: 1, f: 1, gamma: vec![(0, 0, Coeff::Eps)] },
                FactorSpec { id: "2".into(), e: 1, f: 1, gamma: vec![(1, 0, Coeff::Eps)] },
            ],
        )
        .unwrap();
        assert_eq!(split.resultant_valuation(0, 1).unwrap(), 0);
        let inv = split.invariants(&[0, 1]).unwrap();
        assert_eq!(inv.a, vec![0, 0]);
        assert_eq!(inv.delta_j, 0);
        assert_eq!(inv.lambda0, vec![0, 0]);
    }

    #[test]
    fn validation_errors() {
        let same = Datum::from_specs(
            3,
            &[
                FactorSpec { id: "1".into(), e: 1, f: 1, gamma: vec![] },
                FactorSpec { id: "2".into(), e: 1, f: 1, gamma: vec![] },
            ],
        );
        assert!(matches!(same, Err(UflError::FactorsNotCoprime { .. })));
        let big = Datum::from_specs(
            3,
            &[
                FactorSpec { id: "1".into(), e: 2, f: 1, gamma: vec![(0, 1, Coeff::Eps)] },
                FactorSpec { id: "2".into(), e: 2, f: 1, gamma: vec![(0, 3, Coeff::Eps)] },
            ],
        );
        assert!(matches!(big, Err(UflError::CharacteristicTooSmall { .. })));
        let not_anti = Datum::from_specs(
            3,
            &[FactorSpec { id: "1".into(), e: 1, f: 1, gamma: vec![(1, 0, Coeff::Digits(vec![1]))] }],
        );
        assert!(matches!(not_anti, Err(UflError::NotAntiHermitian { .. })));
    }

    #[test]
    fn ramified_deltas() {
        // gamma = eps * pi, pi^2 = t
        let ramu = Datum::from_specs(5, &[FactorSpec { id: "1".into(), e: 2, f: 1, gamma: vec![(0, 1, Coeff::Eps)] }]).unwrap();
        assert_eq!(ramu.serre_delta(0).unwrap(), 0);
        let cusp = Datum::from_specs(5, &[FactorSpec { id: "1".into(), e: 2, f: 1, gamma: vec![(0, 3, Coeff::Eps)] }]).unwrap();
        assert_eq!(cusp.serre_delta(0).unwrap(), 1);
        assert_eq!(cusp.serre_delta_by_discriminant(0).unwrap(), 1);
        let inv = cusp.invariants(&[0]).unwrap();
        assert_eq!(inv.a, vec![2]);
        assert_eq!(inv.delta_j, 1);
        assert_eq!(inv.m_j, 7);
        assert_eq!(inv.lambda0, vec![0]);
    }

    #[test]
    fn disc_class_examples() {
        let d = Datum::from_specs(5, &[FactorSpec { id: "1".into(), e: 1, f: 1, gamma: vec![] }]).unwrap();
        let ext = &d.factors()[0].ext;
        let k = d.ctx();
        assert_eq!(d.disc_class(0, &Tame::monomial(ext, k.one(), 1)).unwrap(), 1);
        assert_eq!(d.disc_class(0, &Tame::one(ext)).unwrap(), 0);
        let ram = Datum::from_specs(5, &[FactorSpec { id: "1".into(), e: 2, f: 1, gamma: vec![(0, 1, Coeff::Eps)] }]).unwrap();
        assert_eq!(ram.disc_class(0, &Tame::one(&ram.factors()[0].ext)).unwrap(), 1);
        assert!(matches!(
            d.disc_class(0, &Tame::constant(ext, d.field().eps())),
            Err(UflError::NotInFixedField)
        ));
    }

    #[test]
    fn newton_polygons() {
        let k = GfCtx::get(3, 2);
        let g = k.generator();
        let t = |c: Gf, e: i64| Series::monomial(c, e);
        let p1 = Poly::new(vec![t(k.one(), 1), Series::zero(k), Series::one(k)]);
        assert_eq!(newton_polygon(&p1).unwrap(), vec![(Slope::Finite(Rational64::new(1, 2)), 2)]);
        let p2 = Poly::new(vec![t(-g, 1), Series::one(k)]);
        assert_eq!(newton_polygon(&p2).unwrap(), vec![(Slope::Finite(Rational64::new(1, 1)), 1)]);
        let p3 = Poly::new(vec![Series::zero(k), t(-g, 1), Series::one(k)]);
        assert_eq!(
            newton_polygon(&p3).unwrap(),
            vec![(Slope::Finite(Rational64::new(1, 1)), 1), (Slope::Infinite, 1)]
        );
    }
}
