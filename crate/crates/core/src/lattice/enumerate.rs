//! Enumeration of self-dual `A_J`-lattices for a hermitian form.
//!
//! Any self-dual `A_J`-lattice `M` with `O_{E'} M = L = pi^{-m} O_{E'}`
//! satisfies `L0 ⊆ M ⊆ L0^perp` where `L0 = a L + L^perp = pi^kappa O` with
//! `kappa_i = min(a_i - m_i, m_i - b_i)` and `L0^perp = pi^{-kappa-b} O`.
//! On `V' = L0^perp / L0` the residue of the form is a well defined
//! nondegenerate hermitian form, and `M` is self-dual exactly when `M / L0`
//! is a Lagrangian subspace. The pruned enumerator walks `A_J`-submodules
//! of `V'` upwards through simple extensions, discarding non-isotropic
//! ones. The naive enumerator instead lists every subspace of `L / a L`,
//! keeps the stable ones and tests self-duality on the lifted lattice.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use super::space::{HermitianForm, Lattice, Space};
use crate::chardata::Invariants;
use crate::error::{Result, UflError};
use crate::local::fqlinalg::{self, Subspace, Vector};
use crate::local::{Gf, Matrix, Series, Tame};

pub const DEFAULT_ENUM_CAP: usize = 10;
pub const NAIVE_MAX_DIM: usize = 4;

/// Admissible multiplier vectors `m` with `b_i <= 2 m_i <= 2 a_i + b_i`, in
/// lexicographic order. `widen` enlarges every range by that many steps on
/// both sides.
pub fn search_window(inv: &Invariants, form: &HermitianForm, widen: i64) -> Vec<Vec<i64>> {
    let ranges: Vec<(i64, i64)> = (0..inv.len())
        .map(|x| {
            let b = form.b[x];
            let a = inv.a[x];
            (b.div_euclid(2) + (b.rem_euclid(2) != 0) as i64 - widen, (2 * a + b).div_euclid(2) + widen)
        })
        .collect();
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for &(lo, hi) in &ranges {
        let mut next = Vec::new();
        for prefix in &out {
            for m in lo..=hi {
                let mut v = prefix.clone();
                v.push(m);
                next.push(v);
            }
        }
        out = next;
    }
    if ranges.iter().any(|&(lo, hi)| lo > hi) {
        return Vec::new();
    }
    out
}

/// `dim L / a L = sum a_i f_i`.
pub fn window_dimension(inv: &Invariants) -> usize {
    inv.a.iter().zip(&inv.f).map(|(&a, &f)| (a * f as i64) as usize).sum()
}

/// A finite-dimensional sub-quotient `pi^lo O / pi^hi O` of `E'_J` over
/// `F_{q^2}` with the induced actions of `t` and `gamma_J`.
struct Quotient {
    lo: Vec<i64>,
    hi: Vec<i64>,
    /// basis element `(part, s, l)` is `pi_part^s omega^l`
    basis: Vec<(usize, i64, usize)>,
    /// images of basis vectors, as columns
    t_op: Vec<Vector>,
    g_op: Vec<Vector>,
}

impl Quotient {
    fn new(space: &Space, lo: Vec<i64>, hi: Vec<i64>) -> Quotient {
        let mut basis = Vec::new();
        let mut index = HashMap::new();
        for x in 0..space.parts() {
            let f = space.ext(x).f() as usize;
            for s in lo[x]..hi[x] {
                for l in 0..f {
                    index.insert((x, s, l), basis.len());
                    basis.push((x, s, l));
                }
            }
        }
        let ctx = space.ctx();
        let dim = basis.len();
        let image = |x: usize, y: &Tame| -> Vector {
            let mut v = vec![ctx.zero(); dim];
            let ext = space.ext(x);
            for (k, c) in y.pi_series().terms() {
                if k >= hi[x] {
                    continue;
                }
                assert!(k >= lo[x], "sub-quotient is not stable");
                for (l, a) in ext.residue_coords(c).into_iter().enumerate() {
                    v[index[&(x, k, l)]] += a;
                }
            }
            v
        };
        let mut t_op = Vec::with_capacity(dim);
        let mut g_op = Vec::with_capacity(dim);
        for &(x, s, l) in &basis {
            let ext = space.ext(x);
            let el = Tame::monomial(ext, ext.omega_pow(l), s);
            t_op.push(image(x, &el.shift(ext.e() as i64)));
            g_op.push(image(x, &(&space.gamma()[x] * &el)));
        }
        Quotient { lo, hi, basis, t_op, g_op }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn apply(op: &[Vector], v: &[Gf]) -> Vector {
        let mut out = vec![v[0].ctx().zero(); v.len()];
        for (a, &c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(&op[a]) {
                *o += c * x;
            }
        }
        out
    }

    fn is_stable(&self, w: &Subspace) -> bool {
        w.basis()
            .iter()
            .all(|v| w.contains(&Quotient::apply(&self.t_op, v)) && w.contains(&Quotient::apply(&self.g_op, v)))
    }

    /// Indices that must not all vanish on `W` for `O_{E'} M` to reach
    /// `pi^{-m}` in every part.
    fn exactness_sets(&self, m: &[i64]) -> Vec<Vec<usize>> {
        (0..self.lo.len())
            .filter(|&x| self.lo[x] == -m[x] && self.hi[x] > self.lo[x])
            .map(|x| {
                self.basis
                    .iter()
                    .enumerate()
                    .filter(|(_, &(y, s, _))| y == x && s == -m[x])
                    .map(|(a, _)| a)
                    .collect()
            })
            .collect()
    }

    fn is_exact(sets: &[Vec<usize>], w: &Subspace) -> bool {
        sets.iter().all(|set| w.basis().iter().any(|v| set.iter().any(|&a| !v[a].is_zero())))
    }

    /// Lattice `pi^hi O + lift(W)`.
    fn lift(&self, space: &Space, w: &Subspace) -> Result<Lattice> {
        let mut cols = space.pi_power_lattice(&self.hi).columns();
        let zero = Series::zero(space.ctx());
        for v in w.basis() {
            let mut col = vec![zero.clone(); space.dim()];
            for (a, &c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (x, s, l) = self.basis[a];
                let bv = space.basis_vector(x, s, l);
                for (o, b) in col.iter_mut().zip(bv) {
                    *o = &*o + &b.scale(c);
                }
            }
            cols.push(col);
        }
        Lattice::from_generators(space, &Matrix::from_columns(&cols))
    }
}

/// The residue hermitian form on a sub-quotient, `h(x, y) = sum tau(x_a) H_ab y_b`.
fn residue_form(space: &Space, form: &HermitianForm, q: &Quotient) -> Result<Vec<Vector>> {
    let ctx = space.ctx();
    let d = q.dim();
    let mut h = vec![vec![ctx.zero(); d]; d];
    for (a, &(xa, sa, la)) in q.basis.iter().enumerate() {
        for (b, &(xb, sb, lb)) in q.basis.iter().enumerate() {
            if xa != xb {
                continue;
            }
            let ext = space.ext(xa);
            let coeff = ext.omega_pow(la).tau() * ext.omega_pow(lb);
            let val = form.c[xa].shift(sa + sb).scale(coeff).trace();
            h[a][b] = val.residue()?;
        }
    }
    Ok(h)
}

fn pairing(h: &[Vector], x: &[Gf], y: &[Gf]) -> Gf {
    let mut acc = x[0].ctx().zero();
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        let txa = xa.tau();
        for (b, yb) in y.iter().enumerate() {
            if !yb.is_zero() && !h[a][b].is_zero() {
                acc += txa * h[a][b] * *yb;
            }
        }
    }
    acc
}

fn is_isotropic(h: &[Vector], w: &Subspace) -> bool {
    let b = w.basis();
    (0..b.len()).all(|i| (i..b.len()).all(|j| pairing(h, &b[i], &b[j]).is_zero()))
}

/// Minimal polynomials over `F_{q^2}` of the residues of the `gamma_i`: the
/// possible simple `A_J`-modules. Returned as coefficient lists, low first.
fn simple_types(space: &Space) -> Vec<Vec<Gf>> {
    let ctx = space.ctx();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut out = Vec::new();
    for g in space.gamma() {
        let r = g.pi_series().coeff(0);
        let mut orbit = vec![r];
        let mut c = r.frob(2);
        while c != r {
            orbit.push(c);
            c = c.frob(2);
        }
        let mut key: Vec<u32> = orbit.iter().map(|x| x.code()).collect();
        key.sort_unstable();
        if !seen.insert(key) {
            continue;
        }
        let mut poly = vec![ctx.one()];
        for &root in &orbit {
            let mut next = vec![ctx.zero(); poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * root;
            }
            poly = next;
        }
        out.push(poly);
    }
    out
}

fn poly_of_operator(op: &[Vector], poly: &[Gf]) -> Vec<Vector> {
    let d = op.len();
    let ctx = poly[0].ctx();
    (0..d)
        .map(|a| {
            let mut e = vec![ctx.zero(); d];
            e[a] = ctx.one();
            // Horner on the vector
            let mut acc = vec![ctx.zero(); d];
            for &c in poly.iter().rev() {
                acc = Quotient::apply(op, &acc);
                for (x, &y) in acc.iter_mut().zip(&e) {
                    *x += c * y;
                }
            }
            acc
        })
        .collect()
}

/// Outcome for one multiplier vector.
#[derive(Clone, Debug)]
pub struct MultiplierResult {
    pub m: Vec<i64>,
    pub kappa: Vec<i64>,
    pub dimension: usize,
    pub subspaces: Vec<Subspace>,
}

fn sandwich_bounds(inv: &Invariants, form: &HermitianForm, m: &[i64]) -> Option<(Vec<i64>, Vec<i64>)> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for x in 0..inv.len() {
        let kappa = (inv.a[x] - m[x]).min(m[x] - form.b[x]);
        let kappa_dual = -kappa - form.b[x];
        if kappa_dual > -m[x] || kappa_dual > kappa {
            return None;
        }
        lo.push(kappa_dual);
        hi.push(kappa);
    }
    Some((lo, hi))
}

fn all_vectors(basis: &[Vector], scalars: &[Gf]) -> Vec<Vector> {
    // one representative per line: first nonzero coefficient equal to one
    let k = basis.len();
    let mut out = Vec::new();
    for lead in 0..k {
        let tail = k - lead - 1;
        let total = scalars.len().pow(tail as u32);
        for idx in 0..total {
            let mut v = basis[lead].clone();
            let mut rest = idx;
            for b in basis.iter().skip(lead + 1) {
                let c = scalars[rest % scalars.len()];
                rest /= scalars.len();
                if !c.is_zero() {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x += c * y;
                    }
                }
            }
            out.push(v);
        }
    }
    out
}

fn enumerate_pruned_one(space: &Space, inv: &Invariants, form: &HermitianForm, m: &[i64], cap: usize, class: &str) -> Result<MultiplierResult> {
    let Some((lo, hi)) = sandwich_bounds(inv, form, m) else {
        return Ok(MultiplierResult { m: m.to_vec(), kappa: Vec::new(), dimension: 0, subspaces: Vec::new() });
    };
    let q = Quotient::new(space, lo, hi.clone());
    let d = q.dim();
    if d > cap {
        return Err(UflError::SearchTooLarge { dim: d, cap, class: class.to_string() });
    }
    let empty = MultiplierResult { m: m.to_vec(), kappa: hi.clone(), dimension: d, subspaces: Vec::new() };
    if d % 2 == 1 {
        return Ok(empty);
    }
    let sets = q.exactness_sets(m);
    if d == 0 {
        let zero = Subspace::zero(0);
        let subspaces = if Quotient::is_exact(&sets, &zero) { vec![zero] } else { Vec::new() };
        return Ok(MultiplierResult { subspaces, ..empty });
    }
    let h = residue_form(space, form, &q)?;
    let ctx = space.ctx();
    let scalars: Vec<Gf> = ctx.subfield(2);
    let simple: Vec<(usize, Vec<Vector>)> = simple_types(space)
        .iter()
        .map(|phi| (phi.len() - 1, poly_of_operator(&q.g_op, phi)))
        .collect();
    let target = d / 2;
    let mut levels: Vec<HashSet<Subspace>> = vec![HashSet::new(); target + 1];
    levels[0].insert(Subspace::zero(d));
    for dim in 0..target {
        let current: Vec<Subspace> = {
            let mut v: Vec<Subspace> = levels[dim].iter().cloned().collect();
            v.sort();
            v
        };
        for w in current {
            for (deg, phi_op) in &simple {
                if dim + deg > target {
                    continue;
                }
                // S = {x : t x in W, phi(gamma) x in W}
                let mut rows: Vec<Vector> = Vec::new();
                let nonpivots: Vec<usize> = (0..d).filter(|c| !w.pivots().contains(c)).collect();
                let img_t: Vec<Vector> = q.t_op.iter().map(|c| w.reduce(c)).collect();
                let img_p: Vec<Vector> = phi_op.iter().map(|c| w.reduce(c)).collect();
                for &r in &nonpivots {
                    rows.push((0..d).map(|a| img_t[a][r]).collect());
                    rows.push((0..d).map(|a| img_p[a][r]).collect());
                }
                let kernel = if rows.is_empty() {
                    (0..d)
                        .map(|a| (0..d).map(|b| if a == b { ctx.one() } else { ctx.zero() }).collect())
                        .collect()
                } else {
                    fqlinalg::kernel(&rows, d, ctx)
                };
                let mut comp: Vec<Vector> = kernel.iter().map(|v| w.reduce(v)).collect();
                fqlinalg::rref(&mut comp);
                if comp.is_empty() {
                    continue;
                }
                for v in all_vectors(&comp, &scalars) {
                    let mut gens = vec![v.clone()];
                    let mut cur = v;
                    for _ in 1..*deg {
                        cur = Quotient::apply(&q.g_op, &cur);
                        gens.push(cur.clone());
                    }
                    let w2 = w.extend(&gens);
                    if w2.dim() != dim + deg {
                        return Err(UflError::InconsistentInvariants(format!(
                            "simple extension changed dimension by {} instead of {deg}",
                            w2.dim() - dim
                        )));
                    }
                    if is_isotropic(&h, &w2) {
                        levels[dim + deg].insert(w2);
                    }
                }
            }
        }
    }
    let mut subspaces: Vec<Subspace> = levels[target].iter().filter(|w| Quotient::is_exact(&sets, w)).cloned().collect();
    subspaces.sort();
    Ok(MultiplierResult { subspaces, ..empty })
}

/// Result of an enumeration over all multipliers.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub count: u64,
    pub per_multiplier: Vec<MultiplierResult>,
}

/// Count self-dual `A_J`-lattices for `form`.
pub fn enumerate_selfdual(space: &Space, inv: &Invariants, form: &HermitianForm, cap: usize) -> Result<Enumeration> {
    let class = class_label(&form.class);
    let ms = search_window(inv, form, 0);
    let per: Vec<Result<MultiplierResult>> =
        ms.par_iter().map(|m| enumerate_pruned_one(space, inv, form, m, cap, &class)).collect();
    let per: Vec<MultiplierResult> = per.into_iter().collect::<Result<_>>()?;
    Ok(Enumeration { count: per.iter().map(|r| r.subspaces.len() as u64).sum(), per_multiplier: per })
}

/// Canonical lattices found by [`enumerate_selfdual`], sorted.
pub fn lift_all(space: &Space, inv: &Invariants, form: &HermitianForm, en: &Enumeration) -> Result<Vec<Lattice>> {
    let mut out = Vec::new();
    for r in &en.per_multiplier {
        let Some((lo, hi)) = sandwich_bounds(inv, form, &r.m) else { continue };
        let q = Quotient::new(space, lo, hi);
        for w in &r.subspaces {
            out.push(q.lift(space, w)?);
        }
    }
    out.sort_by_key(|l| format!("{:?}", l.matrix()));
    Ok(out)
}

/// Naive count: all subspaces of `L / a L`, filtered by stability,
/// exactness and the Gram-matrix self-duality test.
pub fn enumerate_selfdual_naive(space: &Space, inv: &Invariants, form: &HermitianForm) -> Result<u64> {
    enumerate_selfdual_naive_widened(space, inv, form, 0)
}

/// The naive count with every multiplier range widened by `widen` steps.
pub fn enumerate_selfdual_naive_widened(space: &Space, inv: &Invariants, form: &HermitianForm, widen: i64) -> Result<u64> {
    let wd = window_dimension(inv);
    if wd > NAIVE_MAX_DIM {
        return Err(UflError::SearchTooLarge { dim: wd, cap: NAIVE_MAX_DIM, class: class_label(&form.class) });
    }
    let mut total = 0u64;
    let mut seen: HashSet<Lattice> = HashSet::new();
    for m in search_window(inv, form, widen) {
        let lo: Vec<i64> = m.iter().map(|&x| -x).collect();
        let hi: Vec<i64> = (0..inv.len()).map(|x| inv.a[x] - m[x]).collect();
        let q = Quotient::new(space, lo, hi);
        let sets = q.exactness_sets(&m);
        for w in all_subspaces(q.dim(), &space.ctx().subfield(2)) {
            if !q.is_stable(&w) || !Quotient::is_exact(&sets, &w) {
                continue;
            }
            let lat = q.lift(space, &w)?;
            if form.is_selfdual(space, &lat)? && seen.insert(lat) {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// Every subspace of `F^d`, `F` given by its element list.
pub fn all_subspaces(d: usize, scalars: &[Gf]) -> Vec<Subspace> {
    let ctx = scalars[0].ctx();
    let mut out = vec![Subspace::zero(d)];
    for k in 1..=d {
        for pivots in combinations(d, k) {
            // free slots: row i, column c > pivots[i], c not a pivot
            let slots: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| ((pivots[i] + 1)..d).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                .collect();
            let total = scalars.len().pow(slots.len() as u32);
            for idx in 0..total {
                let mut rows = vec![vec![ctx.zero(); d]; k];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i][p] = ctx.one();
                }
                let mut rest = idx;
                for &(i, c) in &slots {
                    rows[i][c] = scalars[rest % scalars.len()];
                    rest /= scalars.len();
                }
                out.push(Subspace::span(d, &rows));
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn class_label(lambda: &[u8]) -> String {
    lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl std::hash::Hash for Lattice {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        format!("{:?}", self.matrix()).hash(state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chardata::{Coeff, Datum, FactorSpec};

    fn node(p: u32, k: i64) -> Datum {
        Datum::from_specs(
            p,
            &[
                FactorSpec { id: "1".into(), e: 1, f: 1, gamma: vec![] },
                FactorSpec { id: "2".into(), e: 1, f: 1, gamma: vec![(k, 0, Coeff::Eps)] },
            ],
        )
        .unwrap()
    }

    fn counts(d: &Datum, j: &[usize], lambda: &[u8]) -> (u64, u64) {
        let inv = d.invariants(j).unwrap();
        let space = Space::new(d, &inv);
        let form = HermitianForm::for_class(d, &inv, lambda).unwrap();
        let pruned = enumerate_selfdual(&space, &inv, &form, DEFAULT_ENUM_CAP).unwrap();
        let naive = enumerate_selfdual_naive(&space, &inv, &form).unwrap();
        (pruned.count, naive)
    }

    #[test]
    fn node3_counts() {
        let d = node(3, 1);
        assert_eq!(counts(&d, &[0, 1], &[0, 0]), (1, 1));
        assert_eq!(counts(&d, &[0, 1], &[1, 1]), (4, 4));
        assert_eq!(counts(&d, &[0, 1], &[0, 1]), (0, 0));
        assert_eq!(counts(&d, &[0, 1], &[1, 0]), (0, 0));
        assert_eq!(counts(&d, &[0], &[0]), (1, 1));
        assert_eq!(counts(&d, &[0], &[1]), (0, 0));
    }

    #[test]
    fn tac3_pruned_matches_naive() {
        let d = node(3, 2);
        for lambda in [[0, 0], [1, 1], [0, 1], [1, 0]] {
            let (a, b) = counts(&d, &[0, 1], &lambda);
            assert_eq!(a, b, "class {lambda:?}");
        }
    }

    #[test]
    fn lifted_lattices_are_selfdual_and_stable() {
        let d = node(3, 1);
        let inv = d.invariants(&[0, 1]).unwrap();
        let space = Space::new(&d, &inv);
        let form = HermitianForm::for_class(&d, &inv, &[1, 1]).unwrap();
        let en = enumerate_selfdual(&space, &inv, &form, DEFAULT_ENUM_CAP).unwrap();
        let lats = lift_all(&space, &inv, &form, &en).unwrap();
        assert_eq!(lats.len(), 4);
        for l in &lats {
            assert!(l.is_stable(&space).unwrap());
            assert!(form.is_selfdual(&space, l).unwrap());
            assert_eq!(form.dual(&space, l).unwrap(), *l);
        }
    }

    #[test]
    fn search_too_large() {
        let d = node(3, 4);
        let inv = d.invariants(&[0, 1]).unwrap();
        let space = Space::new(&d, &inv);
        let form = HermitianForm::for_class(&d, &inv, &inv.lambda0.clone()).unwrap();
        assert!(matches!(
            enumerate_selfdual(&space, &inv, &form, 2),
            Err(UflError::SearchTooLarge { .. })
        ));
        assert!(matches!(enumerate_selfdual_naive(&space, &inv, &form), Err(UflError::SearchTooLarge { .. })));
    }

    #[test]
    fn subspace_counts() {
        let k = crate::local::GfCtx::get(3, 2);
        let f9 = k.subfield(2);
        // Gaussian binomials over F_9: 1 + 91 + 91 + 1 subspaces of F_9^3
        assert_eq!(all_subspaces(3, &f9).len(), 184);
    }
}
