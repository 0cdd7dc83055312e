//! The `F'`-vector space `E'_J = prod_{i in J} E'_i` with its coordinates,
//! and the lattices and hermitian forms living in it.

use std::sync::Arc;

use super::linalg;
use crate::chardata::{Datum, Invariants};
use crate::error::{Result, UflError};
use crate::local::{GfCtx, Matrix, Series, Tame, TameExt};

/// Coordinates on `E'_J`: factor blocks in the order of `J`, each in the
/// basis `pi^j omega^l`.
#[derive(Clone, Debug)]
pub struct Space {
    pub j: Vec<usize>,
    exts: Vec<Arc<TameExt>>,
    offsets: Vec<usize>,
    n: usize,
    gammas: Vec<Tame>,
    ctx: &'static GfCtx,
    precision: i64,
}

impl Space {
    pub fn new(datum: &Datum, inv: &Invariants) -> Space {
        let exts: Vec<Arc<TameExt>> = inv.idx.iter().map(|&i| datum.factors()[i].ext.clone()).collect();
        let mut offsets = Vec::new();
        let mut n = 0;
        for e in &exts {
            offsets.push(n);
            n += e.degree();
        }
        Space {
            j: inv.idx.clone(),
            gammas: inv.idx.iter().map(|&i| datum.factors()[i].gamma.clone()).collect(),
            exts,
            offsets,
            n,
            ctx: datum.ctx(),
            precision: inv.precision,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> usize {
        self.exts.len()
    }

    pub fn ext(&self, x: usize) -> &Arc<TameExt> {
        &self.exts[x]
    }

    pub fn offset(&self, x: usize) -> usize {
        self.offsets[x]
    }

    pub fn ctx(&self) -> &'static GfCtx {
        self.ctx
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Precision cap for inverses, in powers of `t`.
    pub fn cap(&self) -> i64 {
        2 * self.precision
    }

    pub fn gamma(&self) -> &[Tame] {
        &self.gammas
    }

    pub fn to_elements(&self, v: &[Series]) -> Vec<Tame> {
        self.exts
            .iter()
            .zip(&self.offsets)
            .map(|(ext, &o)| Tame::from_coords(ext, &v[o..o + ext.degree()]))
            .collect()
    }

    pub fn from_elements(&self, xs: &[Tame]) -> Vec<Series> {
        xs.iter().flat_map(|x| x.coords()).collect()
    }

    /// Coordinates of `pi_x^s omega^l` in factor `x`.
    pub fn basis_vector(&self, x: usize, s: i64, l: usize) -> Vec<Series> {
        let ext = &self.exts[x];
        let els: Vec<Tame> = (0..self.parts())
            .map(|y| {
                if y == x {
                    Tame::monomial(ext, ext.omega_pow(l), s)
                } else {
                    Tame::zero(&self.exts[y])
                }
            })
            .collect();
        self.from_elements(&els)
    }

    /// Matrix of multiplication by `w` in `E'_J`.
    pub fn mult_matrix(&self, w: &[Tame]) -> Matrix<Series> {
        let mut m = Matrix::filled(self.n, self.n, Series::zero(self.ctx));
        for (x, wx) in w.iter().enumerate() {
            let block = wx.mult_matrix();
            let o = self.offsets[x];
            for r in 0..block.rows() {
                for c in 0..block.cols() {
                    m.set(o + r, o + c, block.get(r, c).clone());
                }
            }
        }
        m
    }

    /// Columns `gamma_J^k`, `k < n_J`: a basis of the order `A_J`.
    pub fn power_basis(&self) -> Matrix<Series> {
        let cols: Vec<Vec<Series>> = (0..self.n)
            .map(|k| {
                let els: Vec<Tame> = self.gammas.iter().map(|g| g.pow(k as u32)).collect();
                self.from_elements(&els)
            })
            .collect();
        Matrix::from_columns(&cols)
    }

    pub fn order(&self) -> Result<Lattice> {
        Lattice::from_generators(self, &self.power_basis())
    }

    pub fn maximal_order(&self) -> Lattice {
        self.pi_power_lattice(&vec![0; self.parts()])
    }

    /// `prod_x pi_x^{k_x} O_{E'_x}`.
    pub fn pi_power_lattice(&self, k: &[i64]) -> Lattice {
        let mut cols = Vec::with_capacity(self.n);
        for x in 0..self.parts() {
            let ext = &self.exts[x];
            for idx in 0..ext.degree() {
                let f = ext.f() as usize;
                let (j, l) = (idx / f, idx % f);
                cols.push(self.basis_vector(x, k[x] + j as i64, l));
            }
        }
        Lattice::from_generators(self, &Matrix::from_columns(&cols)).expect("diagonal lattice is well formed")
    }

    pub fn apply_tau(&self, v: &[Series]) -> Vec<Series> {
        let els: Vec<Tame> = self.to_elements(v).iter().map(|x| x.tau()).collect();
        self.from_elements(&els)
    }

    pub fn multiply(&self, w: &[Tame], v: &[Series]) -> Vec<Series> {
        let els: Vec<Tame> = self.to_elements(v).iter().zip(w).map(|(x, y)| x * y).collect();
        self.from_elements(&els)
    }
}

/// An `O_F'`-lattice of full rank in `E'_J`, stored as its exact column
/// Hermite form; equality of lattices is equality of these matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    h: Matrix<Series>,
}

impl Lattice {
    /// Lattice spanned by the columns of `gens` (`n x K`, `K >= n`).
    pub fn from_generators(space: &Space, gens: &Matrix<Series>) -> Result<Lattice> {
        Ok(Lattice { h: linalg::hermite(gens, space.cap())? })
    }

    pub fn matrix(&self) -> &Matrix<Series> {
        &self.h
    }

    pub fn columns(&self) -> Vec<Vec<Series>> {
        self.h.columns()
    }

    /// Pivot exponents; their sum is `v(det)`.
    pub fn pivot_exponents(&self) -> Vec<i64> {
        (0..self.h.rows()).map(|r| self.h.get(r, r).valuation().expect("exact pivot")).collect()
    }

    pub fn det_valuation(&self) -> i64 {
        self.pivot_exponents().iter().sum()
    }

    pub fn contains(&self, v: &[Series]) -> Result<bool> {
        Ok(linalg::solve_integral(&self.h, v)?.is_some())
    }

    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool> {
        for col in other.columns() {
            if !self.contains(&col)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `dim_{F_{q^2}} (self / other)` for `other` inside `self`.
    pub fn colength_of(&self, other: &Lattice) -> i64 {
        other.det_valuation() - self.det_valuation()
    }

    pub fn scale_t(&self, k: i64) -> Lattice {
        Lattice { h: self.h.map(|x| x.shift(k)) }
    }

    /// Image under multiplication by an element of `E'_J`.
    pub fn multiply(&self, space: &Space, w: &[Tame]) -> Result<Lattice> {
        let cols: Vec<Vec<Series>> = self.columns().iter().map(|c| space.multiply(w, c)).collect();
        Lattice::from_generators(space, &Matrix::from_columns(&cols))
    }

    pub fn tau(&self, space: &Space) -> Result<Lattice> {
        let cols: Vec<Vec<Series>> = self.columns().iter().map(|c| space.apply_tau(c)).collect();
        Lattice::from_generators(space, &Matrix::from_columns(&cols))
    }

    pub fn sum(&self, space: &Space, other: &Lattice) -> Result<Lattice> {
        let mut cols = self.columns();
        cols.extend(other.columns());
        Lattice::from_generators(space, &Matrix::from_columns(&cols))
    }

    /// Is `gamma_J * self` contained in `self`?
    pub fn is_stable(&self, space: &Space) -> Result<bool> {
        for col in self.columns() {
            if !self.contains(&space.multiply(space.gamma(), &col))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `{x : x self ⊆ A_J}` for a gamma-stable lattice.
    pub fn ideal_inverse(&self, space: &Space) -> Result<Lattice> {
        if !self.is_stable(space)? {
            return Err(UflError::NotStable);
        }
        let n = space.dim();
        let binv = linalg::inverse(&space.power_basis(), space.cap())?;
        let mut rows: Vec<Vec<Series>> = Vec::with_capacity(n * n);
        for col in self.columns() {
            let c = binv.mul(&space.mult_matrix(&space.to_elements(&col)));
            for r in 0..n {
                rows.push((0..n).map(|k| c.get(r, k).clone()).collect());
            }
        }
        // the O-span of the rows, as columns of the transpose
        let h = linalg::hermite(&Matrix::from_columns(&rows), space.cap())?;
        let r0 = h.transpose();
        let inv = linalg::inverse(&r0, space.cap())?;
        Lattice::from_generators(space, &inv)
    }
}

/// The hermitian form `Phi_c(x, y) = sum_i Tr(c_i tau(x_i) y_i)` on `E'_J`.
#[derive(Clone, Debug)]
pub struct HermitianForm {
    pub c: Vec<Tame>,
    pub class: Vec<u8>,
    /// `c_i^{-1} D^{-1} = pi^{-b_i} O`, i.e. `b_i = v(c_i) + e_i - 1`.
    pub b: Vec<i64>,
}

impl HermitianForm {
    pub fn new(datum: &Datum, inv: &Invariants, c: Vec<Tame>) -> Result<HermitianForm> {
        let mut class = Vec::with_capacity(c.len());
        let mut b = Vec::with_capacity(c.len());
        for (x, ci) in c.iter().enumerate() {
            class.push(datum.disc_class(inv.idx[x], ci)?);
            b.push(ci.val()? + inv.e[x] as i64 - 1);
        }
        Ok(HermitianForm { c, class, b })
    }

    /// The canonical form of class `lambda`.
    pub fn for_class(datum: &Datum, inv: &Invariants, lambda: &[u8]) -> Result<HermitianForm> {
        let form = HermitianForm::new(datum, inv, inv.class_form(lambda))?;
        debug_assert_eq!(form.class, lambda);
        Ok(form)
    }

    pub fn eval(&self, space: &Space, x: &[Series], y: &[Series]) -> Series {
        let xs = space.to_elements(x);
        let ys = space.to_elements(y);
        let mut acc = Series::zero(space.ctx());
        for ((c, a), b) in self.c.iter().zip(&xs).zip(&ys) {
            acc = &acc + &(&(c * &a.tau()) * b).trace();
        }
        acc
    }

    /// Matrix `S` with `Phi(x, y) = tau(x)^T S y` in coordinates.
    pub fn coordinate_matrix(&self, space: &Space) -> Matrix<Series> {
        let n = space.dim();
        let mut s = Matrix::filled(n, n, Series::zero(space.ctx()));
        for x in 0..space.parts() {
            let ext = space.ext(x);
            let f = ext.f() as usize;
            let o = space.offset(x);
            for a in 0..ext.degree() {
                for b in 0..ext.degree() {
                    let (ja, la) = (a / f, a % f);
                    let (jb, lb) = (b / f, b % f);
                    let coeff = ext.omega_pow(la).tau() * ext.omega_pow(lb);
                    let v = self.c[x].shift((ja + jb) as i64).scale(coeff).trace();
                    s.set(o + a, o + b, v);
                }
            }
        }
        s
    }

    /// Gram matrix `Phi(m_a, m_b)` of the lattice generators.
    pub fn gram(&self, space: &Space, m: &Lattice) -> Matrix<Series> {
        let s = self.coordinate_matrix(space);
        let mt: Matrix<Series> = Matrix::from_columns(&m.columns().iter().map(|c| space.apply_tau(c)).collect::<Vec<_>>());
        mt.transpose().mul(&s).mul(m.matrix())
    }

    /// `M^perp = {x : Phi(M, x) ⊆ O_F'}`.
    pub fn dual(&self, space: &Space, m: &Lattice) -> Result<Lattice> {
        let s = self.coordinate_matrix(space);
        let mt: Matrix<Series> = Matrix::from_columns(&m.columns().iter().map(|c| space.apply_tau(c)).collect::<Vec<_>>());
        let a = mt.transpose().mul(&s);
        let inv = linalg::inverse(&a, space.cap())?;
        Lattice::from_generators(space, &inv)
    }

    /// Gram matrix integral with unit determinant.
    pub fn is_selfdual(&self, space: &Space, m: &Lattice) -> Result<bool> {
        let g = self.gram(space, m);
        for r in 0..g.rows() {
            for c in 0..g.cols() {
                let x = g.get(r, c);
                if x.is_zero_at_prec() {
                    if x.prec() < 0 {
                        return Err(UflError::PrecisionExhausted("gram entry".into()));
                    }
                    continue;
                }
                if x.valuation()? < 0 {
                    return Ok(false);
                }
            }
        }
        let d = g.det();
        if d.is_zero_at_prec() {
            if d.prec() <= 0 {
                return Err(UflError::PrecisionExhausted("gram determinant".into()));
            }
            return Ok(false);
        }
        Ok(d.valuation()? == 0)
    }

    /// `w_i = 1 / (c_i P_i'(gamma_i) P_{J-i}(gamma_i))`, so that
    /// `M^perp = w tau(M)^{-1}` for every fractional ideal `M`.
    pub fn dual_multiplier(&self, datum: &Datum, inv: &Invariants, cap_pi: i64) -> Result<Vec<Tame>> {
        inv.idx
            .iter()
            .enumerate()
            .map(|(x, &i)| {
                let den = &(&self.c[x] * &datum.derivative_at(i)) * &datum.cofactor_at(&inv.idx, i);
                den.inv(cap_pi * inv.e[x] as i64)
            })
            .collect()
    }
}
