//! Operations producing new data from old ones: small perturbations of the
//! characteristic polynomials, common translations and unit scalings.

use rand::Rng;

use crate::chardata::Datum;
use crate::error::Result;
use crate::local::{Gf, Poly, Series, Tame, EXACT};

/// Random polynomial in `t` over `F_p` with exponents in `[lo, hi]`.
pub fn random_fp_series<R: Rng>(datum: &Datum, rng: &mut R, lo: i64, hi: i64) -> Series {
    let ctx = datum.ctx();
    let p = datum.p() as i64;
    let terms: Vec<(i64, Gf)> = (lo..=hi).map(|k| (k, ctx.from_int(rng.gen_range(0..p)))).collect();
    Series::from_terms(ctx, &terms, EXACT)
}

/// Random unit of `O_F = F_p[[t]]`, a polynomial of degree `<= deg`.
pub fn random_fp_unit<R: Rng>(datum: &Datum, rng: &mut R, deg: i64) -> Series {
    let ctx = datum.ctx();
    let p = datum.p() as i64;
    let c0 = ctx.from_int(rng.gen_range(1..p));
    &Series::constant(c0) + &random_fp_series(datum, rng, 1, deg)
}

fn rebuild(datum: &Datum, gammas: Vec<Tame>) -> Result<Datum> {
    let items = datum
        .factors()
        .iter()
        .zip(gammas)
        .map(|(f, g)| (f.id.clone(), f.ext.clone(), g))
        .collect();
    Ok(Datum::from_gammas(datum.field().clone(), items)?.with_precision_override(datum.precision_override()))
}

/// `gamma_i -> gamma_i + v` for every factor, `v` in `F'`.
pub fn translate(datum: &Datum, v: &Series) -> Result<Datum> {
    let gammas = datum.factors().iter().map(|f| &f.gamma + &Tame::from_base(&f.ext, v)).collect();
    rebuild(datum, gammas)
}

/// `gamma_i -> u gamma_i` for every factor.
pub fn scale(datum: &Datum, u: &Series) -> Result<Datum> {
    let gammas = datum.factors().iter().map(|f| &f.gamma * &Tame::from_base(&f.ext, u)).collect();
    rebuild(datum, gammas)
}

/// Replace each `P_i` by `P_i + t^m R_i` with random `R_i` of the same
/// parity type and degree `< n_i`, and each `gamma_i` by the root of the
/// new polynomial obtained by Newton iteration from `gamma_i`.
pub fn perturb<R: Rng>(datum: &Datum, m: i64, rng: &mut R) -> Result<Datum> {
    let eps = Series::constant(datum.field().eps());
    let mut gammas = Vec::new();
    for f in datum.factors() {
        let n = f.n();
        let mut coeffs: Vec<Series> = f.poly.coeffs().to_vec();
        for (k, c) in coeffs.iter_mut().enumerate().take(n) {
            let mut r = random_fp_series(datum, rng, m, m + 2);
            if (n - k) % 2 == 1 {
                r = &r * &eps;
            }
            *c = &*c + &r;
        }
        let q = Poly::new(coeffs);
        let dq = q.derivative();
        let e = f.e() as i64;
        let cap = e * (4 * m + 20);
        let mut g = f.gamma.clone();
        for _ in 0..8 {
            let step = &g.eval_base_poly(&q) * &g.eval_base_poly(&dq).inv(cap)?;
            g = (&g - &step).truncate(cap);
        }
        let keep = e * (2 * m + 10);
        let s = g.truncate(keep).pi_series().clone().into_exact();
        gammas.push(Tame::from_pi_series(&f.ext, s));
    }
    rebuild(datum, gammas)
}
