//! Per-class lattice counts and their endoscopic combinations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::chardata::{Datum, Invariants};
use crate::error::{Result, UflError};
use crate::lattice::enumerate::{self, DEFAULT_ENUM_CAP};
use crate::lattice::{HermitianForm, Space};
use crate::local::{Series, Tame, EXACT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumeratorKind {
    Pruned,
    Naive,
}

impl EnumeratorKind {
    pub fn name(self) -> &'static str {
        match self {
            EnumeratorKind::Pruned => "pruned",
            EnumeratorKind::Naive => "naive",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EngineOptions {
    pub enum_cap: usize,
    pub enumerator: EnumeratorKind,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { enum_cap: DEFAULT_ENUM_CAP, enumerator: EnumeratorKind::Pruned }
    }
}

/// A splitting of a set of factor indices into two nonempty parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
}

impl Partition {
    pub fn new(mut i1: Vec<usize>, mut i2: Vec<usize>) -> Result<Partition> {
        i1.sort_unstable();
        i2.sort_unstable();
        if i1.is_empty() || i2.is_empty() {
            return Err(UflError::schema("/partition", "both parts must be nonempty"));
        }
        if i1.iter().any(|x| i2.contains(x)) || i1.windows(2).any(|w| w[0] == w[1]) || i2.windows(2).any(|w| w[0] == w[1]) {
            return Err(UflError::schema("/partition", "parts must be disjoint lists of distinct ids"));
        }
        Ok(Partition { i1, i2 })
    }

    /// `I = I1 u I2`, sorted.
    pub fn union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.i1.iter().chain(&self.i2).copied().collect();
        all.sort_unstable();
        all
    }
}

/// `Lambda_k`: vectors in `(Z/2)^k` with even sum, in lexicographic order.
pub fn lambda_classes(k: usize) -> Vec<Vec<u8>> {
    all_classes(k).into_iter().filter(|l| l.iter().map(|&x| x as u32).sum::<u32>() % 2 == 0).collect()
}

/// All of `(Z/2)^k` in lexicographic order.
pub fn all_classes(k: usize) -> Vec<Vec<u8>> {
    (0..1u32 << k).map(|bits| (0..k).map(|i| ((bits >> (k - 1 - i)) & 1) as u8).collect()).collect()
}

/// Run `f` on the invariants of `J`, doubling the working precision on
/// precision failures up to sixteen times the initial value.
pub fn with_escalation<T>(datum: &Datum, j: &[usize], f: impl Fn(&Invariants) -> Result<T>) -> Result<T> {
    let base = datum.invariants(j)?;
    let mut err = match f(&base) {
        Err(e) if e.is_precision() => e,
        other => return other,
    };
    let mut prec = base.precision;
    while prec * 2 <= 16 * base.precision {
        prec *= 2;
        let inv = datum.invariants_at(j, prec)?;
        match f(&inv) {
            Err(e) if e.is_precision() => err = e,
            other => return other,
        }
    }
    Err(err)
}

fn count_form(space: &Space, inv: &Invariants, form: &HermitianForm, opts: &EngineOptions) -> Result<u64> {
    match opts.enumerator {
        EnumeratorKind::Pruned => Ok(enumerate::enumerate_selfdual(space, inv, form, opts.enum_cap)?.count),
        EnumeratorKind::Naive => enumerate::enumerate_selfdual_naive(space, inv, form),
    }
}

/// Number of self-dual `gamma_J`-stable lattices for the form `c` built
/// from the invariants by `build`.
pub fn count_with(
    datum: &Datum,
    j: &[usize],
    opts: &EngineOptions,
    build: impl Fn(&Invariants) -> Result<Vec<Tame>>,
) -> Result<u64> {
    with_escalation(datum, j, |inv| {
        let space = Space::new(datum, inv);
        let form = HermitianForm::new(datum, inv, build(inv)?)?;
        count_form(&space, inv, &form, opts)
    })
}

/// Count for an arbitrary class in `(Z/2)^J`, using the canonical form.
pub fn class_count(datum: &Datum, j: &[usize], lambda: &[u8], opts: &EngineOptions) -> Result<u64> {
    if lambda.len() != j.len() || lambda.iter().any(|&x| x > 1) {
        return Err(UflError::ClassNotAdmissible(format!("{lambda:?} is not a class for a set of size {}", j.len())));
    }
    count_with(datum, j, opts, |inv| Ok(inv.class_form(lambda)))
}

/// `O^lambda_{gamma_J}` for `lambda` in `Lambda_J`.
pub fn orbital(datum: &Datum, j: &[usize], lambda: &[u8], opts: &EngineOptions) -> Result<u64> {
    if lambda.iter().map(|&x| x as u32).sum::<u32>() % 2 != 0 {
        return Err(UflError::ClassNotAdmissible(format!(
            "class {} has odd total",
            enumerate::class_label(lambda)
        )));
    }
    class_count(datum, j, lambda, opts)
}

/// `O^lambda` for every `lambda` in `Lambda_J`, enumerated in parallel.
pub fn class_counts(datum: &Datum, j: &[usize], opts: &EngineOptions) -> Result<BTreeMap<Vec<u8>, u64>> {
    // warm the invariant cache once before fanning out
    datum.invariants(j)?;
    let classes = lambda_classes(j.len());
    let counts: Vec<Result<u64>> = classes.par_iter().map(|l| orbital(datum, j, l, opts)).collect();
    classes.into_iter().zip(counts).map(|(l, c)| Ok((l, c?))).collect()
}

/// The two endoscopic characters, `kappa_a(mu) = (-1)^{sum_{I_a} mu}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kappa {
    Kappa1,
    Kappa2,
}

impl Kappa {
    pub fn name(self) -> &'static str {
        match self {
            Kappa::Kappa1 => "kappa1",
            Kappa::Kappa2 => "kappa2",
        }
    }
}

/// `(lambda0_{I1}, lambda0_{I2})` laid out along `I1 u I2`.
pub fn kappa_shift(datum: &Datum, part: &Partition) -> Result<Vec<u8>> {
    let all = part.union();
    let mut shift = vec![0u8; all.len()];
    for p in [&part.i1, &part.i2] {
        let inv = datum.invariants(p)?;
        for (x, &i) in p.iter().enumerate() {
            let pos = all.iter().position(|&y| y == i).expect("index in union");
            shift[pos] = inv.lambda0[x];
        }
    }
    Ok(shift)
}

/// `O^kappa = sum_lambda kappa(lambda - shift) O^lambda`.
pub fn kappa_orbital(part: &Partition, counts: &BTreeMap<Vec<u8>, u64>, shift: &[u8], kappa: Kappa) -> BigInt {
    let all = part.union();
    let side = match kappa {
        Kappa::Kappa1 => &part.i1,
        Kappa::Kappa2 => &part.i2,
    };
    let mut total = BigInt::zero();
    for (lambda, &count) in counts {
        let parity: u32 = all
            .iter()
            .enumerate()
            .filter(|(_, i)| side.contains(i))
            .map(|(x, _)| ((lambda[x] + shift[x]) % 2) as u32)
            .sum();
        let term = BigInt::from(count);
        if parity.is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Per-part counts and `SO^H = (sum O^{lambda1}) (sum O^{lambda2})`.
pub fn stable_orbital(
    datum: &Datum,
    part: &Partition,
    opts: &EngineOptions,
) -> Result<(BigInt, [BTreeMap<Vec<u8>, u64>; 2])> {
    let c1 = class_counts(datum, &part.i1, opts)?;
    let c2 = class_counts(datum, &part.i2, opts)?;
    let s1: u64 = c1.values().sum();
    let s2: u64 = c2.values().sum();
    Ok((BigInt::from(s1) * BigInt::from(s2), [c1, c2]))
}

/// `r = sum_{i in I1, j in I2} r_ij` and `(-1)^r q^r`.
pub fn transfer_factor(datum: &Datum, part: &Partition) -> Result<(i64, BigInt)> {
    let mut r = 0;
    for &i in &part.i1 {
        for &j in &part.i2 {
            r += datum.resultant_valuation(i, j)?;
        }
    }
    let mut t = BigInt::one();
    for _ in 0..r {
        t *= -(datum.p() as i64);
    }
    Ok((r, t))
}

/// Everything that enters the identity `O^kappa = (-1)^r q^r SO^H`.
#[derive(Clone, Debug)]
pub struct FlReport {
    pub partition: Partition,
    pub counts: BTreeMap<Vec<u8>, u64>,
    pub shift: Vec<u8>,
    pub o_kappa: [BigInt; 2],
    pub part_counts: [BTreeMap<Vec<u8>, u64>; 2],
    pub so_h: BigInt,
    pub r: i64,
    pub transfer: BigInt,
    pub enumerator: EnumeratorKind,
    pub oracle: Option<OracleCheck>,
}

impl FlReport {
    pub fn verdict(&self) -> bool {
        let rhs = &self.transfer * &self.so_h;
        self.o_kappa.iter().all(|k| *k == rhs) && self.oracle.as_ref().is_none_or(|o| o.agree)
    }
}

/// Comparison of the pruned counts with the naive enumerator.
#[derive(Clone, Debug)]
pub struct OracleCheck {
    /// `(set, class, naive count)`; classes whose window is too large for
    /// the naive enumerator are absent.
    pub compared: Vec<(Vec<usize>, Vec<u8>, u64)>,
    pub skipped: usize,
    pub agree: bool,
}

pub fn verify_fl(datum: &Datum, part: &Partition, opts: &EngineOptions, oracle: bool) -> Result<FlReport> {
    let all = part.union();
    let counts = class_counts(datum, &all, opts)?;
    let shift = kappa_shift(datum, part)?;
    let k1 = kappa_orbital(part, &counts, &shift, Kappa::Kappa1);
    let k2 = kappa_orbital(part, &counts, &shift, Kappa::Kappa2);
    if k1 != k2 {
        return Err(UflError::InconsistentInvariants(format!(
            "the two endoscopic characters give {k1} and {k2}"
        )));
    }
    let (so_h, part_counts) = stable_orbital(datum, part, opts)?;
    let (r, transfer) = transfer_factor(datum, part)?;
    let oracle = if oracle {
        let naive = EngineOptions { enumerator: EnumeratorKind::Naive, ..*opts };
        let mut compared = Vec::new();
        let mut skipped = 0;
        let mut agree = true;
        for (set, table) in [(&all, &counts), (&part.i1, &part_counts[0]), (&part.i2, &part_counts[1])] {
            for (lambda, &count) in table {
                match orbital(datum, set, lambda, &naive) {
                    Ok(n) => {
                        agree &= n == count;
                        compared.push((set.clone(), lambda.clone(), n));
                    }
                    Err(UflError::SearchTooLarge { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        Some(OracleCheck { compared, skipped, agree })
    } else {
        None
    };
    Ok(FlReport {
        partition: part.clone(),
        counts,
        shift,
        o_kappa: [k1, k2],
        part_counts,
        so_h,
        r,
        transfer,
        enumerator: opts.enumerator,
        oracle,
    })
}

/// Random unit of `O_{E_i}` fixed by `tau`.
pub fn random_fixed_unit<R: Rng>(datum: &Datum, i: usize, rng: &mut R) -> Tame {
    let f = &datum.factors()[i];
    let fixed = datum.ctx().subfield(f.f());
    let nonzero: Vec<_> = fixed.iter().copied().filter(|x| !x.is_zero()).collect();
    let mut terms = vec![(0, nonzero[rng.gen_range(0..nonzero.len())])];
    for k in 1..=3 {
        terms.push((k, fixed[rng.gen_range(0..fixed.len())]));
    }
    Tame::from_pi_series(&f.ext, Series::from_terms(datum.ctx(), &terms, EXACT))
}

/// Counts with `c(lambda)` twisted componentwise by random `tau`-fixed
/// units and by `pi^{2k}` agree with the canonical count.
pub fn class_invariance_check<R: Rng>(
    datum: &Datum,
    j: &[usize],
    lambda: &[u8],
    trials: usize,
    rng: &mut R,
    opts: &EngineOptions,
) -> Result<bool> {
    let base = class_count(datum, j, lambda, opts)?;
    for _ in 0..trials {
        let units: Vec<Tame> = j.iter().map(|&i| random_fixed_unit(datum, i, rng)).collect();
        let twists: Vec<i64> = j.iter().map(|_| 2 * rng.gen_range(-1..=1i64)).collect();
        let n = count_with(datum, j, opts, |inv| {
            Ok(inv
                .class_form(lambda)
                .iter()
                .zip(&units)
                .zip(&twists)
                .map(|((c, u), &k)| (c * u).shift(k))
                .collect())
        })?;
        if n != base {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chardata::{Coeff, FactorSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two(p: u32, g1: Vec<(i64, i64, Coeff)>, g2: Vec<(i64, i64, Coeff)>) -> Datum {
        Datum::from_specs(
            p,
            &[
                FactorSpec { id: "1".into(), e: 1, f: 1, gamma: g1 },
                FactorSpec { id: "2".into(), e: 1, f: 1, gamma: g2 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn classes() {
        assert_eq!(lambda_classes(2), vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(all_classes(2).len(), 4);
        assert_eq!(lambda_classes(3).len(), 4);
    }

    #[test]
    fn node3_identity() {
        let d = two(3, vec![], vec![(1, 0, Coeff::Eps)]);
        let part = Partition::new(vec![0], vec![1]).unwrap();
        let rep = verify_fl(&d, &part, &EngineOptions::default(), true).unwrap();
        assert_eq!(rep.counts[&vec![0, 0]], 1);
        assert_eq!(rep.counts[&vec![1, 1]], 4);
        assert_eq!(rep.shift, vec![0, 0]);
        assert_eq!(rep.o_kappa[0], BigInt::from(-3));
        assert_eq!(rep.so_h, BigInt::from(1));
        assert_eq!(rep.transfer, BigInt::from(-3));
        assert!(rep.oracle.as_ref().unwrap().agree);
        assert!(rep.verdict());
        assert!(matches!(
            orbital(&d, &[0, 1], &[0, 1], &EngineOptions::default()),
            Err(UflError::ClassNotAdmissible(_))
        ));
    }

    #[test]
    fn splitmax_and_tac3() {
        let d = two(3, vec![(0, 0, Coeff::Eps)], vec![(1, 0, Coeff::Eps)]);
        let part = Partition::new(vec![0], vec![1]).unwrap();
        let rep = verify_fl(&d, &part, &EngineOptions::default(), false).unwrap();
        assert_eq!(rep.o_kappa[0], BigInt::from(1));
        assert_eq!(rep.transfer, BigInt::from(1));
        assert!(rep.verdict());
        let d = two(3, vec![], vec![(2, 0, Coeff::Eps)]);
        let rep = verify_fl(&d, &part, &EngineOptions::default(), true).unwrap();
        assert_eq!(rep.o_kappa[0], BigInt::from(9));
        assert_eq!(rep.so_h, BigInt::from(1));
        assert!(rep.verdict());
    }

    #[test]
    fn class_invariance() {
        let d = two(3, vec![], vec![(1, 0, Coeff::Eps)]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let opts = EngineOptions::default();
        assert!(class_invariance_check(&d, &[0, 1], &[1, 1], 5, &mut rng, &opts).unwrap());
        assert!(class_invariance_check(&d, &[0, 1], &[0, 0], 3, &mut rng, &opts).unwrap());
    }
}
