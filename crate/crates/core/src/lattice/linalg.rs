//! Linear algebra over `F' = F_{q^2}((t))` with precision tracking: column
//! Hermite forms over `O_F'`, inverses and lattice membership.

use crate::error::{Result, UflError};
use crate::local::{Matrix, Series, EXACT};

fn zero_like(s: &Series) -> Series {
    Series::zero(s.ctx())
}

/// Index and valuation of the entry of least valuation among `entries`
/// (first one on ties). Fails if a zero-at-precision entry could hide a
/// smaller valuation.
fn min_valuation(entries: &[(usize, &Series)]) -> Result<Option<(usize, i64)>> {
    let mut best: Option<(usize, i64)> = None;
    let mut floor = EXACT;
    for &(idx, s) in entries {
        if s.is_exact_zero() {
            continue;
        }
        if s.is_zero_at_prec() {
            floor = floor.min(s.prec());
            continue;
        }
        let v = s.valuation()?;
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((idx, v));
        }
    }
    match best {
        Some((_, v)) if v > floor => Err(UflError::PrecisionExhausted(format!(
            "pivot valuation {v} not certified below precision {floor}"
        ))),
        None if floor < EXACT => Err(UflError::PrecisionExhausted(format!(
            "no nonzero pivot known below precision {floor}"
        ))),
        other => Ok(other),
    }
}

fn axpy(col: &mut [Series], q: &Series, src: &[Series]) {
    for (x, y) in col.iter_mut().zip(src) {
        if !y.is_exact_zero() {
            *x = &*x - &(q * y);
        }
    }
}

/// Column Hermite form of an `n x K` matrix (`K >= n`) of full row rank:
/// lower triangular, pivots exactly `t^k`, entries left of a pivot `t^k`
/// reduced to exponents `< k`. The result is exact and depends only on the
/// `O_F'`-span of the columns.
pub fn hermite(m: &Matrix<Series>, cap: i64) -> Result<Matrix<Series>> {
    let n = m.rows();
    let mut cols = m.columns();
    if cols.len() < n {
        return Err(UflError::RankDeficient);
    }
    let mut exps = Vec::with_capacity(n);
    for r in 0..n {
        let entries: Vec<(usize, &Series)> = (r..cols.len()).map(|c| (c, &cols[c][r])).collect();
        let Some((pc, v)) = min_valuation(&entries)? else {
            return Err(UflError::RankDeficient);
        };
        cols.swap(r, pc);
        let unit = cols[r][r].shift(-v);
        let uinv = unit.inv(cap)?;
        for x in cols[r].iter_mut() {
            *x = &*x * &uinv;
        }
        let ctx = cols[r][r].ctx();
        cols[r][r] = Series::t_pow(ctx, v);
        let pivot_col = cols[r].clone();
        for c in r + 1..cols.len() {
            if cols[c][r].is_exact_zero() {
                continue;
            }
            let q = cols[c][r].shift(-v);
            axpy(&mut cols[c], &q, &pivot_col);
            cols[c][r] = zero_like(&pivot_col[r]);
        }
        exps.push(v);
    }
    for c in n..cols.len() {
        if let Some(bad) = cols[c].iter().find(|x| !x.is_zero_at_prec()) {
            return Err(UflError::PrecisionExhausted(format!("surplus column not reduced to zero: {bad}")));
        }
    }
    cols.truncate(n);
    for r in 0..n {
        let k = exps[r];
        let pivot_col = cols[r].clone();
        for c in 0..r {
            let x = &cols[c][r];
            if x.prec() < k {
                return Err(UflError::PrecisionExhausted(format!(
                    "entry known to t^{} but pivot is t^{k}",
                    x.prec()
                )));
            }
            let q = x.shift(-k).integral_part();
            let rem = x.window(i64::MIN / 4, k);
            if !q.is_zero_at_prec() {
                axpy(&mut cols[c], &q, &pivot_col);
            }
            cols[c][r] = rem;
        }
    }
    for (c, col) in cols.iter_mut().enumerate() {
        for x in col.iter_mut().take(c) {
            *x = zero_like(x);
        }
    }
    Ok(Matrix::from_columns(&cols))
}

/// Inverse of a square matrix by Gauss-Jordan elimination with pivots of
/// least valuation.
pub fn inverse(m: &Matrix<Series>, cap: i64) -> Result<Matrix<Series>> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let ctx = m.get(0, 0).ctx();
    let mut rows: Vec<Vec<Series>> = (0..n)
        .map(|r| {
            let mut row: Vec<Series> = (0..n).map(|c| m.get(r, c).clone()).collect();
            row.extend((0..n).map(|c| if c == r { Series::one(ctx) } else { Series::zero(ctx) }));
            row
        })
        .collect();
    for c in 0..n {
        let entries: Vec<(usize, &Series)> = (c..n).map(|r| (r, &rows[r][c])).collect();
        let Some((pr, _)) = min_valuation(&entries)? else {
            return Err(UflError::RankDeficient);
        };
        rows.swap(c, pr);
        let pinv = rows[c][c].inv(cap)?;
        for x in rows[c].iter_mut() {
            *x = &*x * &pinv;
        }
        let prow = rows[c].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == c || row[c].is_exact_zero() {
                continue;
            }
            let f = row[c].clone();
            axpy(row, &f, &prow);
        }
    }
    Ok(Matrix::from_fn(n, n, |r, c| rows[r][n + c].clone()))
}

/// Solve `H y = x` for a lower-triangular Hermite matrix; `None` when the
/// solution is not integral.
pub fn solve_integral(h: &Matrix<Series>, x: &[Series]) -> Result<Option<Vec<Series>>> {
    let n = h.rows();
    let mut y: Vec<Series> = Vec::with_capacity(n);
    for r in 0..n {
        let mut res = x[r].clone();
        for (c, yc) in y.iter().enumerate() {
            let hc = h.get(r, c);
            if !hc.is_exact_zero() {
                res = &res - &(hc * yc);
            }
        }
        let k = h.get(r, r).valuation()?;
        if res.is_zero_at_prec() {
            if res.prec() < k {
                return Err(UflError::PrecisionExhausted("membership undetermined".into()));
            }
        } else if res.valuation()? < k {
            return Ok(None);
        }
        y.push(res.shift(-k));
    }
    Ok(Some(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::GfCtx;

    #[test]
    fn hermite_examples() {
        let k = GfCtx::get(3, 2);
        let one = Series::one(k);
        let z = Series::zero(k);
        let t = Series::t_pow(k, 1);
        let id = Matrix::from_columns(&[vec![one.clone(), z.clone()], vec![z.clone(), one.clone()]]);
        assert_eq!(hermite(&id, 20).unwrap(), id);
        // columns (t e1, e1 + e2)
        let m = Matrix::from_columns(&[vec![t.clone(), z.clone()], vec![one.clone(), one.clone()]]);
        let h = hermite(&m, 20).unwrap();
        assert_eq!(h.column(0), vec![one.clone(), one.clone()]);
        assert_eq!(h.column(1), vec![z.clone(), t.clone()]);
        assert_eq!(hermite(&h, 20).unwrap(), h);
    }

    #[test]
    fn inverse_round_trip() {
        let k = GfCtx::get(5, 2);
        let g = k.generator();
        let a = Matrix::from_columns(&[
            vec![Series::monomial(g, 1), Series::one(k)],
            vec![Series::one(k), Series::monomial(g, -1)],
        ]);
        let inv = inverse(&a, 30).unwrap();
        let prod = a.mul(&inv);
        for r in 0..2 {
            for c in 0..2 {
                let expect = if r == c { Series::one(k) } else { Series::zero(k) };
                assert!(prod.get(r, c).agrees_with(&expect));
            }
        }
    }
}
