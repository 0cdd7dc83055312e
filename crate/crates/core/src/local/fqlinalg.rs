//! Linear algebra over a finite field: reduced echelon forms, kernels,
//! inverses and canonical subspaces.

use super::gf::{Gf, GfCtx};

pub type Vector = Vec<Gf>;

/// Reduce `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot columns.
pub fn rref(rows: &mut Vec<Vector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vector]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows with `ncols` columns.
pub fn kernel(rows: &[Vector], ncols: usize, ctx: &'static GfCtx) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![ctx.zero(); ncols];
            v[fc] = ctx.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[fc];
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix given by rows.
pub fn inverse(rows: &[Vector], ctx: &'static GfCtx) -> Option<Vec<Vector>> {
    let n = rows.len();
    let mut aug: Vec<Vector> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..n).map(|j| if i == j { ctx.one() } else { ctx.zero() }));
            v
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(rows: &[Vector], v: &[Gf]) -> Vector {
    rows.iter()
        .map(|r| r.iter().zip(v).fold(v[0].ctx().zero(), |acc, (&a, &b)| acc + a * b))
        .collect()
}

pub fn is_zero_vec(v: &[Gf]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// A subspace of `F^dim` stored as its reduced row echelon basis, which is
/// canonical: equal subspaces have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    dim_ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(dim_ambient: usize) -> Self {
        Subspace { dim_ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(dim_ambient: usize, vectors: &[Vector]) -> Self {
        let mut rows: Vec<Vector> = vectors.to_vec();
        let pivots = rref(&mut rows);
        Subspace { dim_ambient, basis: rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the echelon basis; zero iff `v` lies in
    /// the subspace.
    pub fn reduce(&self, v: &[Gf]) -> Vector {
        let mut w = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = w[pc];
            if !f.is_zero() {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x -= f * y;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Gf]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    pub fn extend(&self, vectors: &[Vector]) -> Self {
        let mut all = self.basis.clone();
        all.extend(vectors.iter().cloned());
        Subspace::span(self.dim_ambient, &all)
    }

    /// Coordinates in the echelon basis of a vector known to lie inside.
    pub fn coordinates(&self, v: &[Gf]) -> Vector {
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_inverse() {
        let k = GfCtx::get(5, 1);
        let e = |x: i64| k.from_int(x);
        let a = vec![vec![e(1), e(2), e(3)], vec![e(2), e(1), e(1)]];
        let ker = kernel(&a, 3, k);
        assert_eq!(ker.len(), 1);
        assert!(is_zero_vec(&mat_vec(&a, &ker[0])));
        let m = vec![vec![e(1), e(2)], vec![e(3), e(4)]];
        let inv = inverse(&m, k).unwrap();
        let prod: Vec<Vector> = (0..2)
            .map(|i| (0..2).map(|j| m[i][0] * inv[0][j] + m[i][1] * inv[1][j]).collect())
            .collect();
        assert_eq!(prod, vec![vec![e(1), e(0)], vec![e(0), e(1)]]);
    }

    #[test]
    fn subspace_is_canonical() {
        let k = GfCtx::get(3, 2);
        let g = k.generator();
        let o = k.one();
        let z = k.zero();
        let s1 = Subspace::span(3, &[vec![o, g, z], vec![z, o, o]]);
        let s2 = Subspace::span(3, &[vec![o, g + o, o], vec![z, g, g]]);
        assert_eq!(s1, s2);
        assert!(s1.contains(&[o, g, z]));
        assert!(!s1.contains(&[z, z, o]));
    }
}
