//! Sparse Gauss-Jordan elimination with full pivoting by `(valuation, size)`.
//!
//! Over the local ring the pivot is always an entry of minimal valuation, so every quotient
//! stays integral; the resulting reduced basis has identity columns at the pivots and
//! therefore spans a saturated lattice.

use super::Mat;
use crate::coeffs::{Field, Ring};

pub type SparseVec<E> = Vec<(usize, E)>;

/// `x + a * y` for sorted sparse vectors.
pub fn axpy<R: Ring>(ring: &R, x: &SparseVec<R::Elem>, a: &R::Elem, y: &SparseVec<R::Elem>) -> SparseVec<R::Elem> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cy = y.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if cx < cy {
            out.push(x[i].clone());
            i += 1;
        } else if cy < cx {
            let v = ring.mul(a, &y[j].1);
            if !ring.is_zero(&v) {
                out.push((cy, v));
            }
            j += 1;
        } else {
            let v = ring.add(&x[i].1, &ring.mul(a, &y[j].1));
            if !ring.is_zero(&v) {
                out.push((cx, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_get<E>(v: &SparseVec<E>, col: usize) -> Option<&E> {
    v.binary_search_by_key(&col, |e| e.0).ok().map(|k| &v[k].1)
}

pub fn dense_to_sparse<R: Ring>(ring: &R, v: &[R::Elem]) -> SparseVec<R::Elem> {
    v.iter().enumerate().filter(|(_, x)| !ring.is_zero(x)).map(|(i, x)| (i, x.clone())).collect()
}

pub fn sparse_to_dense<R: Ring>(ring: &R, v: &SparseVec<R::Elem>, n: usize) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn mat_rows_sparse<R: Ring>(ring: &R, m: &Mat<R::Elem>) -> Vec<SparseVec<R::Elem>> {
    (0..m.nrows()).map(|i| dense_to_sparse(ring, m.row(i))).collect()
}

/// Reduced row echelon form: row `i` has a one at column `pivots[i]` and zeros at all other pivots.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub rows: Vec<SparseVec<E>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

type Candidate = ((i64, u64), usize, usize);

fn best_entry<F: Field>(ring: &F, row: &SparseVec<F::Elem>) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for (c, x) in row {
        let cand = (ring.pivot_key(x), row.len(), *c);
        if best.as_ref().is_none_or(|b| (cand.0, cand.2) < (b.0, b.2)) {
            best = Some(cand);
        }
    }
    best
}

pub fn echelonize<F: Field>(ring: &F, rows: Vec<SparseVec<F::Elem>>, ncols: usize) -> Echelon<F::Elem> {
    let mut active: Vec<Option<SparseVec<F::Elem>>> = rows.into_iter().map(|r| (!r.is_empty()).then_some(r)).collect();
    let mut best: Vec<Option<Candidate>> = active.iter().map(|r| r.as_ref().and_then(|r| best_entry(ring, r))).collect();
    let mut done_rows: Vec<SparseVec<F::Elem>> = Vec::new();
    let mut pivots = Vec::new();
    loop {
        let mut pick: Option<(Candidate, usize)> = None;
        for (ri, b) in best.iter().enumerate() {
            if let Some(b) = b {
                if pick.as_ref().is_none_or(|(pb, pr)| (b.0, b.1, ri) < (pb.0, pb.1, *pr)) {
                    pick = Some((*b, ri));
                }
            }
        }
        let Some(((_, _, col), ri)) = pick else { break };
        let prow = active[ri].take().unwrap();
        best[ri] = None;
        let piv = sparse_get(&prow, col).unwrap().clone();
        let prow: SparseVec<F::Elem> = if ring.is_one(&piv) {
            prow
        } else {
            prow.iter().map(|(c, x)| (*c, if *c == col { ring.one() } else { ring.div(x, &piv) })).collect()
        };
        for (k, slot) in active.iter_mut().enumerate() {
            let Some(row) = slot else { continue };
            let Some(a) = sparse_get(row, col) else { continue };
            let f = ring.neg(a);
            let nr = axpy(ring, row, &f, &prow);
            if nr.is_empty() {
                *slot = None;
                best[k] = None;
            } else {
                best[k] = best_entry(ring, &nr);
                *slot = Some(nr);
            }
        }
        for row in done_rows.iter_mut() {
            if let Some(a) = sparse_get(row, col) {
                let f = ring.neg(a);
                *row = axpy(ring, row, &f, &prow);
            }
        }
        done_rows.push(prow);
        pivots.push(col);
    }
    Echelon { rows: done_rows, pivots, ncols }
}

impl<E: Clone> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_piv = vec![false; self.ncols];
        for &p in &self.pivots {
            is_piv[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_piv[c]).collect()
    }

    /// Kernel basis of the row space's annihilator (solutions of `rows * x = 0`), one vector per free column.
    pub fn kernel<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<SparseVec<E>> {
        let free = self.free_columns();
        let mut out = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v: SparseVec<E> = vec![(f, ring.one())];
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if let Some(a) = sparse_get(row, f) {
                    v.push((p, ring.neg(a)));
                }
            }
            v.sort_by_key(|e| e.0);
            out.push(v);
        }
        out
    }

    /// Residual of `v` after subtracting its pivot components; zero iff `v` lies in the row span.
    pub fn residual<R: Ring<Elem = E>>(&self, ring: &R, v: &SparseVec<E>) -> SparseVec<E> {
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if let Some(a) = sparse_get(&r, p) {
                let f = ring.neg(a);
                r = axpy(ring, &r, &f, row);
            }
        }
        r
    }
}

pub fn rank<F: Field>(ring: &F, m: &Mat<F::Elem>) -> usize {
    echelonize(ring, mat_rows_sparse(ring, m), m.ncols()).rank()
}

/// Inverse of a square matrix, if it exists.
pub fn inverse<F: Field>(ring: &F, m: &Mat<F::Elem>) -> Option<Mat<F::Elem>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let rows: Vec<SparseVec<F::Elem>> = (0..n)
        .map(|i| {
            let mut v = dense_to_sparse(ring, m.row(i));
            v.push((n + i, ring.one()));
            v
        })
        .collect();
    let ech = echelonize(ring, rows, 2 * n);
    if ech.rank() != n || ech.pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut out = super::zeros(ring, n, n);
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        for (c, x) in row {
            if *c >= n {
                out.set(p, c - n, x.clone());
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{AtOne, GenericField, LaurentInt, LocalRing};
    use num_rational::BigRational;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn rank_and_kernel_over_q() {
        let m = Mat::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]]);
        let ech = echelonize(&AtOne, mat_rows_sparse(&AtOne, &m), 3);
        assert_eq!(ech.rank(), 2);
        let ker = ech.kernel(&AtOne);
        assert_eq!(ker.len(), 1);
        let v = sparse_to_dense(&AtOne, &ker[0], 3);
        for i in 0..3 {
            let s: BigRational = (0..3).map(|j| m.get(i, j) * &v[j]).sum();
            assert_eq!(s, q(0));
        }
    }

    #[test]
    fn inverse_over_generic_field() {
        let k = GenericField;
        let l = |s: &str| k.from_laurent(&s.parse::<LaurentInt>().unwrap());
        let m = Mat::from_rows(vec![vec![l("t"), l("1")], vec![l("1 + t"), l("t^-1")]]);
        let inv = inverse(&k, &m).unwrap();
        assert_eq!(super::super::mat_mul(&k, &m, &inv), super::super::identity(&k, 2));
    }

    #[test]
    fn local_kernel_is_integral() {
        let r = LocalRing::new(3);
        let l = |s: &str| r.from_laurent(&s.parse::<LaurentInt>().unwrap());
        // (Phi_6, 1): kernel (1, -Phi_6) must be found with unit at the free column.
        let m = Mat::from_rows(vec![vec![l("1 - t + t^2"), l("1")]]);
        let ech = echelonize(&r, mat_rows_sparse(&r, &m), 2);
        let ker = ech.kernel(&r);
        assert_eq!(ker.len(), 1);
        assert!(ker[0].iter().all(|(_, x)| x.valuation() >= 0));
        assert!(ker[0].iter().any(|(_, x)| x.valuation() == 0));
    }
}
