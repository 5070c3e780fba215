//! Smith reduction over the local ring by minimal-valuation pivoting.
//!
//! Only row operations are recorded: after a pivot's column is cleared, the remaining
//! entries of the pivot row are divisible by the pivot, so the column operations that would
//! clear them never touch another row. The pivot values are therefore the invariant factors.

use super::elim::{axpy, sparse_get, SparseVec};
use crate::coeffs::{Field, LocalRing, LocalScalar, Ring};

#[derive(Clone, Debug)]
struct RowOp {
    src: usize,
    dst: usize,
    factor: LocalScalar,
}

/// Row-reduced form `L * G` together with the log of `L`.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    /// `(row, col, pivot value)` in elimination order.
    pub pivots: Vec<(usize, usize, LocalScalar)>,
    pub nrows: usize,
    ops: Vec<RowOp>,
}

impl LocalSmith {
    pub fn compute(ring: &LocalRing, rows: Vec<SparseVec<LocalScalar>>) -> Self {
        let nrows = rows.len();
        let mut active: Vec<Option<SparseVec<LocalScalar>>> = rows.into_iter().map(|r| (!r.is_empty()).then_some(r)).collect();
        let mut pivots = Vec::new();
        let mut ops = Vec::new();
        loop {
            let mut pick: Option<((i64, u64), usize, usize, usize)> = None;
            for (ri, row) in active.iter().enumerate() {
                let Some(row) = row else { continue };
                for (c, x) in row {
                    let cand = (ring.pivot_key(x), row.len(), ri, *c);
                    if pick.as_ref().is_none_or(|p| cand < *p) {
                        pick = Some(cand);
                    }
                }
            }
            let Some((_, _, pr, pc)) = pick else { break };
            let prow = active[pr].take().unwrap();
            let piv = sparse_get(&prow, pc).unwrap().clone();
            for (k, slot) in active.iter_mut().enumerate() {
                let Some(row) = slot else { continue };
                let Some(a) = sparse_get(row, pc) else { continue };
                let f = ring.div(a, &piv);
                let nr = axpy(ring, row, &ring.neg(&f), &prow);
                ops.push(RowOp { src: pr, dst: k, factor: f });
                *slot = if nr.is_empty() { None } else { Some(nr) };
            }
            pivots.push((pr, pc, piv));
        }
        Self { pivots, nrows, ops }
    }

    /// Valuations of the invariant factors, in elimination (non-decreasing) order.
    pub fn invariant_valuations(&self) -> Vec<i64> {
        self.pivots.iter().map(|p| p.2.valuation()).collect()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `L * v`: coordinates of `v` in the adapted basis.
    pub fn apply(&self, ring: &LocalRing, v: &[LocalScalar]) -> Vec<LocalScalar> {
        let mut v = v.to_vec();
        for op in &self.ops {
            let d = ring.sub(&v[op.dst], &ring.mul(&op.factor, &v[op.src]));
            v[op.dst] = d;
        }
        v
    }

    /// Column `i` of `L^-1`: the adapted basis vector attached to row `i`, in original coordinates.
    pub fn basis_vector(&self, ring: &LocalRing, i: usize) -> Vec<LocalScalar> {
        let mut v = vec![ring.zero(); self.nrows];
        v[i] = ring.one();
        for op in self.ops.iter().rev() {
            let d = ring.add(&v[op.dst], &ring.mul(&op.factor, &v[op.src]));
            v[op.dst] = d;
        }
        v
    }

    /// Whether `v` (original coordinates) lies in the column span of `G`.
    pub fn in_image(&self, ring: &LocalRing, v: &[LocalScalar]) -> bool {
        let w = self.apply(ring, v);
        let mut pivot_rows = vec![None; self.nrows];
        for (r, _, p) in &self.pivots {
            pivot_rows[*r] = Some(p.valuation());
        }
        w.iter().enumerate().all(|(i, x)| match pivot_rows[i] {
            _ if x.is_zero() => true,
            Some(val) => x.valuation() >= val,
            None => false,
        })
    }
}
