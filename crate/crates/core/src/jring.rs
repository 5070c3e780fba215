//! The asymptotic ring J, the homomorphism `varpi`, and the cell-module intertwining check.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cells::CellDecomposition;
use crate::coeffs::{AtOne, LaurentInt, ModP, Ring};
use crate::hecke::{Basis, HTable, HeckeElt};
use crate::linalg::{elim, Mat};
use crate::weyl::{Elt, WeylGroup};

/// Element of `J_Z = J tensor Z[t, t^-1]` in the basis `j_x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JElt {
    terms: BTreeMap<Elt, LaurentInt>,
}

impl JElt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(x: Elt) -> Self {
        let mut out = Self::zero();
        out.add_term(x, &LaurentInt::one());
        out
    }

    pub fn terms(&self) -> &BTreeMap<Elt, LaurentInt> {
        &self.terms
    }

    pub fn coeff(&self, x: Elt) -> LaurentInt {
        self.terms.get(&x).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, x: Elt, c: &LaurentInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add(&self, o: &JElt) -> JElt {
        let mut out = self.clone();
        for (x, c) in &o.terms {
            out.add_term(*x, c);
        }
        out
    }

    pub fn scale(&self, c: &LaurentInt) -> JElt {
        let mut out = Self::zero();
        for (x, d) in &self.terms {
            out.add_term(*x, &(c * d));
        }
        out
    }
}

/// Structure constants of J: `j_x j_y = sum_z gamma_{x,y,z^{-1}} j_z`.
pub struct JRing {
    n: usize,
    /// `table[x * n + y]`: nonzero `(z, gamma_{x,y,z^{-1}})`.
    table: Vec<Vec<(Elt, i64)>>,
    /// `varpi(C'_w)` for every `w`.
    varpi: Vec<JElt>,
}

impl JRing {
    pub fn new(h: &HTable, cells: &CellDecomposition) -> Self {
        let g = h.group();
        let n = g.size();
        let table: Vec<Vec<(Elt, i64)>> = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (x, y) = (k / n, k % n);
                h.row(x)[y]
                    .iter()
                    .filter_map(|(z, c)| {
                        let gam = c.coeff(-(cells.a(*z) as i64));
                        let gam: i64 = i64::try_from(gam).expect("gamma fits in i64");
                        (gam != 0).then_some((*z, gam))
                    })
                    .collect()
            })
            .collect();
        let varpi = g
            .elements()
            .into_par_iter()
            .map(|w| {
                let row = h.row(w);
                let mut out = JElt::zero();
                for &d in cells.distinguished() {
                    for (z, c) in &row[d] {
                        if cells.a(*z) == cells.a(d) {
                            out.add_term(*z, c);
                        }
                    }
                }
                out
            })
            .collect();
        Self { n, table, varpi }
    }

    /// `gamma_{x,y,z^{-1}}`.
    pub fn structure_constant(&self, x: Elt, y: Elt, z: Elt) -> i64 {
        self.table[x * self.n + y].iter().find(|e| e.0 == z).map_or(0, |e| e.1)
    }

    pub fn basis_product(&self, x: Elt, y: Elt) -> &[(Elt, i64)] {
        &self.table[x * self.n + y]
    }

    pub fn mult(&self, a: &JElt, b: &JElt) -> JElt {
        let mut out = JElt::zero();
        for (x, cx) in &a.terms {
            for (y, cy) in &b.terms {
                let c = cx * cy;
                for &(z, gam) in self.basis_product(*x, *y) {
                    out.add_term(z, &c.scale(&gam.into()));
                }
            }
        }
        out
    }

    /// `varpi(C'_w)`.
    pub fn varpi_basis(&self, w: Elt) -> &JElt {
        &self.varpi[w]
    }

    pub fn varpi(&self, h: &HeckeElt) -> JElt {
        assert_eq!(h.basis(), Basis::Cprime);
        let mut out = JElt::zero();
        for (w, c) in h.terms() {
            out = out.add(&self.varpi[*w].scale(c));
        }
        out
    }

    /// `|W| x |W|` matrix of `varpi` (row `w` holds the j-coordinates of `varpi(C'_w)`) in a ring.
    pub fn varpi_matrix<R: Ring>(&self, ring: &R) -> Mat<R::Elem> {
        Mat::from_fn(self.n, self.n, |w, z| ring.from_laurent(&self.varpi[w].coeff(z)))
    }
}

/// Rank over `Q` of `varpi` specialised at `t = 1`.
pub fn varpi_t1_rank(j: &JRing) -> usize {
    elim::rank(&AtOne, &j.varpi_matrix(&AtOne))
}

/// Rank of `varpi` at a random point modulo a large prime; full rank certifies injectivity over `Q(t)`.
pub fn varpi_generic_rank(j: &JRing) -> usize {
    let ring = ModP::DEFAULT;
    elim::rank(&ring, &j.varpi_matrix(&ring))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Lemma51Report {
    pub cell: usize,
    pub members: Vec<String>,
    pub pairs_checked: usize,
    /// `(x, y, u)` where the coefficient of `C'_u` differs outside the lower ideal.
    pub violations: Vec<(String, String, String)>,
    pub pass: bool,
}

/// Checks `sigma(varpi(C'_x) j_y) = C'_x C'_y` modulo the span of `C'_u`, `u <_L omega`, for all `x` and `y in omega`.
pub fn verify_lemma51(h: &HTable, cells: &CellDecomposition, j: &JRing, lc: usize) -> Lemma51Report {
    let g: &WeylGroup = h.group();
    let omega = cells.left_cell(lc);
    let below = |u: Elt| cells.left_cell_of(u) != lc && cells.left_cell_leq(cells.left_cell_of(u), lc);
    let mut violations = Vec::new();
    let mut pairs = 0;
    for x in g.elements() {
        let vx = j.varpi_basis(x);
        for &y in omega {
            pairs += 1;
            let lhs = j.mult(vx, &JElt::basis(y));
            let row = h.row(x);
            let mut diff: BTreeMap<Elt, LaurentInt> = lhs.terms().clone();
            for (u, c) in &row[y] {
                let slot = diff.entry(*u).or_default();
                *slot -= c;
            }
            for (u, c) in diff {
                if !c.is_zero() && !below(u) {
                    violations.push((g.render(x), g.render(y), g.render(u)));
                }
            }
        }
    }
    Lemma51Report {
        cell: lc,
        members: omega.iter().map(|&w| g.render(w)).collect(),
        pairs_checked: pairs,
        pass: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::KlTable;

    #[test]
    fn a1_values() {
        let g = WeylGroup::from_label("A1").unwrap();
        let kl = KlTable::new(&g).unwrap();
        let h = HTable::new(&g, &kl);
        let cells = CellDecomposition::compute(&h).unwrap();
        let j = JRing::new(&h, &cells);
        let s = g.generator(0);
        assert_eq!(j.mult(&JElt::basis(s), &JElt::basis(s)), JElt::basis(s));
        assert_eq!(j.mult(&JElt::basis(0), &JElt::basis(0)), JElt::basis(0));
        assert_eq!(j.varpi_basis(s), &JElt::basis(s).scale(&"t^-1 + t".parse().unwrap()));
        // varpi is unital: C'_e goes to the sum of j_d over distinguished d.
        assert_eq!(j.varpi_basis(0), &JElt::basis(0).add(&JElt::basis(s)));
        assert_eq!(varpi_t1_rank(&j), 2);
        for lc in 0..cells.num_left_cells() {
            assert!(verify_lemma51(&h, &cells, &j, lc).pass);
        }
    }
}
