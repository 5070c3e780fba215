use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::{Basis, HeckeElt, KlTable};
use crate::coeffs::LaurentInt;
use crate::error::{Error, Result};
use crate::weyl::{Elt, WeylGroup};

/// A C'-combination as sorted `(z, coeff)` pairs.
pub type CRow = Vec<(Elt, LaurentInt)>;

fn t_plus_tinv() -> LaurentInt {
    "t^-1 + t".parse().expect("literal")
}

fn add_into(acc: &mut std::collections::BTreeMap<Elt, LaurentInt>, z: Elt, c: &LaurentInt) {
    if c.is_zero() {
        return;
    }
    let slot = acc.entry(z).or_default();
    *slot += c;
    if slot.is_zero() {
        acc.remove(&z);
    }
}

/// Structure constants `C'_x C'_y = sum_z h_{x,y,z} C'_z`, one lazily built row per `x`.
pub struct HTable<'a> {
    g: &'a WeylGroup,
    kl: &'a KlTable,
    rows: Vec<OnceLock<Arc<Vec<CRow>>>>,
}

impl<'a> HTable<'a> {
    pub fn new(g: &'a WeylGroup, kl: &'a KlTable) -> Self {
        Self { g, kl, rows: (0..g.size()).map(|_| OnceLock::new()).collect() }
    }

    /// Seeds every row from previously computed data.
    pub fn with_rows(g: &'a WeylGroup, kl: &'a KlTable, rows: Vec<Vec<CRow>>) -> Result<Self> {
        if rows.len() != g.size() || rows.iter().any(|r| r.len() != g.size()) {
            return Err(Error::Cache("structure-constant table has the wrong shape".into()));
        }
        let rows = rows
            .into_iter()
            .map(|r| {
                let cell = OnceLock::new();
                let _ = cell.set(Arc::new(r));
                cell
            })
            .collect();
        Ok(Self { g, kl, rows })
    }

    /// All rows, computing any that are missing.
    pub fn export_rows(&self) -> Vec<Vec<CRow>> {
        self.fill();
        self.g.elements().map(|x| self.row(x).as_ref().clone()).collect()
    }

    pub fn group(&self) -> &WeylGroup {
        self.g
    }

    pub fn kl(&self) -> &KlTable {
        self.kl
    }

    /// `C'_s C'_y`: `(t + t^-1) C'_y` if `sy < y`, else `C'_{sy} + sum mu(z,y) C'_z` over `z < y` with `sz < z`.
    pub fn left_mul_s(&self, s: usize, y: Elt) -> CRow {
        let g = self.g;
        if g.is_left_descent(s, y) {
            return vec![(y, t_plus_tinv())];
        }
        let mut out: CRow = vec![(g.lmul(s, y), LaurentInt::one())];
        for &(z, m) in self.kl.mu_below(y) {
            if g.is_left_descent(s, z) {
                out.push((z, LaurentInt::constant(m)));
            }
        }
        out.sort_by_key(|e| e.0);
        out
    }

    /// `C'_y C'_s`, the mirror image of [`left_mul_s`](Self::left_mul_s).
    pub fn right_mul_s(&self, y: Elt, s: usize) -> CRow {
        let g = self.g;
        if g.is_right_descent(y, s) {
            return vec![(y, t_plus_tinv())];
        }
        let mut out: CRow = vec![(g.rmul(y, s), LaurentInt::one())];
        // mu is invariant under inversion of both arguments.
        let yi = g.inverse(y);
        for &(zi, m) in self.kl.mu_below(yi) {
            let z = g.inverse(zi);
            if g.is_right_descent(z, s) {
                out.push((z, LaurentInt::constant(m)));
            }
        }
        out.sort_by_key(|e| e.0);
        out
    }

    /// `C'_s * v` for a C'-combination `v`.
    pub fn left_mul_s_vec(&self, s: usize, v: &CRow) -> CRow {
        let mut acc = std::collections::BTreeMap::new();
        for (y, c) in v {
            for (z, d) in self.left_mul_s(s, *y) {
                add_into(&mut acc, z, &(c * &d));
            }
        }
        acc.into_iter().collect()
    }

    pub fn right_mul_s_vec(&self, v: &CRow, s: usize) -> CRow {
        let mut acc = std::collections::BTreeMap::new();
        for (y, c) in v {
            for (z, d) in self.right_mul_s(*y, s) {
                add_into(&mut acc, z, &(c * &d));
            }
        }
        acc.into_iter().collect()
    }

    /// Row `x`: entry `y` is `C'_x C'_y` in the C'-basis.
    pub fn row(&self, x: Elt) -> Arc<Vec<CRow>> {
        self.rows[x].get_or_init(|| Arc::new(self.build_row(x))).clone()
    }

    fn build_row(&self, x: Elt) -> Vec<CRow> {
        let g = self.g;
        if x == 0 {
            return g.elements().map(|y| vec![(y, LaurentInt::one())]).collect();
        }
        // C'_x = C'_s C'_v - sum mu(z,v) C'_z over z < v with sz < z.
        let s = g.left_descents(x).trailing_zeros() as usize;
        let v = g.lmul(s, x);
        let base = self.row(v);
        let corr: Vec<(Arc<Vec<CRow>>, i64)> = self
            .kl
            .mu_below(v)
            .iter()
            .filter(|&&(z, _)| g.is_left_descent(s, z))
            .map(|&(z, m)| (self.row(z), m))
            .collect();
        g.elements()
            .map(|y| {
                let mut acc: std::collections::BTreeMap<Elt, LaurentInt> = self.left_mul_s_vec(s, &base[y]).into_iter().collect();
                for (row, m) in &corr {
                    for (z, c) in &row[y] {
                        add_into(&mut acc, *z, &c.scale(&(-m).into()));
                    }
                }
                acc.into_iter().collect()
            })
            .collect()
    }

    /// Builds every row in parallel.
    pub fn fill(&self) {
        self.g.elements().into_par_iter().for_each(|x| {
            self.row(x);
        });
    }

    pub fn h(&self, x: Elt, y: Elt, z: Elt) -> LaurentInt {
        let row = self.row(x);
        let v = &row[y];
        v.binary_search_by_key(&z, |e| e.0).map(|k| v[k].1.clone()).unwrap_or_default()
    }

    pub fn product(&self, x: Elt, y: Elt) -> HeckeElt {
        HeckeElt::from_terms(Basis::Cprime, self.row(x)[y].iter().cloned())
    }

    /// Product of two C'-combinations.
    pub fn mult(&self, a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
        assert!(a.basis() == Basis::Cprime && b.basis() == Basis::Cprime);
        let mut out = HeckeElt::zero(Basis::Cprime);
        for (&x, cx) in a.terms() {
            let row = self.row(x);
            for (&y, cy) in b.terms() {
                let c = cx * cy;
                for (z, h) in &row[y] {
                    out.add_term(*z, &(&c * h));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::mult_t;

    #[test]
    fn rows_match_t_basis_products() {
        let g = WeylGroup::from_label("B2").unwrap();
        let kl = KlTable::new(&g).unwrap();
        let h = HTable::new(&g, &kl);
        for x in g.elements() {
            for y in g.elements() {
                let direct = kl.to_cprime(&mult_t(&g, &kl.cprime(x), &kl.cprime(y)));
                assert_eq!(h.product(x, y), direct);
            }
        }
    }

    #[test]
    fn known_constants() {
        let g = WeylGroup::from_label("A2").unwrap();
        let kl = KlTable::new(&g).unwrap();
        let h = HTable::new(&g, &kl);
        let (s1, s2) = (g.generator(0), g.generator(1));
        assert_eq!(h.h(s1, s1, s1), t_plus_tinv());
        assert!(h.h(s1, s2, g.from_word(&[0, 1])).is_one());
        assert!(h.h(0, s2, s2).is_one());
        for x in g.elements() {
            let direct = HeckeElt::from_terms(Basis::Cprime, h.right_mul_s_vec(&vec![(x, LaurentInt::one())], 1));
            assert_eq!(direct, h.product(x, s2));
        }
    }
}
