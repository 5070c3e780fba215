use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{Basis, HeckeElt};
use crate::coeffs::LaurentInt;
use crate::error::{Error, Result};
use crate::weyl::{Elt, WeylGroup};

/// Kazhdan-Lusztig polynomials `P_{y,w}`, stored as polynomials in `q = t^2`
/// (exponents of the stored [`LaurentInt`] are powers of `q`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlTable {
    /// `p[w]`: nonzero `(y, P_{y,w})` sorted by `y`.
    p: Vec<Vec<(Elt, LaurentInt)>>,
    /// `mu_below[w]`: `(z, mu(z, w))` for `z < w` with nonzero mu.
    mu_below: Vec<Vec<(Elt, i64)>>,
    lengths: Vec<u32>,
}

impl KlTable {
    pub fn new(g: &WeylGroup) -> Result<Self> {
        if !g.datum().equal_parameters() {
            return Err(Error::UnequalParameters("Kazhdan-Lusztig polynomials"));
        }
        let n = g.size();
        let lengths: Vec<u32> = g.elements().map(|w| g.length(w) as u32).collect();
        let mut table = Self { p: vec![Vec::new(); n], mu_below: vec![Vec::new(); n], lengths };
        table.p[0] = vec![(0, LaurentInt::one())];
        for w in 1..n {
            let s = g.left_descents(w).trailing_zeros() as usize;
            let v = g.lmul(s, w);
            let lw = g.length(w) as i64;
            let corrections: Vec<(Elt, i64)> =
                table.mu_below[v].iter().copied().filter(|&(z, _)| g.is_left_descent(s, z)).collect();
            let mut col = Vec::new();
            for y in g.bruhat_interval(w).iter() {
                let sy = g.lmul(s, y);
                let c = i64::from(g.is_left_descent(s, y));
                let mut val = table.get(sy, v).shift(1 - c) + table.get(y, v).shift(c);
                for &(z, m) in &corrections {
                    let pyz = table.get(y, z);
                    if !pyz.is_zero() {
                        let k = (lw - g.length(z) as i64) / 2;
                        val -= &pyz.shift(k).scale(&m.into());
                    }
                }
                if !val.is_zero() {
                    col.push((y, val));
                }
            }
            table.p[w] = col;
            let mus: Vec<(Elt, i64)> = table.p[w]
                .iter()
                .filter_map(|(y, poly)| {
                    let gap = lw - g.length(*y) as i64;
                    (gap % 2 == 1).then(|| (*y, poly.coeff((gap - 1) / 2).to_i64().expect("mu fits in i64"))).filter(|m| m.1 != 0)
                })
                .collect();
            table.mu_below[w] = mus;
        }
        Ok(table)
    }

    /// `P_{y,w}` as a polynomial in `q`.
    pub fn get(&self, y: Elt, w: Elt) -> LaurentInt {
        let col = &self.p[w];
        col.binary_search_by_key(&y, |e| e.0).map(|k| col[k].1.clone()).unwrap_or_default()
    }

    /// `P_{y,w}(t^2)` as a Laurent polynomial in `t`.
    pub fn get_t(&self, y: Elt, w: Elt) -> LaurentInt {
        self.get(y, w).inflate(2)
    }

    pub fn column(&self, w: Elt) -> &[(Elt, LaurentInt)] {
        &self.p[w]
    }

    /// Symmetrised mu-coefficient.
    pub fn mu(&self, y: Elt, w: Elt) -> i64 {
        let (lo, hi) = if self.lengths[y] < self.lengths[w] { (y, w) } else { (w, y) };
        self.mu_below[hi].iter().find(|e| e.0 == lo).map_or(0, |e| e.1)
    }

    pub fn mu_below(&self, w: Elt) -> &[(Elt, i64)] {
        &self.mu_below[w]
    }

    /// `C'_w = t^{-l(w)} sum_y P_{y,w}(t^2) T_y`.
    pub fn cprime(&self, w: Elt) -> HeckeElt {
        let lw = self.lengths[w] as i64;
        HeckeElt::from_terms(Basis::T, self.p[w].iter().map(|(y, poly)| (*y, poly.inflate(2).shift(-lw))))
    }

    /// Rewrites a T-basis element in the C'-basis by peeling off leading terms.
    pub fn to_cprime(&self, h: &HeckeElt) -> HeckeElt {
        assert_eq!(h.basis(), Basis::T);
        let mut rest = h.clone();
        let mut out = HeckeElt::zero(Basis::Cprime);
        while let Some((&w, c)) = rest.terms().iter().next_back() {
            // The leading coefficient of C'_w on T_w is t^{-l(w)}.
            let coeff = c.shift(self.lengths[w] as i64);
            rest = rest.sub(&self.cprime(w).scale(&coeff));
            out.add_term(w, &coeff);
        }
        out
    }

    pub fn to_t(&self, h: &HeckeElt) -> HeckeElt {
        assert_eq!(h.basis(), Basis::Cprime);
        let mut out = HeckeElt::zero(Basis::T);
        for (&w, c) in h.terms() {
            out = out.add(&self.cprime(w).scale(c));
        }
        out
    }
}
