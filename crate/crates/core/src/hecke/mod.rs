//! The Hecke algebra over `Z[t, t^-1]`: T-basis arithmetic, Kazhdan-Lusztig polynomials,
//! the C'-basis and its structure constants.

mod hconst;
mod kl;
pub mod oracle;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeffs::LaurentInt;
use crate::weyl::{Elt, WeylGroup};

pub use hconst::{CRow, HTable};
pub use kl::KlTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    T,
    Cprime,
}

/// Sparse combination of T- or C'-basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElt {
    basis: Basis,
    terms: BTreeMap<Elt, LaurentInt>,
}

impl HeckeElt {
    pub fn zero(basis: Basis) -> Self {
        Self { basis, terms: BTreeMap::new() }
    }

    pub fn basis_element(basis: Basis, w: Elt) -> Self {
        Self::monomial(basis, w, LaurentInt::one())
    }

    pub fn monomial(basis: Basis, w: Elt, c: LaurentInt) -> Self {
        let mut out = Self::zero(basis);
        out.add_term(w, &c);
        out
    }

    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (Elt, LaurentInt)>) -> Self {
        let mut out = Self::zero(basis);
        for (w, c) in terms {
            out.add_term(w, &c);
        }
        out
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeMap<Elt, LaurentInt> {
        &self.terms
    }

    pub fn coeff(&self, w: Elt) -> LaurentInt {
        self.terms.get(&w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Elt, c: &LaurentInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &HeckeElt) -> HeckeElt {
        assert_eq!(self.basis, other.basis, "mixed bases");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c);
        }
        out
    }

    pub fn sub(&self, other: &HeckeElt) -> HeckeElt {
        self.add(&other.scale(&LaurentInt::constant(-1)))
    }

    pub fn scale(&self, c: &LaurentInt) -> HeckeElt {
        let mut out = Self::zero(self.basis);
        for (w, x) in &self.terms {
            out.add_term(*w, &(x * c));
        }
        out
    }

    pub fn bar_coeffs(&self) -> HeckeElt {
        Self { basis: self.basis, terms: self.terms.iter().map(|(w, c)| (*w, c.bar())).collect() }
    }

    pub fn render(&self, g: &WeylGroup) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let name = match self.basis {
            Basis::T => "T",
            Basis::Cprime => "C'",
        };
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c})*{name}[{}]", g.render(*w))).collect();
        parts.join(" + ")
    }
}

/// `q_s = t^(2 c_s)`.
pub fn q_param(g: &WeylGroup, s: usize) -> LaurentInt {
    LaurentInt::monomial(1, 2 * g.datum().params[s] as i64)
}

/// `T_s * h` in the T-basis.
pub fn left_mul_ts(g: &WeylGroup, s: usize, h: &HeckeElt) -> HeckeElt {
    assert_eq!(h.basis, Basis::T);
    let q = q_param(g, s);
    let qm1 = &q - &LaurentInt::one();
    let mut out = HeckeElt::zero(Basis::T);
    for (&w, c) in &h.terms {
        let sw = g.lmul(s, w);
        if g.length(sw) > g.length(w) {
            out.add_term(sw, c);
        } else {
            out.add_term(sw, &(c * &q));
            out.add_term(w, &(c * &qm1));
        }
    }
    out
}

/// `h * T_s` in the T-basis.
pub fn right_mul_ts(g: &WeylGroup, h: &HeckeElt, s: usize) -> HeckeElt {
    assert_eq!(h.basis, Basis::T);
    let q = q_param(g, s);
    let qm1 = &q - &LaurentInt::one();
    let mut out = HeckeElt::zero(Basis::T);
    for (&w, c) in &h.terms {
        let ws = g.rmul(w, s);
        if g.length(ws) > g.length(w) {
            out.add_term(ws, c);
        } else {
            out.add_term(ws, &(c * &q));
            out.add_term(w, &(c * &qm1));
        }
    }
    out
}

/// Product in the T-basis.
pub fn mult_t(g: &WeylGroup, a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
    assert!(a.basis == Basis::T && b.basis == Basis::T, "mult_t needs T-basis inputs");
    let mut out = HeckeElt::zero(Basis::T);
    for (&x, c) in &a.terms {
        let mut acc = b.clone();
        for &s in g.word(x).iter().rev() {
            acc = left_mul_ts(g, s as usize, &acc);
        }
        out = out.add(&acc.scale(c));
    }
    out
}

/// `tau(h)`: the coefficient of `T_e`.
pub fn tau(h: &HeckeElt) -> LaurentInt {
    assert_eq!(h.basis, Basis::T);
    h.coeff(0)
}

/// `x_lambda = sum of T_w over the parabolic subgroup`.
pub fn x_lambda(g: &WeylGroup, lambda: crate::weyl::ParabolicSet) -> HeckeElt {
    HeckeElt::from_terms(Basis::T, g.parabolic_subgroup(lambda).into_iter().map(|w| (w, LaurentInt::one())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_relation() {
        let g = WeylGroup::from_label("A2").unwrap();
        let s = g.generator(0);
        let ts = HeckeElt::basis_element(Basis::T, s);
        let sq = mult_t(&g, &ts, &ts);
        assert_eq!(sq.coeff(0), "t^2".parse().unwrap());
        assert_eq!(sq.coeff(s), "-1 + t^2".parse().unwrap());
        let t12 = mult_t(&g, &ts, &HeckeElt::basis_element(Basis::T, g.generator(1)));
        assert_eq!(t12, HeckeElt::basis_element(Basis::T, g.from_word(&[0, 1])));
    }

    #[test]
    fn unequal_parameters_in_t_basis() {
        use crate::weyl::{CoxeterDatum, GroupBudget};
        let ty = "B2".parse().unwrap();
        let g = WeylGroup::with_datum(CoxeterDatum::with_params(ty, vec![2, 1]).unwrap(), GroupBudget::default()).unwrap();
        let ts = HeckeElt::basis_element(Basis::T, g.generator(0));
        let sq = mult_t(&g, &ts, &ts);
        assert_eq!(sq.coeff(0), "t^4".parse().unwrap());
        assert_eq!(sq.coeff(g.generator(0)), "-1 + t^4".parse().unwrap());
    }
}
