//! Independent construction of the C'-basis from the bar involution.
//!
//! With `H_y = t^{-l(y)} T_y` and `bar(H_y) = sum_x r_{x,y} H_x`, the coefficients
//! `p_{x,w}` of `C'_w = sum_x p_{x,w} H_x` are determined by `p_{w,w} = 1`,
//! `p_{x,w} in t^{-1} Z[t^{-1}]` for `x != w`, and bar invariance.

use super::{left_mul_ts, q_param, Basis, HeckeElt};
use crate::coeffs::LaurentInt;
use crate::error::{Error, Result};
use crate::weyl::{Elt, WeylGroup};

/// `bar(T_w) = T_{w^{-1}}^{-1}` for every `w`, in the T-basis.
pub fn bar_t_basis(g: &WeylGroup) -> Vec<HeckeElt> {
    let mut out: Vec<HeckeElt> = Vec::with_capacity(g.size());
    out.push(HeckeElt::basis_element(Basis::T, 0));
    for w in 1..g.size() {
        let s = g.word(w)[0] as usize;
        let v = g.lmul(s, w);
        // T_s^{-1} = q^{-1} T_s + (q^{-1} - 1).
        let q = q_param(g, s);
        let qinv = q.bar();
        let prev = &out[v];
        let a = left_mul_ts(g, s, prev).scale(&qinv);
        let b = prev.scale(&(&qinv - &LaurentInt::one()));
        out.push(a.add(&b));
    }
    out
}

/// `P_{x,w}` (in `q = t^2`) for every `x`, computed from bar invariance alone.
pub fn kl_column_by_bar(g: &WeylGroup, bar_t: &[HeckeElt], w: Elt) -> Result<Vec<LaurentInt>> {
    if !g.datum().equal_parameters() {
        return Err(Error::UnequalParameters("the bar-invariance oracle"));
    }
    let n = g.size();
    let len = |x: Elt| g.length(x) as i64;
    // r_{x,y} = t^{l(x)+l(y)} [T_x] bar(T_y)
    let r = |x: Elt, y: Elt| bar_t[y].coeff(x).shift(len(x) + len(y));
    let mut p = vec![LaurentInt::zero(); n];
    p[w] = LaurentInt::one();
    for x in (0..n).rev() {
        if x == w {
            continue;
        }
        let mut rhs = LaurentInt::zero();
        for y in 0..n {
            if y != x && !p[y].is_zero() {
                rhs += &(r(x, y) * p[y].bar());
            }
        }
        let neg = LaurentInt::from_terms(rhs.terms().filter(|(e, _)| *e < 0).map(|(e, c)| (e, c.clone())));
        if neg.clone() - neg.bar() != rhs {
            return Err(Error::NotCocycle(format!("bar-invariance system inconsistent at {}", g.render(x))));
        }
        p[x] = neg;
    }
    p.into_iter()
        .enumerate()
        .map(|(x, px)| {
            px.shift(len(w) - len(x))
                .deflate(2)
                .ok_or_else(|| Error::NotCocycle(format!("odd powers in P_{{{},{}}}", g.render(x), g.render(w))))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::KlTable;

    #[test]
    fn oracle_matches_recursion_b2() {
        let g = WeylGroup::from_label("B2").unwrap();
        let kl = KlTable::new(&g).unwrap();
        let bt = bar_t_basis(&g);
        for w in g.elements() {
            let col = kl_column_by_bar(&g, &bt, w).unwrap();
            for x in g.elements() {
                assert_eq!(col[x], kl.get(x, w));
            }
        }
    }
}
