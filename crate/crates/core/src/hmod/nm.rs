//! Eigenvector bases of cell-ideal quotients.

use serde::Serialize;

use super::{fixed_space, HModule, Presentation, Provenance, Side};
use crate::coeffs::{Field, Integral, LaurentInt};
use crate::error::{Error, Result};
use crate::hecke::HTable;
use crate::linalg::Mat;
use crate::weyl::{Elt, EltSet, ParabolicSet};

/// `M / N` for left ideals `N` inside `M`, spanned by C'-basis elements; basis `C'_y`, `y in M \ N`.
pub fn ideal_quotient(h: &HTable, m: &EltSet, n: &EltSet) -> Result<(Vec<Elt>, HModule<Integral>)> {
    let g = h.group();
    let basis: Vec<Elt> = m.iter().filter(|&y| !n.contains(y)).collect();
    let t = LaurentInt::t();
    let mut action = Vec::with_capacity(g.rank());
    for s in 0..g.rank() {
        let mut a = Mat::filled(basis.len(), basis.len(), LaurentInt::zero());
        for (j, &y) in basis.iter().enumerate() {
            for (z, c) in h.left_mul_s(s, y) {
                if !m.contains(z) {
                    return Err(Error::Invariant("span is not a left ideal".into()));
                }
                if let Ok(i) = basis.binary_search(&z) {
                    a.set(i, j, &c * &t);
                }
            }
            let d = a.get(j, j) - &LaurentInt::one();
            a.set(j, j, d);
        }
        action.push(a);
    }
    let module = HModule::new(Integral, Side::Left, Presentation::of(g), action, Provenance::Other { label: "ideal quotient".into() });
    Ok((basis, module))
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NmReport {
    pub lambda: String,
    pub predicted: Vec<Elt>,
    pub solution_dim: usize,
    pub pass: bool,
}

/// Compares `{x : T_s x = q_s x, s in lambda}` with the span of `C'_y`, `lambda` inside `L(y)`.
pub fn lemma_nm_basis<F: Field + Clone>(h: &HTable, basis: &[Elt], module: &HModule<F>, lambda: ParabolicSet) -> Result<NmReport> {
    let g = h.group();
    let r = &module.ring;
    for s in lambda.members() {
        let q1 = module.pres.q(s) + LaurentInt::one();
        if r.is_zero(&r.from_laurent(&q1)) {
            return Err(Error::NotInvertible(s + 1));
        }
    }
    let predicted: Vec<Elt> = basis.iter().copied().filter(|&y| lambda.is_subset(g.left_descents(y))).collect();
    let solution_dim = fixed_space(module, lambda).len();
    let eigen = |j: usize| {
        lambda.members().into_iter().all(|s| {
            let q = r.from_laurent(&module.pres.q(s));
            (0..module.dim()).all(|i| {
                let want = if i == j { q.clone() } else { r.zero() };
                *module.action[s].get(i, j) == want
            })
        })
    };
    let pass = solution_dim == predicted.len()
        && predicted.iter().all(|y| eigen(basis.binary_search(y).expect("predicted elements lie in the basis")));
    Ok(NmReport { lambda: lambda.label(), predicted, solution_dim, pass })
}
