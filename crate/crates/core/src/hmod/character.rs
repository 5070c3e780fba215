//! Characters at `t = 1`, where every module becomes a `Q W`-module.

use num_rational::BigRational;

use super::HModule;
use crate::coeffs::{AtOne, Integral, Ring};
use crate::linalg::{identity, mat_mul, Mat};
use crate::weyl::WeylGroup;

/// `chi(w) = trace rho(T_w)` at `t = 1`, indexed by element id.
pub fn characters_at_one(g: &WeylGroup, m: &HModule<Integral>) -> Vec<BigRational> {
    let r = AtOne;
    let acts: Vec<Mat<BigRational>> = m.action.iter().map(|a| a.map(|x| r.from_laurent(x))).collect();
    let d = m.dim();
    let mut mats: Vec<Option<Mat<BigRational>>> = vec![None; g.size()];
    let mut chi = Vec::with_capacity(g.size());
    for w in g.elements() {
        let mw = if w == g.identity() {
            identity(&r, d)
        } else {
            let s = g.word(w)[0] as usize;
            let v = g.lmul(s, w);
            mat_mul(&r, &acts[s], mats[v].as_ref().expect("shorter elements come first"))
        };
        chi.push((0..d).fold(r.zero(), |acc, i| acc + mw.get(i, i)));
        mats[w] = Some(mw);
    }
    chi
}

/// `(1/|W|) sum_w chi_M(w) chi_N(w^-1)`: the generic dimension of `Hom(M, N)`.
pub fn hom_dim_by_characters(g: &WeylGroup, chi_m: &[BigRational], chi_n: &[BigRational]) -> usize {
    let total: BigRational = g.elements().map(|w| &chi_m[w] * &chi_n[g.inverse(w)]).sum();
    let v = total / BigRational::from_integer(g.size().into());
    assert!(v.is_integer(), "character inner product is not an integer");
    usize::try_from(v.to_integer()).expect("nonnegative")
}
