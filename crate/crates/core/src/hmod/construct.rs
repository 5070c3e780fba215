//! Cell modules and q-permutation modules from the C'-basis.

use super::{FiltrationRecord, HModule, Presentation, Provenance, Side};
use crate::cells::CellDecomposition;
use crate::coeffs::qpoly::laurent_to_qpoly;
use crate::coeffs::{GenericField, Integral, LaurentInt, Ring};
use crate::error::{Error, Result};
use crate::hecke::{CRow, HTable};
use crate::linalg::{elim, mat_mul, Mat};
use crate::weyl::{Elt, ParabolicSet, WeylGroup};

/// Matrix of `T_s = t C'_s - 1` on the span of `basis`, reading products from `mul`.
/// Terms outside `basis` are dropped when `strict` is false and rejected otherwise.
fn action_matrix(basis: &[Elt], mul: impl Fn(Elt) -> CRow, strict: bool) -> Result<Mat<LaurentInt>> {
    let n = basis.len();
    let mut m = Mat::filled(n, n, LaurentInt::zero());
    let t = LaurentInt::t();
    for (j, &y) in basis.iter().enumerate() {
        let prod = mul(y);
        for (z, c) in &prod {
            match basis.binary_search(z) {
                Ok(i) => m.set(i, j, c * &t),
                Err(_) if strict => {
                    return Err(Error::Invariant(format!("span is not closed under the action (element id {z})")));
                }
                Err(_) => {}
            }
        }
        let d = m.get(j, j) - &LaurentInt::one();
        m.set(j, j, d);
    }
    Ok(m)
}

/// Left cell module `S(omega)` with basis `C'_x`, `x in omega`.
pub fn cell_module(h: &HTable, cells: &CellDecomposition, lc: usize) -> HModule<Integral> {
    let g = h.group();
    let basis = cells.left_cell(lc).to_vec();
    let action = (0..g.rank())
        .map(|s| action_matrix(&basis, |y| h.left_mul_s(s, y), false).expect("non-strict"))
        .collect();
    HModule::new(Integral, Side::Left, Presentation::of(g), action, Provenance::Cell { cell: lc })
        .with_filtration(FiltrationRecord { sections: vec![(basis.len(), lc)] })
}

/// Dual cell module `S_omega`, a right module.
pub fn dual_cell_module(h: &HTable, cells: &CellDecomposition, lc: usize) -> HModule<Integral> {
    let m = cell_module(h, cells, lc);
    let d = m.dim();
    let mut out = m.dualize();
    out.provenance = Provenance::DualCell { cell: lc };
    out.with_filtration(FiltrationRecord { sections: vec![(d, lc)] })
}

/// `x_lambda H` with basis `C'_y`, `lambda` inside `L(y)`.
pub fn qperm_right_cprime(h: &HTable, lambda: ParabolicSet) -> Result<(Vec<Elt>, HModule<Integral>)> {
    let g = h.group();
    let basis: Vec<Elt> = g.elements().filter(|&y| lambda.is_subset(g.left_descents(y))).collect();
    let action = (0..g.rank())
        .map(|s| action_matrix(&basis, |y| h.right_mul_s(y, s), true))
        .collect::<Result<Vec<_>>>()?;
    Ok((basis, HModule::new(Integral, Side::Right, Presentation::of(g), action, Provenance::Qperm { lambda: lambda.0 })))
}

/// `H x_lambda` with basis `C'_u`, `lambda` inside `R(u)`.
pub fn qperm_left(h: &HTable, lambda: ParabolicSet) -> Result<(Vec<Elt>, HModule<Integral>)> {
    let g = h.group();
    let basis: Vec<Elt> = g.elements().filter(|&u| lambda.is_subset(g.right_descents(u))).collect();
    let action = (0..g.rank())
        .map(|s| action_matrix(&basis, |u| h.left_mul_s(s, u), true))
        .collect::<Result<Vec<_>>>()?;
    Ok((basis, HModule::new(Integral, Side::Left, Presentation::of(g), action, Provenance::QpermLeft { lambda: lambda.0 })))
}

fn laurent_div_exact(a: &LaurentInt, b: &LaurentInt) -> Option<LaurentInt> {
    let (qa, sa) = laurent_to_qpoly(a);
    let (qb, sb) = laurent_to_qpoly(b);
    Some(qa.div_exact(&qb)?.to_laurent()?.shift(sa - sb))
}

/// `tau(C'_y C'_u) = t^{-l(y)-l(u)} sum_a P_{a,y} P_{a^{-1},u} t^{2 l(a)}`.
pub fn tau_cprime(h: &HTable, y: Elt, u: Elt) -> LaurentInt {
    let g = h.group();
    let kl = h.kl();
    let mut acc = LaurentInt::zero();
    for (a, pay) in kl.column(y) {
        let pu = kl.get_t(g.inverse(*a), u);
        if !pu.is_zero() {
            acc += &(pay.inflate(2) * pu).shift(2 * g.length(*a) as i64);
        }
    }
    acc.shift(-((g.length(y) + g.length(u)) as i64))
}

/// `G[y][u] = tau(C'_y C'_u) / P_lambda(q)`.
pub fn gram_matrix(h: &HTable, lambda: ParabolicSet, ys: &[Elt], us: &[Elt]) -> Result<Mat<LaurentInt>> {
    let g = h.group();
    let poincare = LaurentInt::from_terms(
        g.parabolic_subgroup(lambda).into_iter().map(|w| (2 * g.length(w) as i64, num_bigint::BigInt::from(1))),
    );
    let mut m = Mat::filled(ys.len(), us.len(), LaurentInt::zero());
    for (i, &y) in ys.iter().enumerate() {
        for (j, &u) in us.iter().enumerate() {
            let tv = tau_cprime(h, y, u);
            let q = laurent_div_exact(&tv, &poincare)
                .ok_or_else(|| Error::Invariant("pairing is not divisible by the Poincare polynomial".into()))?;
            m.set(i, j, q);
        }
    }
    Ok(m)
}

/// Everything about one q-permutation module.
#[derive(Clone, Debug)]
pub struct QpermData {
    pub lambda: ParabolicSet,
    /// `x_lambda H` in the C'-basis.
    pub right_basis: Vec<Elt>,
    pub right: HModule<Integral>,
    /// `H x_lambda` in the C'-basis.
    pub left_basis: Vec<Elt>,
    pub left: HModule<Integral>,
    pub gram: Mat<LaurentInt>,
    /// The dual of `H x_lambda`, in the dual basis ordered by `(f, cell, element)`; this is the
    /// filtered model of `x_lambda H` used downstream.
    pub module: HModule<Integral>,
    pub order: Vec<Elt>,
    /// Left cell containing `w_{0,lambda}`.
    pub bottom: usize,
}

/// Builds `x_lambda H`, its dual-cell filtration and the Gram isomorphism to the dual of `H x_lambda`.
pub fn qperm_module(h: &HTable, cells: &CellDecomposition, lambda: ParabolicSet) -> Result<QpermData> {
    let g: &WeylGroup = h.group();
    let (right_basis, right) = qperm_right_cprime(h, lambda)?;
    let (left_basis, left) = qperm_left(h, lambda)?;
    let gram = gram_matrix(h, lambda, &right_basis, &left_basis)?;
    // psi: x_lambda H -> (H x_lambda)^*, matrix G^T; it must intertwine and be invertible over Z[t, t^-1].
    let phi = gram.transpose();
    let dual = left.dualize();
    for s in 0..g.rank() {
        if mat_mul(&Integral, &phi, &right.action[s]) != mat_mul(&Integral, &dual.action[s], &phi) {
            return Err(Error::Invariant(format!("Gram pairing does not intertwine T_s{}", s + 1)));
        }
    }
    let inv = elim::inverse(&GenericField, &phi.map(|x| GenericField.from_laurent(x)))
        .ok_or_else(|| Error::Invariant("Gram matrix is singular".into()))?;
    if inv.entries().iter().any(|x| x.to_laurent().is_none()) {
        return Err(Error::Invariant("Gram matrix is not invertible over Z[t, t^-1]".into()));
    }
    let mut order = left_basis.clone();
    let key = |u: Elt| {
        let lc = cells.left_cell_of(u);
        (cells.f_left(lc), cells.left_cell(lc)[0], u)
    };
    order.sort_by_key(|&u| key(u));
    let pos: Vec<usize> = order.iter().map(|u| left_basis.binary_search(u).expect("member")).collect();
    let action = dual.action.iter().map(|a| a.submatrix(&pos, &pos)).collect();
    let mut sections: Vec<(usize, usize)> = Vec::new();
    for &u in &order {
        let lc = cells.left_cell_of(u);
        match sections.last_mut() {
            Some(last) if last.1 == lc => last.0 += 1,
            _ => sections.push((1, lc)),
        }
    }
    let module = HModule::new(Integral, Side::Right, Presentation::of(g), action, Provenance::Qperm { lambda: lambda.0 })
        .with_filtration(FiltrationRecord { sections });
    let bottom = cells.left_cell_of(g.longest_element(lambda));
    Ok(QpermData { lambda, right_basis, right, left_basis, left, gram, module, order, bottom })
}

/// Every section above the bottom has strictly larger `f` than the bottom cell.
pub fn lemma_strict_check(cells: &CellDecomposition, data: &QpermData) -> bool {
    let labels = data.module.filtration.as_ref().map(|f| f.labels()).unwrap_or_default();
    let f0 = cells.f_left(data.bottom);
    labels.first() == Some(&data.bottom) && labels[1..].iter().all(|&lc| cells.f_left(lc) > f0)
}
