//! Hom-spaces, Ext¹ through relation-derivative cocycles, and universal-extension building.

use std::collections::BTreeMap;

use super::{HModule, Provenance};
use crate::coeffs::{Field, LocalRing, LocalScalar, ModP, Ring};
use crate::error::{Error, Result};
use crate::linalg::elim::{axpy, echelonize, sparse_to_dense, SparseVec};
use crate::linalg::smith::LocalSmith;
use crate::linalg::{block2, block_diag, identity, mat_sub, zeros, Mat};
use crate::weyl::ParabolicSet;

fn compatible<R: Ring + Clone>(m: &HModule<R>, n: &HModule<R>) -> Result<()> {
    if m.side != n.side {
        return Err(Error::ModuleMismatch("modules live on different sides".into()));
    }
    if m.pres != n.pres || m.ring.tag() != n.ring.tag() {
        return Err(Error::ModuleMismatch("modules have different rings or presentations".into()));
    }
    Ok(())
}

/// Accumulates the linear form `X -> P X Q` (entry `(i,j)`) into `row`, where `X` is the
/// `n x m` block of unknowns starting at `offset`.
fn add_pxq<R: Ring>(ring: &R, row: &mut BTreeMap<usize, R::Elem>, p: &Mat<R::Elem>, q: &Mat<R::Elem>, i: usize, j: usize, offset: usize, m: usize) {
    for a in 0..p.ncols() {
        let pa = p.get(i, a);
        if ring.is_zero(pa) {
            continue;
        }
        for b in 0..q.nrows() {
            let qb = q.get(b, j);
            if ring.is_zero(qb) {
                continue;
            }
            let v = ring.mul(pa, qb);
            let key = offset + a * m + b;
            let cur = row.remove(&key).unwrap_or_else(|| ring.zero());
            let nv = ring.add(&cur, &v);
            if !ring.is_zero(&nv) {
                row.insert(key, nv);
            }
        }
    }
}

fn finish<R: Ring>(row: BTreeMap<usize, R::Elem>) -> SparseVec<R::Elem> {
    row.into_iter().collect()
}

/// Linear system for `Phi A^M_s = A^N_s Phi`; unknown `Phi[i][k]` has index `i * dim M + k`.
pub fn hom_system<R: Ring + Clone>(m: &HModule<R>, n: &HModule<R>) -> Vec<SparseVec<R::Elem>> {
    let r = &m.ring;
    let (dm, dn) = (m.dim(), n.dim());
    let idm = identity(r, dm);
    let idn = identity(r, dn);
    let neg_b: Vec<Mat<R::Elem>> = n.action.iter().map(|b| b.map(|x| r.neg(x))).collect();
    let mut rows = Vec::new();
    for s in 0..m.rank() {
        for i in 0..dn {
            for j in 0..dm {
                let mut row = BTreeMap::new();
                add_pxq(r, &mut row, &idn, &m.action[s], i, j, 0, dm);
                add_pxq(r, &mut row, &neg_b[s], &idm, i, j, 0, dm);
                let row = finish::<R>(row);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// A basis of `Hom(M, N)`; over the local ring it spans a saturated lattice.
#[derive(Clone, Debug)]
pub struct HomSpace<E> {
    pub basis: Vec<Mat<E>>,
}

impl<E> HomSpace<E> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn hom_space<F: Field + Clone>(m: &HModule<F>, n: &HModule<F>) -> Result<HomSpace<F::Elem>> {
    compatible(m, n)?;
    let r = &m.ring;
    let (dm, dn) = (m.dim(), n.dim());
    let ech = echelonize(r, hom_system(m, n), dm * dn);
    let basis = ech
        .kernel(r)
        .iter()
        .map(|v| {
            let d = sparse_to_dense(r, v, dm * dn);
            Mat::from_fn(dn, dm, |i, k| d[i * dm + k].clone())
        })
        .collect();
    Ok(HomSpace { basis })
}

pub fn hom_dim<F: Field + Clone>(m: &HModule<F>, n: &HModule<F>) -> Result<usize> {
    compatible(m, n)?;
    let ech = echelonize(&m.ring, hom_system(m, n), m.dim() * n.dim());
    Ok(m.dim() * n.dim() - ech.rank())
}

/// `{v : A_s v = q_s v for s in lambda}`; this is `Hom(x_lambda H, N)` by Frobenius reciprocity.
pub fn fixed_space<F: Field + Clone>(n: &HModule<F>, lambda: ParabolicSet) -> Vec<Vec<F::Elem>> {
    let r = &n.ring;
    let d = n.dim();
    let mut rows = Vec::new();
    for s in lambda.members() {
        let q = r.from_laurent(&n.pres.q(s));
        for i in 0..d {
            let row: SparseVec<F::Elem> = (0..d)
                .filter_map(|j| {
                    let mut x = n.action[s].get(i, j).clone();
                    if i == j {
                        x = r.sub(&x, &q);
                    }
                    (!r.is_zero(&x)).then_some((j, x))
                })
                .collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    echelonize(r, rows, d).kernel(r).iter().map(|v| sparse_to_dense(r, v, d)).collect()
}

/// Rank of `M / sum_s (T_s - q_s) M` for `s in lambda`, i.e. of `M tensor_H H x_lambda`.
pub fn coinvariant_dim<F: Field + Clone>(m: &HModule<F>, lambda: ParabolicSet) -> usize {
    let r = &m.ring;
    let d = m.dim();
    let mut rows = Vec::new();
    for s in lambda.members() {
        let q = r.from_laurent(&m.pres.q(s));
        for j in 0..d {
            // column j of A_s - q as a row
            let row: SparseVec<F::Elem> = (0..d)
                .filter_map(|i| {
                    let mut x = m.action[s].get(i, j).clone();
                    if i == j {
                        x = r.sub(&x, &q);
                    }
                    (!r.is_zero(&x)).then_some((i, x))
                })
                .collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    d - echelonize(r, rows, d).rank()
}

/// Derivatives of all defining relations, as rows over the unknowns `(c_s)_s`;
/// `c_s` is an `dim N x dim M` block at offset `s * dim N * dim M`.
pub fn cocycle_system<R: Ring + Clone>(m: &HModule<R>, n: &HModule<R>) -> Vec<SparseVec<R::Elem>> {
    let r = &m.ring;
    let (dm, dn) = (m.dim(), n.dim());
    let block = dm * dn;
    let idm = identity(r, dm);
    let idn = identity(r, dn);
    // Each relation is a list of (generator, P, Q) with derivative sum P c_s Q.
    let mut relations: Vec<Vec<(usize, Mat<R::Elem>, Mat<R::Elem>)>> = Vec::new();
    for s in 0..m.rank() {
        let qm1 = r.sub(&r.from_laurent(&m.pres.q(s)), &r.one());
        let shifted = mat_sub(r, &n.action[s], &Mat::from_fn(dn, dn, |i, j| if i == j { qm1.clone() } else { r.zero() }));
        relations.push(vec![(s, shifted, idm.clone()), (s, idn.clone(), m.action[s].clone())]);
    }
    for (w1, w2) in m.pres.braid_words() {
        let mut terms = Vec::new();
        for (word, sign) in [(&w1, false), (&w2, true)] {
            for k in 0..word.len() {
                let mut pre = n.word_matrix(&word[..k]);
                if sign {
                    pre = pre.map(|x| r.neg(x));
                }
                let post = m.word_matrix(&word[k + 1..]);
                terms.push((word[k], pre, post));
            }
        }
        relations.push(terms);
    }
    let mut rows = Vec::new();
    for rel in &relations {
        for i in 0..dn {
            for j in 0..dm {
                let mut row = BTreeMap::new();
                for (s, p, q) in rel {
                    add_pxq(r, &mut row, p, q, i, j, s * block, dm);
                }
                let row = finish::<R>(row);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// Coboundaries `c_s = A^N_s h - h A^M_s` of the elementary matrices `h = E_{ab}`.
pub fn coboundary_rows<R: Ring + Clone>(m: &HModule<R>, n: &HModule<R>) -> Vec<SparseVec<R::Elem>> {
    let r = &m.ring;
    let (dm, dn) = (m.dim(), n.dim());
    let block = dm * dn;
    let mut rows = Vec::with_capacity(block);
    for a in 0..dn {
        for b in 0..dm {
            let mut row: BTreeMap<usize, R::Elem> = BTreeMap::new();
            for s in 0..m.rank() {
                let mut push = |key: usize, v: R::Elem| {
                    let cur = row.remove(&key).unwrap_or_else(|| r.zero());
                    let nv = r.add(&cur, &v);
                    if !r.is_zero(&nv) {
                        row.insert(key, nv);
                    }
                };
                for i in 0..dn {
                    let x = n.action[s].get(i, a);
                    if !r.is_zero(x) {
                        push(s * block + i * dm + b, x.clone());
                    }
                }
                for j in 0..dm {
                    let x = m.action[s].get(b, j);
                    if !r.is_zero(x) {
                        push(s * block + a * dm + j, r.neg(x));
                    }
                }
            }
            rows.push(row.into_iter().collect());
        }
    }
    rows
}

/// `dim Ext¹(M, N)` over a field.
pub fn ext1_dim<F: Field + Clone>(m: &HModule<F>, n: &HModule<F>) -> Result<usize> {
    compatible(m, n)?;
    let r = &m.ring;
    let ncols = m.rank() * m.dim() * n.dim();
    let z1 = ncols - echelonize(r, cocycle_system(m, n), ncols).rank();
    let b1 = echelonize(r, coboundary_rows(m, n), ncols).rank();
    Ok(z1 - b1)
}

/// `Ext¹` over the local ring: a torsion module `sum Q/(Phi^v)`.
#[derive(Clone, Debug)]
pub struct ExtResult {
    /// Valuations `v > 0` of the nonunit invariant factors.
    pub invariant_valuations: Vec<i64>,
    /// One cocycle `(c_s)_s` generating each cyclic summand.
    pub cocycles: Vec<Vec<Mat<LocalScalar>>>,
    pub cocycle_rank: usize,
}

impl ExtResult {
    pub fn is_zero(&self) -> bool {
        self.invariant_valuations.is_empty()
    }

    pub fn num_summands(&self) -> usize {
        self.invariant_valuations.len()
    }

    /// Length of `Ext¹` as a module over the local ring.
    pub fn length(&self) -> i64 {
        self.invariant_valuations.iter().sum()
    }
}

fn split_cocycle(v: &[LocalScalar], rank: usize, dn: usize, dm: usize) -> Vec<Mat<LocalScalar>> {
    (0..rank).map(|s| Mat::from_fn(dn, dm, |i, j| v[s * dn * dm + i * dm + j].clone())).collect()
}

fn satisfies<R: Ring>(ring: &R, rows: &[SparseVec<R::Elem>], v: &[R::Elem]) -> bool {
    rows.iter().all(|row| {
        let mut acc = ring.zero();
        for (c, x) in row {
            acc = ring.add(&acc, &ring.mul(x, &v[*c]));
        }
        ring.is_zero(&acc)
    })
}

/// `dim` of the cocycle space, certified from a specialisation mod p when possible.
fn cocycle_rank_over_fraction_field(m: &HModule<LocalRing>, n: &HModule<LocalRing>, ncols: usize, expected: usize) -> usize {
    if let (Some(mp), Some(np)) = (m.to_modp(ModP::DEFAULT), n.to_modp(ModP::DEFAULT)) {
        let upper = ncols - echelonize(&ModP::DEFAULT, cocycle_system(&mp, &np), ncols).rank();
        if upper == expected {
            return upper;
        }
    }
    ncols - echelonize(&m.ring, cocycle_system(m, n), ncols).rank()
}

/// `Ext¹_Q(M, N)` with invariant factors and generating cocycles.
pub fn ext1_local(m: &HModule<LocalRing>, n: &HModule<LocalRing>) -> Result<ExtResult> {
    compatible(m, n)?;
    let r = &m.ring;
    let (dm, dn) = (m.dim(), n.dim());
    let ncols = m.rank() * dm * dn;
    let cob = coboundary_rows(m, n);
    // Saturation of the coboundary span: valuation-pivoted RREF keeps rows integral with unit pivots.
    let sat = echelonize(r, cob.clone(), ncols);
    let b1 = sat.rank();
    let z1 = cocycle_rank_over_fraction_field(m, n, ncols, b1);
    if z1 != b1 {
        return Err(Error::Invariant(format!("cocycle space has rank {z1} but coboundaries have rank {b1}: generic Ext¹ is nonzero")));
    }
    // Coordinates of the coboundary generators in the saturated basis: entries at the pivots.
    let pivot_pos: BTreeMap<usize, usize> = sat.pivots.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut gmat: Vec<BTreeMap<usize, LocalScalar>> = vec![BTreeMap::new(); b1];
    for (j, row) in cob.iter().enumerate() {
        for (c, x) in row {
            if let Some(&i) = pivot_pos.get(c) {
                gmat[i].insert(j, x.clone());
            }
        }
    }
    let smith = LocalSmith::compute(r, gmat.into_iter().map(|m| m.into_iter().collect()).collect());
    if smith.rank() != b1 {
        return Err(Error::Invariant("coboundaries do not have full rank in the saturation".into()));
    }
    let cocycle_rows = cocycle_system(m, n);
    let mut invariant_valuations = Vec::new();
    let mut cocycles = Vec::new();
    for (row, _, piv) in &smith.pivots {
        let v = piv.valuation();
        if v == 0 {
            continue;
        }
        let u = smith.basis_vector(r, *row);
        let mut acc: SparseVec<LocalScalar> = Vec::new();
        for (k, coeff) in u.iter().enumerate() {
            if !coeff.is_zero() {
                acc = axpy(r, &acc, coeff, &sat.rows[k]);
            }
        }
        let dense = sparse_to_dense(r, &acc, ncols);
        if !satisfies(r, &cocycle_rows, &dense) {
            return Err(Error::NotCocycle("Smith generator fails a relation derivative".into()));
        }
        invariant_valuations.push(v);
        cocycles.push(split_cocycle(&dense, m.rank(), dn, dm));
    }
    Ok(ExtResult { invariant_valuations, cocycles, cocycle_rank: z1 })
}

/// `X` with action `[[rho_Y, c], [0, rho_M (x) I_k]]` for the given classes `c^1..c^k`.
pub fn build_sum_extension<R: Ring + Clone>(m: &HModule<R>, y: &HModule<R>, classes: &[Vec<Mat<R::Elem>>]) -> Result<HModule<R>> {
    compatible(m, y)?;
    if classes.is_empty() {
        return Ok(y.clone());
    }
    let r = &m.ring;
    let (dm, dy) = (m.dim(), y.dim());
    let rows = cocycle_system(m, y);
    for (k, c) in classes.iter().enumerate() {
        if c.len() != m.rank() || c.iter().any(|b| b.nrows() != dy || b.ncols() != dm) {
            return Err(Error::ModuleMismatch(format!("class {k} has the wrong shape")));
        }
        let flat: Vec<R::Elem> = c.iter().flat_map(|b| b.entries().to_vec()).collect();
        if !satisfies(r, &rows, &flat) {
            return Err(Error::NotCocycle(format!("class {k}")));
        }
    }
    let k = classes.len();
    let action = (0..m.rank())
        .map(|s| {
            let top = Mat::from_fn(dy, dm * k, |i, j| classes[j / dm][s].get(i, j % dm).clone());
            let copies: Vec<&Mat<R::Elem>> = (0..k).map(|_| &m.action[s]).collect();
            block2(&y.action[s], &top, &zeros(r, dm * k, dy), &block_diag(r, &copies))
        })
        .collect();
    let filtration = match (&y.filtration, &m.filtration) {
        (Some(fy), Some(fm)) => Some((0..k).fold(fy.clone(), |acc, _| acc.concat(fm))),
        _ => None,
    };
    Ok(HModule {
        ring: m.ring.clone(),
        side: y.side,
        pres: y.pres.clone(),
        action,
        provenance: Provenance::Extension { base: Box::new(y.provenance.clone()), steps: k },
        filtration,
    })
}
