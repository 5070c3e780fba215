//! Concrete Hecke modules presented by one matrix per generator, and their Hom and Ext¹.
//!
//! Matrices act on column vectors. A right module is stored through its action on column
//! vectors as well (`v T_s -> A_s v`); since the defining relations of the Hecke algebra are
//! stable under reversing words, both sides satisfy the same relation checks and share all
//! Hom/Ext code.

mod character;
mod construct;
mod homext;
mod nm;

use serde::{Deserialize, Serialize};

use crate::coeffs::{GenericField, Integral, LaurentInt, LocalRing, ModP, ResidueField, Ring, RingTag};
use crate::error::{Error, Result};
use crate::linalg::{block_diag, identity, is_zero_mat, mat_mul, mat_sub, Mat};
use crate::weyl::WeylGroup;

pub use character::{characters_at_one, hom_dim_by_characters};
pub use construct::{cell_module, dual_cell_module, gram_matrix, lemma_strict_check, qperm_left, qperm_module, qperm_right_cprime, QpermData};
pub use homext::{
    build_sum_extension, coinvariant_dim, cocycle_system, ext1_dim, ext1_local, fixed_space, hom_dim, hom_space, ExtResult,
    HomSpace,
};
pub use nm::{ideal_quotient, lemma_nm_basis, NmReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Coxeter data and parameters the action matrices must respect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub coxeter_matrix: Vec<Vec<u32>>,
    pub params: Vec<u32>,
}

impl Presentation {
    pub fn of(g: &WeylGroup) -> Self {
        Self { coxeter_matrix: g.datum().coxeter_matrix.clone(), params: g.datum().params.clone() }
    }

    pub fn rank(&self) -> usize {
        self.params.len()
    }

    /// `q_s = t^(2 c_s)`.
    pub fn q(&self, s: usize) -> LaurentInt {
        LaurentInt::monomial(1, 2 * self.params[s] as i64)
    }

    /// Braid relations as pairs of alternating words of length `m(s,u)`, for `s < u`.
    pub fn braid_words(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n = self.rank();
        let mut out = Vec::new();
        for s in 0..n {
            for u in s + 1..n {
                let m = self.coxeter_matrix[s][u] as usize;
                let w1 = (0..m).map(|i| if i % 2 == 0 { s } else { u }).collect();
                let w2 = (0..m).map(|i| if i % 2 == 0 { u } else { s }).collect();
                out.push((w1, w2));
            }
        }
        out
    }
}

/// How a module was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Cell { cell: usize },
    DualCell { cell: usize },
    Qperm { lambda: u32 },
    QpermLeft { lambda: u32 },
    Extension { base: Box<Provenance>, steps: usize },
    Dual { of: Box<Provenance> },
    BaseChange { of: Box<Provenance>, ring: RingTag },
    DirectSum { parts: Vec<Provenance> },
    Quotient { cells: Vec<usize> },
    Other { label: String },
}

/// A filtration whose terms are spanned by leading coordinates: section `i` occupies the
/// coordinate block after the previous ones and is labelled by a left cell.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationRecord {
    /// `(block dimension, left-cell label)`, bottom section first.
    pub sections: Vec<(usize, usize)>,
}

impl FiltrationRecord {
    pub fn labels(&self) -> Vec<usize> {
        self.sections.iter().map(|s| s.1).collect()
    }

    /// Coordinate range of each section.
    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.sections
            .iter()
            .map(|&(d, _)| {
                let r = start..start + d;
                start += d;
                r
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.sections.iter().map(|s| s.0).sum()
    }

    pub fn concat(&self, other: &FiltrationRecord) -> FiltrationRecord {
        FiltrationRecord { sections: self.sections.iter().chain(&other.sections).copied().collect() }
    }
}

/// A module over `R`, free of rank `dim`, with the action of each `T_s`.
#[derive(Clone, Debug)]
pub struct HModule<R: Ring> {
    pub ring: R,
    pub side: Side,
    pub pres: Presentation,
    pub action: Vec<Mat<R::Elem>>,
    pub provenance: Provenance,
    pub filtration: Option<FiltrationRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleExport {
    pub ring: RingTag,
    pub side: Side,
    pub dim: usize,
    pub provenance: Provenance,
    pub filtration: Option<FiltrationRecord>,
    /// `action[s][i][j]` in canonical scalar rendering.
    pub action: Vec<Vec<Vec<String>>>,
}

impl<R: Ring + Clone> HModule<R> {
    pub fn new(ring: R, side: Side, pres: Presentation, action: Vec<Mat<R::Elem>>, provenance: Provenance) -> Self {
        Self { ring, side, pres, action, provenance, filtration: None }
    }

    pub fn dim(&self) -> usize {
        self.action.first().map_or(0, |a| a.nrows())
    }

    pub fn rank(&self) -> usize {
        self.pres.rank()
    }

    pub fn with_filtration(mut self, f: FiltrationRecord) -> Self {
        self.filtration = Some(f);
        self
    }

    /// Matrix of `T_{s_1} ... T_{s_k}` (as composed maps on column vectors).
    pub fn word_matrix(&self, word: &[usize]) -> Mat<R::Elem> {
        let mut m = identity(&self.ring, self.dim());
        for &s in word {
            m = mat_mul(&self.ring, &m, &self.action[s]);
        }
        m
    }

    /// Checks the quadratic and braid relations exactly.
    pub fn check_relations(&self) -> Result<()> {
        let r = &self.ring;
        let n = self.dim();
        let id = identity(r, n);
        for (s, a) in self.action.iter().enumerate() {
            let q = r.from_laurent(&self.pres.q(s));
            let qi = Mat::from_fn(n, n, |i, j| if i == j { q.clone() } else { r.zero() });
            let lhs = mat_mul(r, &mat_sub(r, a, &qi), &crate::linalg::mat_add(r, a, &id));
            if !is_zero_mat(r, &lhs) {
                return Err(Error::Invariant(format!("quadratic relation fails for s{}", s + 1)));
            }
        }
        for (w1, w2) in self.pres.braid_words() {
            if self.word_matrix(&w1) != self.word_matrix(&w2) {
                return Err(Error::Invariant(format!("braid relation fails for s{} s{}", w1[0] + 1, w2[0] + 1)));
            }
        }
        Ok(())
    }

    pub fn dualize(&self) -> Self {
        Self {
            ring: self.ring.clone(),
            side: self.side.flip(),
            pres: self.pres.clone(),
            action: self.action.iter().map(|a| a.transpose()).collect(),
            provenance: Provenance::Dual { of: Box::new(self.provenance.clone()) },
            filtration: None,
        }
    }

    pub fn direct_sum(parts: &[&HModule<R>]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::ModuleMismatch("empty direct sum".into()))?;
        if parts.iter().any(|p| p.side != first.side || p.pres != first.pres) {
            return Err(Error::ModuleMismatch("direct sum of modules with different sides or presentations".into()));
        }
        let action = (0..first.rank())
            .map(|s| block_diag(&first.ring, &parts.iter().map(|p| &p.action[s]).collect::<Vec<_>>()))
            .collect();
        let filtration = parts
            .iter()
            .map(|p| p.filtration.clone())
            .collect::<Option<Vec<_>>>()
            .map(|fs| fs.iter().fold(FiltrationRecord::default(), |acc, f| acc.concat(f)));
        Ok(Self {
            ring: first.ring.clone(),
            side: first.side,
            pres: first.pres.clone(),
            action,
            provenance: Provenance::DirectSum { parts: parts.iter().map(|p| p.provenance.clone()).collect() },
            filtration,
        })
    }

    /// Base change along a ring map given entrywise.
    pub fn map_ring<S: Ring + Clone>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> HModule<S> {
        HModule {
            side: self.side,
            pres: self.pres.clone(),
            action: self.action.iter().map(|a| a.map(&f)).collect(),
            provenance: Provenance::BaseChange { of: Box::new(self.provenance.clone()), ring: target.tag() },
            filtration: self.filtration.clone(),
            ring: target,
        }
    }

    /// The diagonal block of section `i` of the filtration.
    pub fn section(&self, i: usize) -> Option<HModule<R>> {
        let f = self.filtration.as_ref()?;
        let r = f.ranges().get(i)?.clone();
        let idx: Vec<usize> = r.collect();
        Some(HModule {
            ring: self.ring.clone(),
            side: self.side,
            pres: self.pres.clone(),
            action: self.action.iter().map(|a| a.submatrix(&idx, &idx)).collect(),
            provenance: Provenance::Other { label: format!("section {i}") },
            filtration: None,
        })
    }

    /// Leading-coordinate spans of the filtration are submodules.
    pub fn filtration_is_invariant(&self) -> bool {
        let Some(f) = &self.filtration else { return true };
        if f.dim() != self.dim() {
            return false;
        }
        let ranges = f.ranges();
        self.action.iter().all(|a| {
            ranges.iter().all(|r| (r.start..self.dim()).all(|i| (0..r.start).all(|j| self.ring.is_zero(a.get(i, j)))))
        })
    }

    /// Quotient by the first `i` filtration terms (coordinates past section `i - 1`).
    pub fn quotient_by_step(&self, i: usize) -> Option<HModule<R>> {
        let f = self.filtration.as_ref()?;
        let ranges = f.ranges();
        let start = if i == 0 { 0 } else { ranges.get(i - 1)?.end };
        let idx: Vec<usize> = (start..self.dim()).collect();
        Some(HModule {
            ring: self.ring.clone(),
            side: self.side,
            pres: self.pres.clone(),
            action: self.action.iter().map(|a| a.submatrix(&idx, &idx)).collect(),
            provenance: Provenance::Other { label: format!("quotient by F^{i}") },
            filtration: Some(FiltrationRecord { sections: f.sections[i..].to_vec() }),
        })
    }

    pub fn export(&self) -> ModuleExport {
        ModuleExport {
            ring: self.ring.tag(),
            side: self.side,
            dim: self.dim(),
            provenance: self.provenance.clone(),
            filtration: self.filtration.clone(),
            action: self
                .action
                .iter()
                .map(|a| (0..a.nrows()).map(|i| a.row(i).iter().map(|x| self.ring.render(x)).collect()).collect())
                .collect(),
        }
    }
}

impl HModule<Integral> {
    pub fn over<S: Ring + Clone>(&self, target: S) -> HModule<S> {
        let t2 = target.clone();
        self.map_ring(target, move |x| t2.from_laurent(x))
    }
}

impl HModule<LocalRing> {
    pub fn to_residue(&self) -> HModule<ResidueField> {
        let ring = self.ring.clone();
        self.map_ring(self.ring.residue(), move |x| ring.reduce(x))
    }

    pub fn to_generic(&self) -> HModule<GenericField> {
        self.map_ring(GenericField, |x| x.value().clone())
    }

    /// Specialisation at a random point mod p, if no denominator vanishes there.
    pub fn to_modp(&self, p: ModP) -> Option<HModule<ModP>> {
        let entries_ok = self.action.iter().all(|a| a.entries().iter().all(|x| p.eval_ratfunc(x.value()).is_some()));
        entries_ok.then(|| self.map_ring(p, move |x| p.eval_ratfunc(x.value()).expect("checked")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::CellDecomposition;
    use crate::coeffs::LocalRing;
    use crate::hecke::{HTable, KlTable};
    use crate::weyl::{EltSet, ParabolicSet};

    fn setup(label: &str) -> (HTable<'static>, CellDecomposition) {
        let g: &'static WeylGroup = Box::leak(Box::new(WeylGroup::from_label(label).unwrap()));
        let kl: &'static KlTable = Box::leak(Box::new(KlTable::new(g).unwrap()));
        let h = HTable::new(g, kl);
        let cells = CellDecomposition::compute(&h).unwrap();
        (h, cells)
    }

    #[test]
    fn a1_cell_modules() {
        let (h, cells) = setup("A1");
        let g = h.group();
        let top = cell_module(&h, &cells, cells.left_cell_of(g.identity()));
        let bottom = cell_module(&h, &cells, cells.left_cell_of(g.generator(0)));
        assert_eq!(top.action[0].get(0, 0), &LaurentInt::constant(-1));
        assert_eq!(bottom.action[0].get(0, 0), &LaurentInt::monomial(1, 2));
        top.check_relations().unwrap();
        bottom.check_relations().unwrap();
    }

    #[test]
    fn cell_modules_satisfy_relations() {
        for label in ["B2", "G2", "A3"] {
            let (h, cells) = setup(label);
            for lc in 0..cells.num_left_cells() {
                cell_module(&h, &cells, lc).check_relations().unwrap();
                dual_cell_module(&h, &cells, lc).check_relations().unwrap();
            }
        }
    }

    #[test]
    fn qperm_a2() {
        let (h, cells) = setup("A2");
        let g = h.group();
        let lambda = ParabolicSet::parse("s1", 2).unwrap();
        let q = qperm_module(&h, &cells, lambda).unwrap();
        assert_eq!(q.module.dim(), 3);
        q.module.check_relations().unwrap();
        q.right.check_relations().unwrap();
        assert!(q.module.filtration_is_invariant());
        assert_eq!(q.bottom, cells.left_cell_of(g.generator(0)));
        assert_eq!(q.module.filtration.as_ref().unwrap().sections[0].1, q.bottom);
    }

    #[test]
    fn generic_hom_between_cells() {
        let (h, cells) = setup("A2");
        let k = GenericField;
        let mods: Vec<_> = (0..cells.num_left_cells()).map(|lc| cell_module(&h, &cells, lc).over(k)).collect();
        for a in 0..mods.len() {
            for b in 0..mods.len() {
                let same = cells.two_sided_of_left(a) == cells.two_sided_of_left(b);
                assert_eq!(hom_dim(&mods[a], &mods[b]).unwrap(), usize::from(same));
                assert_eq!(ext1_dim(&mods[a], &mods[b]).unwrap(), 0);
            }
        }
        let chis: Vec<_> = (0..mods.len()).map(|lc| characters_at_one(h.group(), &cell_module(&h, &cells, lc))).collect();
        assert_eq!(hom_dim_by_characters(h.group(), &chis[1], &chis[2]), hom_dim(&mods[1], &mods[2]).unwrap());
    }

    #[test]
    fn local_ext_matches_hom_jump() {
        let (h, cells) = setup("A2");
        let q = LocalRing::new(3);
        let n = cells.num_left_cells();
        let mods: Vec<_> = (0..n).map(|lc| cell_module(&h, &cells, lc).over(q.clone())).collect();
        for a in 0..n {
            for b in 0..n {
                let ext = ext1_local(&mods[a], &mods[b]).unwrap();
                let hk = hom_dim(&mods[a].to_residue(), &mods[b].to_residue()).unwrap();
                let hg = hom_dim(&mods[a].to_generic(), &mods[b].to_generic()).unwrap();
                assert_eq!(ext.num_summands(), hk - hg, "cells {a} {b}");
                assert!(hom_dim(&mods[a].to_residue(), &mods[b].to_residue()).unwrap() >= hg);
                if a == b {
                    assert!(ext.is_zero());
                }
            }
        }
    }

    #[test]
    fn extension_kills_classes() {
        let (h, cells) = setup("A2");
        let g = h.group();
        let q = LocalRing::new(3);
        let m = cell_module(&h, &cells, cells.left_cell_of(g.identity())).over(q.clone());
        let mid = cell_module(&h, &cells, cells.left_cell_of(g.generator(0))).over(q.clone());
        let ext = ext1_local(&m, &mid).unwrap();
        assert_eq!(ext.invariant_valuations, vec![1]);
        let x = build_sum_extension(&m, &mid, &ext.cocycles).unwrap();
        x.check_relations().unwrap();
        assert_eq!(x.dim(), mid.dim() + ext.num_summands() * m.dim());
        assert!(x.filtration_is_invariant());
        assert!(ext1_local(&m, &x).unwrap().is_zero());
    }

    #[test]
    fn nm_bases() {
        let (h, _) = setup("A2");
        let g = h.group();
        let all: EltSet = {
            let mut s = EltSet::new(g.size());
            g.elements().for_each(|w| s.insert(w));
            s
        };
        let (basis, m) = ideal_quotient(&h, &all, &EltSet::new(g.size())).unwrap();
        let k = LocalRing::new(3).residue();
        let mk = m.over(k);
        let r = lemma_nm_basis(&h, &basis, &mk, ParabolicSet::parse("s1", 2).unwrap()).unwrap();
        assert!(r.pass);
        assert_eq!(r.predicted.len(), 3);
        let r = lemma_nm_basis(&h, &basis, &mk, ParabolicSet::empty()).unwrap();
        assert_eq!(r.solution_dim, 6);
        let m2 = m.over(LocalRing::new(2).residue());
        assert_eq!(lemma_nm_basis(&h, &basis, &m2, ParabolicSet::parse("s2", 2).unwrap()), Err(Error::NotInvertible(2)));
    }
}
