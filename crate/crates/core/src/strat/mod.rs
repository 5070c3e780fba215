//! Stratifying systems from q-permutation modules and iterated extensions over the local ring.

mod build;
mod direction;
mod endalg;
mod verify;

use serde::{Deserialize, Serialize};

use crate::cells::CellDecomposition;
use crate::coeffs::LocalRing;
use crate::error::Result;
use crate::hecke::HTable;
use crate::hmod::{cell_module, characters_at_one, dual_cell_module, hom_dim_by_characters, lemma_strict_check, qperm_module, HModule};
use crate::weyl::{ParabolicSet, WeylGroup};

pub use build::{build_x_omega, check_beforeprop, check_sections, BeforeProp, SectionCheck};
pub use direction::{verify_f_direction, DirectionEntry, DirectionReport};
pub use endalg::{delta, end_algebra, EndAlgebra, EndBlock};
pub use verify::{verify_strat, Condition, ExtEntry, HomEntry, StepEntry, StratReport, SummandRecord};

pub const DEFAULT_SECTION_BUDGET: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    First,
    Second,
}

impl std::str::FromStr for Variant {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(Variant::First),
            "second" => Ok(Variant::Second),
            _ => Err(crate::Error::Parse(format!("unknown variant `{s}`"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::First => "first",
            Variant::Second => "second",
        })
    }
}

/// Shared data for one `(type, e)`: cells, the dual cell modules over the local ring, and the
/// generic Hom dimensions between cell modules.
pub struct StratContext<'a> {
    pub h: &'a HTable<'a>,
    pub cells: &'a CellDecomposition,
    pub local: LocalRing,
    /// `S~_omega` for every left cell.
    pub dual_cells: Vec<HModule<LocalRing>>,
    /// `dim_K Hom(S_mu, S_nu)`, from characters at `t = 1`.
    pub generic_pair: Vec<Vec<usize>>,
}

impl<'a> StratContext<'a> {
    pub fn new(h: &'a HTable<'a>, cells: &'a CellDecomposition, e: u32) -> Self {
        let g = h.group();
        let local = LocalRing::new(e);
        let n = cells.num_left_cells();
        let dual_cells = (0..n).map(|lc| dual_cell_module(h, cells, lc).over(local.clone())).collect();
        let chars: Vec<_> = (0..n).map(|lc| characters_at_one(g, &cell_module(h, cells, lc))).collect();
        let generic_pair = (0..n).map(|a| (0..n).map(|b| hom_dim_by_characters(g, &chars[a], &chars[b])).collect()).collect();
        Self { h, cells, local, dual_cells, generic_pair }
    }

    pub fn group(&self) -> &WeylGroup {
        self.h.group()
    }

    pub fn e(&self) -> u32 {
        self.local.e()
    }

    /// `dim_K Hom(A, B)` for modules filtered by dual cell modules with the given section labels.
    pub fn generic_hom_from_sections(&self, a: &[usize], b: &[usize]) -> usize {
        a.iter().map(|&x| b.iter().map(|&y| self.generic_pair[x][y]).sum::<usize>()).sum()
    }
}

/// Left cells containing no `w_{0,lambda}`.
pub fn omega_prime(g: &WeylGroup, cells: &CellDecomposition) -> Vec<usize> {
    let hit: Vec<usize> = ParabolicSet::all(g.rank()).into_iter().map(|l| cells.left_cell_of(g.longest_element(l))).collect();
    (0..cells.num_left_cells()).filter(|lc| !hit.contains(lc)).collect()
}

/// The parabolic subset whose longest element lies in `lc`, if any.
pub fn parabolic_of_cell(g: &WeylGroup, cells: &CellDecomposition, lc: usize) -> Option<ParabolicSet> {
    ParabolicSet::all(g.rank()).into_iter().find(|&l| cells.left_cell_of(g.longest_element(l)) == lc)
}

/// One summand `T~_omega` of `T~+`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub cell: usize,
    /// `Some(lambda)` when `T~_omega = x_lambda H~`.
    pub lambda: Option<ParabolicSet>,
    pub module: HModule<LocalRing>,
    pub lemma_strict: Option<bool>,
    pub beforeprop: Option<BeforeProp>,
}

impl Summand {
    pub fn section_labels(&self) -> Vec<usize> {
        self.module.filtration.as_ref().map(|f| f.labels()).unwrap_or_default()
    }
}

/// `T~+` as the list of its summands, one per left cell.
pub fn build_t_plus(ctx: &StratContext, variant: Variant, budget: usize) -> Result<Vec<Summand>> {
    use rayon::prelude::*;
    let g = ctx.group();
    (0..ctx.cells.num_left_cells())
        .into_par_iter()
        .map(|lc| match parabolic_of_cell(g, ctx.cells, lc) {
            Some(lambda) => {
                let data = qperm_module(ctx.h, ctx.cells, lambda)?;
                Ok(Summand {
                    cell: lc,
                    lambda: Some(lambda),
                    lemma_strict: Some(lemma_strict_check(ctx.cells, &data)),
                    module: data.module.over(ctx.local.clone()),
                    beforeprop: None,
                })
            }
            None => {
                let module = build_x_omega(ctx, lc, variant, budget)?;
                let bp = check_beforeprop(ctx, lc, &module)?;
                Ok(Summand { cell: lc, lambda: None, module, lemma_strict: None, beforeprop: Some(bp) })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::KlTable;
    use crate::hmod::ext1_local;

    fn setup(label: &str) -> (&'static HTable<'static>, &'static CellDecomposition) {
        let g: &'static WeylGroup = Box::leak(Box::new(WeylGroup::from_label(label).unwrap()));
        let kl: &'static KlTable = Box::leak(Box::new(KlTable::new(g).unwrap()));
        let h: &'static HTable<'static> = Box::leak(Box::new(HTable::new(g, kl)));
        let cells: &'static CellDecomposition = Box::leak(Box::new(CellDecomposition::compute(h).unwrap()));
        (h, cells)
    }

    #[test]
    fn omega_prime_small_types() {
        for label in ["A1", "A2", "B2", "G2"] {
            let (h, cells) = setup(label);
            assert!(omega_prime(h.group(), cells).is_empty(), "{label}");
        }
        let (h, cells) = setup("A3");
        let op = omega_prime(h.group(), cells);
        assert_eq!(op.len(), 2);
        let fs: Vec<u32> = op.iter().map(|&lc| cells.f_left(lc)).collect();
        assert_eq!(fs, vec![6, 8]);
    }

    #[test]
    fn a1_t_plus() {
        let (h, cells) = setup("A1");
        let ctx = StratContext::new(h, cells, 3);
        let t = build_t_plus(&ctx, Variant::First, DEFAULT_SECTION_BUDGET).unwrap();
        let dims: Vec<usize> = t.iter().map(|s| s.module.dim()).collect();
        assert_eq!(dims, vec![2, 1]);
        let r = verify_strat(&ctx, Variant::First, DEFAULT_SECTION_BUDGET).unwrap();
        assert!(r.pass);
        assert!(!r.observational);
    }

    #[test]
    fn quotient_ext_reduction_matches_direct_computation() {
        let (h, cells) = setup("A2");
        let ctx = StratContext::new(h, cells, 3);
        let t = build_t_plus(&ctx, Variant::First, DEFAULT_SECTION_BUDGET).unwrap();
        for s in &t {
            let nsec = s.section_labels().len();
            for i in 0..nsec {
                let quot = s.module.quotient_by_step(i).unwrap();
                for other in &t {
                    assert!(ext1_local(&quot, &other.module).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn a3_extension_summands() {
        let (h, cells) = setup("A3");
        let ctx = StratContext::new(h, cells, 3);
        for lc in omega_prime(h.group(), cells) {
            let first = build_x_omega(&ctx, lc, Variant::First, DEFAULT_SECTION_BUDGET).unwrap();
            let second = build_x_omega(&ctx, lc, Variant::Second, DEFAULT_SECTION_BUDGET).unwrap();
            assert!(second.dim() >= first.dim());
            for x in [&first, &second] {
                x.check_relations().unwrap();
                let bp = check_beforeprop(&ctx, lc, x).unwrap();
                assert!(bp.pass, "{bp:?}");
            }
        }
        assert!(matches!(
            build_x_omega(&ctx, omega_prime(h.group(), cells)[0], Variant::First, 1),
            Err(crate::Error::SectionBudget(_))
        ));
    }

    #[test]
    fn delta_lattices_have_generic_rank() {
        let (h, cells) = setup("A2");
        let ctx = StratContext::new(h, cells, 3);
        let t = build_t_plus(&ctx, Variant::First, DEFAULT_SECTION_BUDGET).unwrap();
        let r = verify_strat(&ctx, Variant::First, DEFAULT_SECTION_BUDGET).unwrap();
        for lc in 0..cells.num_left_cells() {
            let d: usize = delta(&ctx, &t, lc).unwrap().iter().map(|s| s.dim()).sum();
            assert_eq!(d, r.delta_ranks[lc]);
        }
    }

    #[test]
    fn end_algebra_is_closed_under_composition() {
        use crate::coeffs::Ring;
        use crate::hmod::hom_space;
        use crate::linalg::{elim, mat_mul};
        let (h, cells) = setup("A2");
        let ctx = StratContext::new(h, cells, 3);
        let t = build_t_plus(&ctx, Variant::First, DEFAULT_SECTION_BUDGET).unwrap();
        let r = &ctx.local;
        let (a, b, c) = (&t[0].module, &t[1].module, &t[2].module);
        let ab = hom_space(a, b).unwrap();
        let bc = hom_space(b, c).unwrap();
        let ac = hom_space(a, c).unwrap();
        let flat = |m: &crate::linalg::Mat<crate::coeffs::LocalScalar>| elim::dense_to_sparse(r, m.entries());
        let ncols = a.dim() * c.dim();
        let span = elim::echelonize(r, ac.basis.iter().map(flat).collect(), ncols);
        for x in &ab.basis {
            for y in &bc.basis {
                let z = mat_mul(r, y, x);
                let res = span.residual(r, &flat(&z));
                assert!(res.iter().all(|(_, v)| r.is_zero(v)));
            }
        }
    }
}
