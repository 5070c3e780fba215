use proptest::prelude::*;

use heckestrat::cells::CellDecomposition;
use heckestrat::coeffs::LocalRing;
use heckestrat::hecke::{Basis, HTable, HeckeElt, KlTable};
use heckestrat::hmod::{cell_module, qperm_module};
use heckestrat::weyl::{ParabolicSet, WeylGroup};

fn setup(label: &str) -> (HTable<'static>, CellDecomposition) {
    let g: &'static WeylGroup = Box::leak(Box::new(WeylGroup::from_label(label).unwrap()));
    let kl: &'static KlTable = Box::leak(Box::new(KlTable::new(g).unwrap()));
    let h = HTable::new(g, kl);
    let cells = CellDecomposition::compute(&h).unwrap();
    (h, cells)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cprime_product_is_associative(ty in prop::sample::select(vec!["A2", "B2", "G2", "A3"]), i in 0usize..24, j in 0usize..24, k in 0usize..24) {
        let (h, _) = setup(ty);
        let n = h.group().size();
        let c = |w: usize| HeckeElt::basis_element(Basis::Cprime, w % n);
        let (x, y, z) = (c(i), c(j), c(k));
        prop_assert_eq!(h.mult(&h.mult(&x, &y), &z), h.mult(&x, &h.mult(&y, &z)));
    }

    #[test]
    fn qperm_modules_satisfy_relations(ty in prop::sample::select(vec!["A2", "B2", "G2", "A3"]), mask in 0u32..8, e in prop::sample::select(vec![3u32, 4, 6])) {
        let (h, cells) = setup(ty);
        let rank = h.group().rank();
        let l = ParabolicSet(mask & ((1 << rank) - 1));
        let d = qperm_module(&h, &cells, l).unwrap();
        prop_assert!(d.module.check_relations().is_ok());
        let local = d.module.over(LocalRing::new(e));
        prop_assert!(local.check_relations().is_ok());
        prop_assert!(local.to_residue().check_relations().is_ok());
        prop_assert!(local.filtration_is_invariant());
    }

    #[test]
    fn cell_module_dual_is_a_module(ty in prop::sample::select(vec!["B2", "G2", "A3"]), lc in 0usize..10) {
        let (h, cells) = setup(ty);
        let m = cell_module(&h, &cells, lc % cells.num_left_cells());
        prop_assert!(m.dualize().check_relations().is_ok());
        prop_assert_eq!(m.dim(), cells.left_cell(lc % cells.num_left_cells()).len());
    }
}
