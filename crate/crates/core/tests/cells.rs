use heckestrat::cells::{closure, left_edges_from_generators, left_edges_from_h_table, left_edges_from_mu, CellDecomposition};
use heckestrat::hecke::{HTable, KlTable};
use heckestrat::weyl::{EltSet, WeylGroup};

fn as_vecs(sets: &[EltSet]) -> Vec<Vec<usize>> {
    sets.iter().map(|s| s.iter().collect()).collect()
}

#[test]
fn left_preorder_edge_sets_agree() {
    for ty in ["A1", "A2", "B2", "G2", "A3", "B3"] {
        let g = WeylGroup::from_label(ty).unwrap();
        let kl = KlTable::new(&g).unwrap();
        let h = HTable::new(&g, &kl);
        let n = g.size();
        let gens = as_vecs(&closure(n, &left_edges_from_generators(&h)));
        assert_eq!(gens, as_vecs(&closure(n, &left_edges_from_h_table(&h))), "{ty}: h-table supports");
        assert_eq!(gens, as_vecs(&closure(n, &left_edges_from_mu(&g, &kl))), "{ty}: W-graph edges");
        let cells = CellDecomposition::compute(&h).unwrap();
        for y in g.elements() {
            for x in g.elements() {
                assert_eq!(cells.leq_left(x, y), gens[y].binary_search(&x).is_ok());
            }
        }
    }
}

#[test]
fn right_cells_are_inverse_left_cells() {
    for ty in ["A2", "B2", "G2", "A3"] {
        let g = WeylGroup::from_label(ty).unwrap();
        let kl = KlTable::new(&g).unwrap();
        let h = HTable::new(&g, &kl);
        let cells = CellDecomposition::compute(&h).unwrap();
        for x in g.elements() {
            for y in g.elements() {
                assert_eq!(cells.leq_right(x, y), cells.leq_left(g.inverse(x), g.inverse(y)));
                let same_left = cells.left_cell_of(x) == cells.left_cell_of(y);
                assert!(!same_left || g.right_descents(x) == g.right_descents(y));
            }
        }
    }
}
