use proptest::prelude::*;

use heckestrat::coeffs::{GenericField, LaurentInt, LocalRing, Ring};
use heckestrat::linalg::elim::{dense_to_sparse, echelonize, rank, sparse_to_dense};
use heckestrat::linalg::smith::LocalSmith;
use heckestrat::linalg::{mat_vec, Mat};
use heckestrat::weyl::WeylGroup;

fn laurent() -> impl Strategy<Value = LaurentInt> {
    prop::collection::vec((-3i64..=3, -4i64..=4), 0..5).prop_map(|terms| LaurentInt::from_terms(terms.into_iter().map(|(c, e)| (e, c))))
}

fn small_poly() -> impl Strategy<Value = LaurentInt> {
    prop::collection::vec(-2i64..=2, 1..4).prop_map(|cs| LaurentInt::from_terms(cs.into_iter().enumerate().map(|(e, c)| (2 * e as i64, c))))
}

proptest! {
    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn bar_is_a_ring_involution(a in laurent(), b in laurent()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert!((&a + &a.bar()).is_bar_invariant());
    }

    #[test]
    fn laurent_text_round_trip(a in laurent()) {
        prop_assert_eq!(a.to_string().parse::<LaurentInt>().unwrap(), a);
    }

    #[test]
    fn group_inverse_and_length(ty in prop::sample::select(vec!["A2", "B2", "G2", "A3", "B3"]), i in 0usize..48, j in 0usize..48) {
        let g = WeylGroup::from_label(ty).unwrap();
        let (x, y) = (i % g.size(), j % g.size());
        prop_assert_eq!(g.mul(x, g.inverse(x)), g.identity());
        prop_assert_eq!(g.length(x), g.length(g.inverse(x)));
        prop_assert_eq!(g.mul(g.mul(x, y), g.inverse(y)), x);
        prop_assert!(g.length(g.mul(x, y)) <= g.length(x) + g.length(y));
        prop_assert!(g.bruhat_leq(g.identity(), x) && g.bruhat_leq(x, g.longest()));
    }

    #[test]
    fn echelon_kernel_is_annihilated(rows in prop::collection::vec(prop::collection::vec(small_poly(), 4), 1..4)) {
        let k = GenericField;
        let m = Mat::from_rows(rows.iter().map(|r| r.iter().map(|p| k.from_laurent(p)).collect()).collect());
        let ech = echelonize(&k, (0..m.nrows()).map(|i| dense_to_sparse(&k, m.row(i))).collect(), 4);
        let kernel = ech.kernel(&k);
        prop_assert_eq!(ech.rank() + kernel.len(), 4);
        prop_assert_eq!(ech.rank(), rank(&k, &m));
        for v in &kernel {
            let image = mat_vec(&k, &m, &sparse_to_dense(&k, v, 4));
            prop_assert!(image.iter().all(|x| k.is_zero(x)));
        }
    }

    #[test]
    fn smith_counts_residue_and_generic_rank(e in prop::sample::select(vec![3u32, 4, 6]), rows in prop::collection::vec(prop::collection::vec(small_poly(), 3), 1..4)) {
        let q = LocalRing::new(e);
        let k = q.residue();
        let kk = GenericField;
        let sparse = rows.iter().map(|r| dense_to_sparse(&q, &r.iter().map(|p| q.from_laurent(p)).collect::<Vec<_>>())).collect();
        let smith = LocalSmith::compute(&q, sparse);
        let mk = Mat::from_rows(rows.iter().map(|r| r.iter().map(|p| k.from_laurent(p)).collect()).collect());
        let mg = Mat::from_rows(rows.iter().map(|r| r.iter().map(|p| kk.from_laurent(p)).collect()).collect());
        let vals = smith.invariant_valuations();
        prop_assert_eq!(vals.len(), rank(&kk, &mg));
        prop_assert_eq!(vals.iter().filter(|&&v| v == 0).count(), rank(&k, &mk));
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }
}
