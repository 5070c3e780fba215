use std::fs;

use heckestrat::cache::{Cache, PayloadKind};
use heckestrat::cells::CellDecomposition;
use heckestrat::hecke::{HTable, KlTable};
use heckestrat::weyl::WeylGroup;

#[test]
fn round_trip_matches_fresh_computation() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let g = WeylGroup::from_label("B2").unwrap();
    let kl = cache.kl_table(&g).unwrap();
    let h = cache.h_table(&g, &kl).unwrap();
    let cells = cache.cells(&h).unwrap();
    for kind in [PayloadKind::Kl, PayloadKind::Hconst, PayloadKind::Cells] {
        assert!(cache.path("B2", kind).exists());
    }

    let fresh_kl = KlTable::new(&g).unwrap();
    let fresh_h = HTable::new(&g, &fresh_kl);
    assert_eq!(kl, fresh_kl);
    assert_eq!(cells, CellDecomposition::compute(&fresh_h).unwrap());

    let kl2 = cache.kl_table(&g).unwrap();
    let h2 = cache.h_table(&g, &kl2).unwrap();
    assert_eq!(kl2, fresh_kl);
    assert_eq!(cache.cells(&h2).unwrap(), cells);
    for x in g.elements() {
        for y in g.elements() {
            assert_eq!(h2.product(x, y), fresh_h.product(x, y));
        }
    }
}

#[test]
fn mismatched_header_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let g = WeylGroup::from_label("A2").unwrap();
    let kl = cache.kl_table(&g).unwrap();
    let path = cache.path("A2", PayloadKind::Kl);
    let text = fs::read_to_string(&path).unwrap().replacen("\"format_version\":1", "\"format_version\":999", 1);
    fs::write(&path, text).unwrap();
    assert!(cache.load::<KlTable>("A2", PayloadKind::Kl).is_none());
    assert_eq!(cache.kl_table(&g).unwrap(), kl);
    assert!(cache.load::<KlTable>("A2", PayloadKind::Kl).is_some());

    // An entry stored under another type's name is rejected too.
    fs::copy(&path, cache.path("B2", PayloadKind::Kl)).unwrap();
    assert!(cache.load::<KlTable>("B2", PayloadKind::Kl).is_none());
}

#[test]
fn corrupt_entry_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let g = WeylGroup::from_label("G2").unwrap();
    let kl = cache.kl_table(&g).unwrap();
    let h = cache.h_table(&g, &kl).unwrap();
    let cells = cache.cells(&h).unwrap();
    fs::write(cache.path("G2", PayloadKind::Cells), "{not json").unwrap();
    fs::write(cache.path("G2", PayloadKind::Hconst), "{\"header\":{}}").unwrap();
    let h2 = cache.h_table(&g, &kl).unwrap();
    assert_eq!(cache.cells(&h2).unwrap(), cells);
}
