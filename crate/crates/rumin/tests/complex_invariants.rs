use hpowers_rumin::complex::{hodge_dimensions, LaplacianBlock, LaplacianConvention, RuminBlock, Slot};
use hpowers_rumin::forms::db_blocks;
use hpowers_rumin::spectrum::{harmonic_dimensions, weyl_exponent};
use hpowers_rumin::Su2Frame;

const LMAX: usize = 40;

#[test]
fn complex_and_defect_identity_through_level_40() {
    for c in [1.0, 2.0] {
        let f = Su2Frame::new(c).unwrap();
        for level in 0..=LMAX {
            let r = RuminBlock::new(&f, level).unwrap();
            assert!(r.complex_defect() < 1e-10, "c {c} level {level}");
            let db = db_blocks(&f, level);
            assert!(db.defect() <= 1e-12 * db.scale().max(1.0), "c {c} level {level}: {}", db.defect());
        }
    }
}

#[test]
fn harmonic_forms_recover_betti_numbers() {
    for c in [1.0, 2.0] {
        let f = Su2Frame::new(c).unwrap();
        let dims = harmonic_dimensions(&f, LaplacianConvention::default(), LMAX).unwrap();
        assert_eq!(dims, [1, 0, 0, 1], "c = {c}");
    }
}

#[test]
fn hodge_decomposition_per_block() {
    let f = Su2Frame::new(2.0).unwrap();
    for level in [0, 1, 2, 7] {
        let r = RuminBlock::new(&f, level).unwrap();
        let l = LaplacianBlock::new(&r, LaplacianConvention::default()).unwrap();
        let n = level + 1;
        for slot in Slot::ALL {
            let (h, a, b) = hodge_dimensions(&r, &l, slot);
            assert_eq!(h + a + b, slot.rank() * n, "slot {slot:?} level {level}");
        }
    }
}

#[test]
fn weyl_exponents() {
    for c in [1.0, 2.0] {
        let f = Su2Frame::new(c).unwrap();
        for slot in Slot::ALL {
            let w = weyl_exponent(&f, LaplacianConvention::default(), slot, LMAX).unwrap();
            let target = 4.0 / slot.order() as f64;
            eprintln!("c {c} slot {slot:?}: {:.4} (window {:?})", w.exponent, w.window);
            assert!((w.exponent - target).abs() < 0.15, "c {c} slot {slot:?}: {}", w.exponent);
        }
    }
}
