use hpowers_heisenberg::group::{gauge_homogeneity_defect, group_law_defect, unit_gauge};
use hpowers_heisenberg::{dilate, hnorm, weighted_order, GroupLaw};

#[test]
fn group_law_identities_on_random_triples() {
    for kappa in [1.0, 2.0, 0.0] {
        let d = group_law_defect(&GroupLaw::new(kappa), 7, 1000);
        assert!(d < 1e-12, "kappa {kappa}: {d:e}");
    }
}

#[test]
fn gauge_is_homogeneous() {
    let d = gauge_homogeneity_defect(11, 100);
    assert!(d < 1e-14, "{d:e}");
}

#[test]
fn gauge_values() {
    assert_eq!(hnorm([1.0, 0.0, 0.0]), 1.0);
    assert!((hnorm([0.0, 1.0, 1.0]) - 2f64.powf(0.25)).abs() < 1e-15);
    let u = unit_gauge([3.0, -1.0, 2.0]);
    assert!((hnorm(u) - 1.0).abs() < 1e-15);
    let xi = [0.4, 1.1, -0.7];
    assert!((hnorm(dilate(xi, 2.0).unwrap()) / hnorm(xi) - 2.0).abs() < 1e-14);
}

#[test]
fn weighted_orders() {
    assert_eq!(weighted_order(&[1, 0, 2]).unwrap(), 4);
    assert_eq!(weighted_order(&[0, 0, 0]).unwrap(), 0);
    assert_eq!(weighted_order(&[0, 3, 1]).unwrap(), 4);
    assert!(weighted_order(&[1, 2]).is_err());
}

#[test]
fn group_product_matches_hand_computation() {
    let law = GroupLaw::new(1.0);
    // x₀ + y₀ + (x₁y₂ − x₂y₁)/2 = 1 + 2 + (1·4 − 3·2)/2
    assert_eq!(law.mul([1.0, 1.0, 3.0], [2.0, 2.0, 4.0]), [2.0, 3.0, 7.0]);
}
