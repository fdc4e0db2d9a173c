use hpowers_core::oracle::{contour_quadrature, resolvent_integrand};
use hpowers_core::seeley::residue_power;
use hpowers_core::Contour;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_form_matches_quadrature_on_random_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let k = rng.gen_range(1..=4u32);
        let mu = rng.gen_range(0.5..10.0);
        let s = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
        let exact = residue_power(k, s, mu).unwrap();
        let c = Contour::new(mu / 2.0, 512).unwrap();
        let q = contour_quadrature(&resolvent_integrand(k, s, mu), &c, 1e-8);
        let rel = (q.value - exact).norm() / exact.norm();
        worst = worst.max(rel);
        assert!(rel < 1e-8, "k={k} s={s} mu={mu}: {} vs {exact} (rel {rel:.2e})", q.value);
    }
    eprintln!("worst relative error {worst:.3e}");
}

#[test]
fn normalizations_are_exact() {
    assert_eq!(residue_power(1, Complex64::new(0.0, 0.0), 7.0).unwrap(), Complex64::new(1.0, 0.0));
    assert_eq!(residue_power(1, Complex64::new(1.0, 0.0), 3.0).unwrap(), Complex64::new(3.0, 0.0));
    assert!(residue_power(0, Complex64::new(0.5, 0.0), 1.0).is_err());
}

#[test]
fn half_power_second_order_pole() {
    // The orientation fixed by the identity normalization gives the sign
    // (−1)^{k−1} for a pole of order k.
    let s = Complex64::new(0.5, 0.0);
    let closed = residue_power(2, s, 4.0).unwrap();
    assert!((closed - Complex64::new(-0.25, 0.0)).norm() < 1e-15);
    let c = Contour::new(2.0, 4096).unwrap();
    let q = contour_quadrature(&resolvent_integrand(2, s, 4.0), &c, 1e-8);
    assert!((q.value - closed).norm() / closed.norm() < 1e-8, "{:?}", q);
}

#[test]
fn open_contour_tail_is_small_when_integrand_decays() {
    let s = Complex64::new(-0.5, 0.3);
    let mu = 3.0;
    let exact = residue_power(1, s, mu).unwrap();
    let closed = contour_quadrature(&resolvent_integrand(1, s, mu), &Contour::new(1.5, 512).unwrap(), 1e-8);
    // tail ~ R_max^{Re s}
    assert!(closed.tail_estimate < 0.1);
    assert!((closed.value - exact).norm() < 1e-10);
}
