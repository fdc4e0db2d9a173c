use std::f64::consts::PI;

use hpowers_core::battery::{constant_coefficient, variable_coefficient};
use hpowers_core::seeley::{complex_power_terms, resolvent_terms};
use hpowers_core::{rat, ClassicalSymbol, ConicRegion, GaussQ, MultiIndex, PoleSum, Poly, Sector};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Central difference of `f` along one coordinate of `(x, ξ)`.
fn central(f: &dyn Fn(&[f64], &[f64]) -> Complex64, x: &[f64], xi: &[f64], var: usize, h: f64) -> Complex64 {
    let d = x.len();
    let (mut xp, mut xm, mut ep, mut em) = (x.to_vec(), x.to_vec(), xi.to_vec(), xi.to_vec());
    if var < d {
        xp[var] += h;
        xm[var] -= h;
    } else {
        ep[var - d] += h;
        em[var - d] -= h;
    }
    (f(&xp, &ep) - f(&xm, &em)) / (2.0 * h)
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ops = variable_coefficient();
    for trial in 0..20 {
        let (_, p) = &ops[trial % ops.len()];
        let d = p.dim();
        let q = resolvent_terms(p, 2).unwrap();
        let base = &q.base;
        let part: &PoleSum = &q.parts[1 + trial % 2];
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let xi: Vec<f64> = (0..d).map(|_| rng.gen_range(0.5..1.5)).collect();
        let lambda = Complex64::new(rng.gen_range(-3.0..-0.5), rng.gen_range(-1.0..1.0));
        let f = |x: &[f64], xi: &[f64]| part.eval(base, x, xi, lambda);
        for i in 0..d {
            let mut alpha = vec![0u32; d];
            alpha[i] = 1;
            let exact = part.diff_xi(&alpha, base).eval(base, &x, &xi, lambda);
            let fd = central(&f, &x, &xi, d + i, 1e-5);
            assert!(rel(fd, exact) < 1e-6, "∂ξ{i}: {exact} vs {fd}");
            let exact = part.diff_x(&alpha, base).eval(base, &x, &xi, lambda);
            // D_x = −i ∂_x
            let fd = central(&f, &x, &xi, i, 1e-5) * Complex64::new(0.0, -1.0);
            if exact.norm() > 1e-12 {
                assert!(rel(fd, exact) < 1e-6, "Dx{i}: {exact} vs {fd}");
            } else {
                assert!(fd.norm() < 1e-8);
            }
        }
    }
}

#[test]
fn variable_base_x_derivative() {
    // D_x (ξ²(1+x²) − λ)^{−1} = 2i x ξ² (…)^{−2}
    let base = &Poly::xi(1, 0).pow(2) + &(&Poly::x(1, 0).pow(2) * &Poly::xi(1, 0).pow(2));
    let out = PoleSum::single(1, Poly::one(1)).diff_x(&[1], &base);
    let (x, xi, lambda) = ([0.3], [1.2], Complex64::new(-0.7, 0.2));
    let w = base.eval(&x, &xi) - lambda;
    let expected = Complex64::new(0.0, 2.0 * 0.3 * 1.44) / (w * w);
    assert!(rel(out.eval(&base, &x, &xi, lambda), expected) < 1e-14);
}

#[test]
fn second_xi_derivative_matches_hand_formula() {
    let base = Poly::xi(1, 0).pow(2);
    let out = PoleSum::single(1, Poly::one(1)).diff_xi(&[2], &base);
    for &(xi, lambda) in &[(0.7, Complex64::new(-1.0, 0.5)), (2.0, Complex64::new(-0.1, -2.0))] {
        let w = Complex64::new(xi * xi, 0.0) - lambda;
        let hand = 8.0 * xi * xi / (w * w * w) - 2.0 / (w * w);
        assert!(rel(out.eval(&base, &[0.0], &[xi], lambda), hand) < 1e-8);
    }
}

#[test]
fn resolvent_terms_are_homogeneous() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, p) in constant_coefficient().into_iter().chain(variable_coefficient()) {
        let d = p.dim();
        let m = p.order() as i32;
        let q = resolvent_terms(&p, 4).unwrap();
        for term in q.all_terms() {
            let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let xi: Vec<f64> = (0..d).map(|_| rng.gen_range(0.5..1.5)).collect();
            let lambda = Complex64::new(rng.gen_range(-2.0..-0.1), rng.gen_range(-1.0..1.0));
            let v = term.eval(&q.base, &x, &xi, lambda);
            for t in [2.0f64, 3.0, 0.5] {
                let txi: Vec<f64> = xi.iter().map(|a| a * t).collect();
                let scaled = term.eval(&q.base, &x, &txi, lambda * t.powi(m));
                let expected = v * t.powi(-m - term.j as i32);
                assert!(rel(scaled, expected) < 1e-12, "{name} j={} k={} t={t}", term.j, term.k);
            }
        }
    }
}

#[test]
fn power_parts_are_homogeneous() {
    let s = Complex64::new(0.3, 0.2);
    for (name, p) in constant_coefficient().into_iter().chain(variable_coefficient()) {
        let e = complex_power_terms(&p, 4).unwrap();
        let d = p.dim();
        let x: Vec<f64> = (0..d).map(|i| 0.25 - 0.5 * i as f64).collect();
        let xi: Vec<f64> = (0..d).map(|i| 0.8 + 0.3 * i as f64).collect();
        for j in 0..=4 {
            let v = e.eval_part(j, &x, &xi, s);
            if v.norm() == 0.0 {
                continue;
            }
            for t in [2.0f64, 3.0, 0.5] {
                let txi: Vec<f64> = xi.iter().map(|a| a * t).collect();
                let deg = s * p.order() as f64 - j as f64;
                let expected = v * (deg * t.ln()).exp();
                assert!(rel(e.eval_part(j, &x, &txi, s), expected) < 1e-12, "{name} j={j} t={t}");
            }
        }
    }
}

#[test]
fn multi_index_factorial_large() {
    let alpha = MultiIndex(vec![20, 12]);
    let f = alpha.factorial();
    assert_eq!(f.to_string(), "1165363954559823642624000000");
}

fn sector() -> Sector {
    Sector::new(PI / 2.0, 1.5 * PI).unwrap()
}

proptest! {
    #[test]
    fn conic_membership_is_scale_invariant(
        xi0 in -3.0f64..3.0, xi1 in -3.0f64..3.0,
        lr in -4.0f64..4.0, li in -4.0f64..4.0,
        t in 0.1f64..10.0,
    ) {
        prop_assume!(xi0.abs() + xi1.abs() > 1e-3);
        let region = ConicRegion::new(sector(), 0.7, 2);
        let lambda = Complex64::new(lr, li);
        let a = region.contains(&[xi0, xi1], lambda).unwrap();
        let boundary = (lambda.norm() - 0.7 * (xi0 * xi0 + xi1 * xi1)).abs();
        prop_assume!(boundary > 1e-9);
        let b = region.contains(&[t * xi0, t * xi1], lambda * t * t).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn symbol_json_round_trip(
        coeffs in proptest::collection::vec((-50i64..50, 1i64..20, -50i64..50, 1i64..20), 1..6),
        lower in -9i64..9,
    ) {
        let mut pm = Poly::xi(2, 0).pow(2);
        for (i, (a, b, c, e)) in coeffs.iter().enumerate() {
            let c = GaussQ::new(rat(*a, *b), rat(*c, *e));
            let x = [i as u32 % 3, (i as u32 + 1) % 2];
            let xi = [(i % 3) as u32, 2 - (i % 3) as u32];
            pm = &pm + &Poly::monomial(2, &x, &xi, c);
        }
        prop_assume!(!pm.is_zero());
        let p = ClassicalSymbol::new(2, 2, vec![pm, Poly::zero(2), Poly::constant(2, GaussQ::int(lower))]).unwrap();
        let back = ClassicalSymbol::from_json(&p.to_json()).unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn region_examples() {
    let region = ConicRegion::new(sector(), 0.5, 2);
    assert!(region.contains(&[10.0], Complex64::new(-1.0, 0.0)).unwrap());
    assert!(!region.contains(&[1.0], Complex64::new(0.5, 0.0)).unwrap());
    assert!(region.contains(&[1.0], Complex64::new(0.25, 0.0)).unwrap());
    assert!(region.contains(&[0.0], Complex64::new(0.0, 0.0)).is_err());
}
