use hpowers_heisenberg::frame::{gaussian_bump, SymbolPoly, VectorFieldFrame};
use hpowers_heisenberg::kernel::{round_trip_error, Grid3};
use hpowers_heisenberg::quantize::{quantize_homogeneous, quantize_poly, symmetry_defect};
use hpowers_heisenberg::HHomogeneousSymbol;
use num_complex::Complex64;

fn interior_max(g: &Grid3, v: &[Complex64], r: f64) -> f64 {
    (0..g.len())
        .filter(|&i| g.point(i).iter().all(|c| c.abs() <= r))
        .map(|i| v[i].norm())
        .fold(0.0, f64::max)
}

#[test]
fn first_order_symbol_matches_finite_differences_at_second_order() {
    let frame = VectorFieldFrame::new(1.0);
    let err = |n: usize| {
        let g = Grid3::new(6.0, n).unwrap();
        let f = gaussian_bump(&g, 1.0, [0.2, -0.1, 0.3]);
        let q = quantize_poly(&frame.sigma(1), &f, &g);
        let fd = frame.apply_fd(1, &f, &g);
        // σ₁ quantizes X₁/i
        let diff: Vec<Complex64> = q.values.iter().zip(&fd).map(|(a, b)| a - b / Complex64::i()).collect();
        interior_max(&g, &diff, 3.0)
    };
    let (a, b) = (err(24), err(48));
    assert!(a < 0.1, "{a}");
    let ratio = a / b;
    assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
}

#[test]
fn unit_symbol_is_identity() {
    let g = Grid3::new(6.0, 16).unwrap();
    let f = gaussian_bump(&g, 1.0, [0.0; 3]);
    let q = quantize_poly(&SymbolPoly::constant(1.0), &f, &g);
    assert!(q.values.iter().zip(&f).all(|(a, b)| (a - b).norm() < 1e-14));
}

#[test]
fn sublaplacian_is_symmetric_and_real() {
    let frame = VectorFieldFrame::new(1.0);
    let g = Grid3::new(6.0, 24).unwrap();
    let f = gaussian_bump(&g, 1.0, [0.3, 0.0, -0.2]);
    let h = gaussian_bump(&g, 0.8, [-0.4, 0.5, 0.1]);
    let lap = frame.sublaplacian();
    let pf = quantize_poly(&lap, &f, &g).values;
    let ph = quantize_poly(&lap, &h, &g).values;
    let d = symmetry_defect(&pf, &f, &ph, &h);
    assert!(d < 1e-8, "{d:e}");
    let scale = pf.iter().map(|v| v.norm()).fold(0.0, f64::max);
    assert!(pf.iter().all(|v| v.im.abs() < 1e-10 * scale));
}

#[test]
fn frame_bracket_is_second_order() {
    let frame = VectorFieldFrame::new(2.0);
    let defect = |n: usize| {
        let g = Grid3::new(4.0, n).unwrap();
        frame.bracket_defect(&gaussian_bump(&g, 0.6, [0.0, 0.1, -0.1]), &g, 2.0)
    };
    let ratio = defect(24) / defect(48);
    assert!(ratio > 3.0 && ratio < 5.0, "{ratio}");
}

#[test]
fn abelian_multiplier_equals_general_path_limit() {
    // at κ = 0 the Fourier multiplier and the double sum see the same symbol
    let g = Grid3::new(4.0, 8).unwrap();
    let p = HHomogeneousSymbol::gauge_power(-2.0);
    let f = gaussian_bump(&g, 0.9, [0.0; 3]);
    let fast = quantize_homogeneous(&p, &VectorFieldFrame::new(0.0), &f, &g);
    let slow = quantize_homogeneous(&p, &VectorFieldFrame::new(1e-300), &f, &g);
    for (a, b) in fast.values.iter().zip(&slow.values) {
        assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()));
    }
}

#[test]
fn kernel_round_trip_on_annulus() {
    let g = Grid3::new(8.0, 128).unwrap();
    let p = HHomogeneousSymbol::parse("norm^(-2) * (1 + 0.3*xi1/norm)", -2.0).unwrap();
    let e = round_trip_error(&p, g).unwrap();
    assert!(e < 5e-2, "{e:e}");
}
