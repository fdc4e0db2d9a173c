//! Complex powers of the contact Laplacians per block, by functional
//! calculus and by the resolvent contour integral.

use hpowers_core::region::{contour_nodes, Contour};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::complex::{LaplacianBlock, LaplacianConvention, Slot};
use crate::error::RuminError;
use crate::spectrum::{hermitian_eigen, kernel_threshold, laplacian_block};
use crate::su2::{CMat, Su2Frame};

/// `Δ^s` with `λ ↦ λ^s` on the positive spectrum and 0 on the kernel.
pub fn block_power(m: &CMat, s: Complex64) -> CMat {
    let (vals, vecs) = hermitian_eigen(m);
    let tol = kernel_threshold(m);
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| if v > tol { Complex64::new(v, 0.0).powc(s) } else { Complex64::new(0.0, 0.0) }),
    ));
    &vecs * d * vecs.adjoint()
}

/// True when the block has a kernel.
pub fn has_kernel(m: &CMat) -> bool {
    let tol = kernel_threshold(m);
    hermitian_eigen(m).0.iter().any(|v| v.abs() <= tol)
}

pub const CONTOUR_NODES: usize = 256;

/// `(i/2π) ∫_Γ λ^s (Δ − λ)⁻¹ dλ` with `Γ` closed around the positive
/// spectrum; kernel eigenvalues lie outside the loop and drop out.
pub fn contour_power(m: &CMat, s: Complex64, nodes: usize) -> CMat {
    let (vals, _) = hermitian_eigen(m);
    let tol = kernel_threshold(m);
    let n = m.nrows();
    let positive: Vec<f64> = vals.into_iter().filter(|&v| v > tol).collect();
    if positive.is_empty() {
        return CMat::zeros(n, n);
    }
    let lo = positive[0];
    let hi = *positive.last().unwrap();
    let contour = Contour::new(0.5 * lo, nodes).expect("valid contour").with_r_max(2.0 * hi + lo);
    let mut acc = CMat::zeros(n, n);
    let id = CMat::identity(n, n);
    for node in contour_nodes(&contour) {
        let shifted = m - &id * node.lambda;
        let inv = shifted.lu().try_inverse().expect("λ off the spectrum");
        acc += inv * (node.pow(s) * node.weight);
    }
    acc * Complex64::new(0.0, 1.0 / (2.0 * std::f64::consts::PI))
}

/// `Δ^s` on every block `ℓ ≤ lmax` of one slot.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPower {
    pub slot: Slot,
    pub s: Complex64,
    pub blocks: Vec<CMat>,
    /// The kernel was present and `Re s < 0`, so it was projected out.
    pub kernel_projected: bool,
}

pub fn spectral_power(
    frame: &Su2Frame,
    conv: LaplacianConvention,
    slot: Slot,
    s: Complex64,
    lmax: usize,
) -> Result<SpectralPower, RuminError> {
    let mut blocks = Vec::with_capacity(lmax + 1);
    let mut kernel = false;
    for level in 0..=lmax {
        let l = laplacian_block(frame, conv, level)?;
        let m = l.slot(slot);
        kernel |= has_kernel(m);
        blocks.push(block_power(m, s));
    }
    Ok(SpectralPower {
        slot,
        s,
        blocks,
        kernel_projected: kernel && s.re < 0.0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerCheck {
    pub slot: &'static str,
    pub level: usize,
    pub s: (f64, f64),
    /// `max |contour − eigen| / max(1, max |eigen|)`.
    pub contour_deviation: f64,
    pub kernel_projected: bool,
}

pub fn contour_check(l: &LaplacianBlock, slot: Slot, s: Complex64) -> PowerCheck {
    let m = l.slot(slot);
    let a = block_power(m, s);
    let b = contour_power(m, s, CONTOUR_NODES);
    PowerCheck {
        slot: slot.label(),
        level: l.level,
        s: (s.re, s.im),
        contour_deviation: (&a - &b).camax() / a.camax().max(1.0),
        kernel_projected: has_kernel(m) && s.re < 0.0,
    }
}

/// `‖Δ^sΔ^t − Δ^{s+t}‖ / max(1, ‖Δ^s‖‖Δ^t‖)`, Frobenius norms.
pub fn semigroup_deviation(m: &CMat, s: Complex64, t: Complex64) -> f64 {
    let a = block_power(m, s);
    let b = block_power(m, t);
    let c = block_power(m, s + t);
    (&a * &b - c).norm() / (a.norm() * b.norm()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CMat {
        let mut m = CMat::zeros(3, 3);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        m[(1, 1)] = Complex64::new(5.0, 0.0);
        m[(0, 1)] = Complex64::new(1.0, 1.0);
        m[(1, 0)] = Complex64::new(1.0, -1.0);
        m
    }

    #[test]
    fn first_power_is_identity_map() {
        let m = sample();
        assert!((block_power(&m, Complex64::new(1.0, 0.0)) - &m).camax() < 1e-13);
    }

    #[test]
    fn negative_power_is_pseudoinverse() {
        let m = sample();
        let p = block_power(&m, Complex64::new(-1.0, 0.0));
        let proj = block_power(&m, Complex64::new(0.0, 0.0));
        assert!((&m * &p - &proj).camax() < 1e-13);
        assert!((&m * &p * &m - &m).camax() < 1e-12);
        assert!(has_kernel(&m));
    }

    #[test]
    fn contour_matches_eigen() {
        let m = sample();
        let s = Complex64::new(-0.7, 0.0);
        let d = (block_power(&m, s) - contour_power(&m, s, CONTOUR_NODES)).camax();
        assert!(d < 1e-10, "{d:e}");
    }
}
