//! The star product of x-independent Heisenberg symbols.
//!
//! With `k_j = F⁻¹p_j` and `(k₁ ∗ k₂)(g) = ∫ k₁(h) k₂(h⁻¹g) dh`, the product
//! `p₁ ⋆ p₂ = F(k₁ ∗ k₂)` only twists the central variable. Fixing `ξ₀` and
//! writing `ω = κξ₀/2`, `J(y₁, y₂) = (−y₂, y₁)`,
//!
//! ```text
//! (p₁ ⋆ p₂)(ξ₀, ξ') = ∫ A₁(y) p₂(ξ₀, ξ' + ωJy) dy,
//! A₁(y) = (2π)⁻² ∫ p₁(ξ₀, ξ' + η) e^{iy·η} dη,
//! ```
//!
//! so each output covector costs one 2-D FFT on the slice `ξ₀ = const`
//! plus a sum over the `y` grid. At `ω = 0` the discrete sum reproduces the
//! pointwise product exactly.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::HeisenbergError;
use crate::group::GroupLaw;

pub type RealSymbol<'a> = &'a dyn Fn([f64; 3]) -> f64;

/// Square grid `[−L, L)²` with `n` points per axis in `y`; the dual grid has
/// spacing `π/L` and the same number of points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceGrid {
    pub l: f64,
    pub n: usize,
}

impl SliceGrid {
    pub fn new(l: f64, n: usize) -> Result<Self, HeisenbergError> {
        if !(l > 0.0) || n < 8 || n % 2 != 0 {
            return Err(HeisenbergError::BadGrid(format!("L = {l}, n = {n}")));
        }
        Ok(SliceGrid { l, n })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn dual_spacing(&self) -> f64 {
        PI / self.l
    }

    /// Centred coordinate of index `j`.
    pub fn y(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.h()
    }

    pub fn eta(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.dual_spacing()
    }

    pub fn refined(&self) -> SliceGrid {
        SliceGrid {
            l: self.l,
            n: 2 * self.n,
        }
    }
}

pub struct StarEngine {
    pub law: GroupLaw,
    pub grid: SliceGrid,
    fft: Arc<dyn Fft<f64>>,
}

impl StarEngine {
    pub fn new(law: GroupLaw, grid: SliceGrid) -> Self {
        let fft = FftPlanner::new().plan_fft_inverse(grid.n);
        StarEngine { law, grid, fft }
    }

    fn omega(&self, xi0: f64) -> f64 {
        0.5 * self.law.kappa * xi0
    }

    /// `A(y)` for the symbol shifted to `ξ'`, row-major `[j₁][j₂]`.
    pub fn shifted_kernel(&self, p: RealSymbol, xi: [f64; 3]) -> Vec<Complex64> {
        let g = self.grid;
        let n = g.n;
        let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
        let mut buf: Vec<Complex64> = Vec::with_capacity(n * n);
        for k1 in 0..n {
            let e1 = xi[1] + g.eta(k1);
            for k2 in 0..n {
                let v = p([xi[0], e1, xi[2] + g.eta(k2)]);
                buf.push(Complex64::new(v * sign(k1 + k2), 0.0));
            }
        }
        // rows, then columns
        for row in buf.chunks_exact_mut(n) {
            self.fft.process(row);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            for r in 0..n {
                col[r] = buf[r * n + c];
            }
            self.fft.process(&mut col);
            for r in 0..n {
                buf[r * n + c] = col[r];
            }
        }
        // centred-index phase (−1)^{j₁+j₂+n} and the measure dη²/(2π)²
        let d = g.dual_spacing();
        let scale = d * d / (4.0 * PI * PI) * if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
        for j1 in 0..n {
            for j2 in 0..n {
                buf[j1 * n + j2] *= scale * sign(j1 + j2);
            }
        }
        buf
    }

    /// `(p₁ ⋆ p₂)(ξ)` with the kernel taken from `p₁`.
    pub fn star_at(&self, p1: RealSymbol, p2: RealSymbol, xi: [f64; 3]) -> Complex64 {
        let a = self.shifted_kernel(p1, xi);
        self.pair_with_kernel(&a, p2, xi, 1.0)
    }

    /// The same product with the kernel taken from `p₂`:
    /// `∫ A₂(z) p₁(ξ₀, ξ' − ωJz) dz`.
    pub fn star_at_right(&self, p1: RealSymbol, p2: RealSymbol, xi: [f64; 3]) -> Complex64 {
        let a = self.shifted_kernel(p2, xi);
        self.pair_with_kernel(&a, p1, xi, -1.0)
    }

    fn pair_with_kernel(&self, a: &[Complex64], q: RealSymbol, xi: [f64; 3], orientation: f64) -> Complex64 {
        let g = self.grid;
        let n = g.n;
        let w = orientation * self.omega(xi[0]);
        let h2 = g.h() * g.h();
        let mut acc = Complex64::new(0.0, 0.0);
        for j1 in 0..n {
            let y1 = g.y(j1);
            for j2 in 0..n {
                let y2 = g.y(j2);
                let v = q([xi[0], xi[1] - w * y2, xi[2] + w * y1]);
                acc += a[j1 * n + j2] * v;
            }
        }
        acc * h2
    }

    /// Fully discrete double sum `h⁴ Σ A₁(y) A₂(z) e^{−iω(y₁z₂ − y₂z₁)}`,
    /// evaluated separably in `O(n³)`; an independent discretization of
    /// the same product.
    pub fn star_at_double_sum(&self, p1: RealSymbol, p2: RealSymbol, xi: [f64; 3]) -> Complex64 {
        let g = self.grid;
        let n = g.n;
        let a1 = self.shifted_kernel(p1, xi);
        let a2 = self.shifted_kernel(p2, xi);
        let w = self.omega(xi[0]);
        let ys: Vec<f64> = (0..n).map(|j| g.y(j)).collect();
        // C[z₁][y₁] = Σ_{z₂} A₂(z₁, z₂) e^{−iω y₁ z₂}
        let mut c = vec![Complex64::new(0.0, 0.0); n * n];
        for z1 in 0..n {
            for (y1i, &y1) in ys.iter().enumerate() {
                let mut s = Complex64::new(0.0, 0.0);
                for (z2, &z2v) in ys.iter().enumerate() {
                    s += a2[z1 * n + z2] * Complex64::from_polar(1.0, -w * y1 * z2v);
                }
                c[z1 * n + y1i] = s;
            }
        }
        // B[y₁][y₂] = Σ_{z₁} C[z₁][y₁] e^{iω y₂ z₁}; V = Σ A₁ B
        let mut v = Complex64::new(0.0, 0.0);
        for y1i in 0..n {
            for (y2i, &y2) in ys.iter().enumerate() {
                let mut b = Complex64::new(0.0, 0.0);
                for (z1, &z1v) in ys.iter().enumerate() {
                    b += c[z1 * n + y1i] * Complex64::from_polar(1.0, w * y2 * z1v);
                }
                v += a1[y1i * n + y2i] * b;
            }
        }
        let h2 = g.h() * g.h();
        v * h2 * h2
    }
}

/// Least-squares slope of `log|v|` against `log t`.
pub fn fit_log_slope(samples: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(t, v)| (t.ln(), v.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(a: f64) -> impl Fn([f64; 3]) -> f64 {
        move |xi: [f64; 3]| (-a * (xi[1] * xi[1] + xi[2] * xi[2])).exp()
    }

    #[test]
    fn abelian_product_is_pointwise() {
        let e = StarEngine::new(GroupLaw::new(0.0), SliceGrid::new(8.0, 64).unwrap());
        let p1 = |xi: [f64; 3]| 1.0 / (1.0 + xi[1] * xi[1] + 0.5 * xi[2] * xi[2] + xi[0] * xi[0]);
        let p2 = |xi: [f64; 3]| (xi[1] - 0.3).cos() / (2.0 + xi[2] * xi[2]);
        let xi = [0.7, 0.4, -1.1];
        let v = e.star_at(&p1, &p2, xi);
        assert!((v - p1(xi) * p2(xi)).norm() < 1e-13);
    }

    #[test]
    fn gaussian_twisted_product_closed_form() {
        // ∫ A₁ p₂(ωJy) at ξ' = 0: (4πa)⁻¹ ∫ e^{−|y|²(1/4a + bω²)} dy = 1/(1 + 4abω²)
        let (a, b) = (0.5, 0.8);
        let e = StarEngine::new(GroupLaw::new(1.0), SliceGrid::new(8.0, 64).unwrap());
        for xi0 in [0.5, 1.0, 2.0] {
            let w = 0.5 * xi0;
            let v = e.star_at(&gaussian(a), &gaussian(b), [xi0, 0.0, 0.0]);
            let exact = 1.0 / (1.0 + 4.0 * a * b * w * w);
            assert!((v.re - exact).abs() < 1e-10 && v.im.abs() < 1e-10, "{v} vs {exact}");
            let d = e.star_at_double_sum(&gaussian(a), &gaussian(b), [xi0, 0.0, 0.0]);
            assert!((d.re - exact).abs() < 1e-8, "{d} vs {exact}");
        }
    }

    #[test]
    fn slope_fit_recovers_power() {
        let s: Vec<(f64, f64)> = [1.0, 1.25, 1.5, 2.0].iter().map(|&t: &f64| (t, 3.0 * t.powf(-2.5))).collect();
        assert!((fit_log_slope(&s) + 2.5).abs() < 1e-12);
    }
}
