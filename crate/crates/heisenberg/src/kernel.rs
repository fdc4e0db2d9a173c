//! Sampled convolution kernels on the box `[−L, L)³` and their symbols.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::HeisenbergError;
use crate::expr::HHomogeneousSymbol;
use crate::group::hnorm;

/// Uniform centred grid with `n` points per axis on `[−L, L)`; spacing
/// `h = 2L/n` so that the dual grid (spacing `π/L`) pairs with it under the
/// discrete Fourier transform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid3 {
    pub l: f64,
    pub n: usize,
}

impl Grid3 {
    pub fn new(l: f64, n: usize) -> Result<Self, HeisenbergError> {
        if !(l > 0.0) || n < 4 || n % 2 != 0 {
            return Err(HeisenbergError::BadGrid(format!("L = {l}, n = {n}")));
        }
        Ok(Grid3 { l, n })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    pub fn dual_spacing(&self) -> f64 {
        PI / self.l
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn coord(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.h()
    }

    pub fn freq(&self, k: usize) -> f64 {
        (k as f64 - (self.n / 2) as f64) * self.dual_spacing()
    }

    pub fn index(&self, i: [usize; 3]) -> usize {
        (i[0] * self.n + i[1]) * self.n + i[2]
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let n = self.n;
        [self.coord(idx / (n * n)), self.coord((idx / n) % n), self.coord(idx % n)]
    }

    pub fn covector(&self, idx: usize) -> [f64; 3] {
        let n = self.n;
        [self.freq(idx / (n * n)), self.freq((idx / n) % n), self.freq(idx % n)]
    }
}

/// In-place 3-D DFT on centred indices. `inverse` uses `e^{+i x·ξ}`. No
/// scaling is applied.
pub fn centred_fft3(grid: &Grid3, data: &mut [Complex64], inverse: bool) {
    let n = grid.n;
    assert_eq!(data.len(), grid.len());
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let sign = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    // centring: x_j ξ_k ∝ (j − n/2)(k − n/2) = jk − n/2 (j + k) + n²/4
    for (idx, v) in data.iter_mut().enumerate() {
        let s = sign(idx / (n * n) + (idx / n) % n + idx % n);
        *v *= s;
    }
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..3 {
        let stride = match axis {
            0 => n * n,
            1 => n,
            _ => 1,
        };
        for a in 0..n {
            for b in 0..n {
                let base = match axis {
                    0 => a * n + b,
                    1 => a * n * n + b,
                    _ => (a * n + b) * n,
                };
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[base + k * stride] = *v;
                }
            }
        }
    }
    // (−1)^{n/2 · 3} from the n²/4 terms
    let global = if (3 * (n / 2)) % 2 == 0 { 1.0 } else { -1.0 };
    for (idx, v) in data.iter_mut().enumerate() {
        let s = sign(idx / (n * n) + (idx / n) % n + idx % n);
        *v *= s * global;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelGrid {
    pub grid: Grid3,
    pub data: Vec<Complex64>,
}

/// Symbol samples on the dual grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolGrid {
    pub grid: Grid3,
    pub data: Vec<Complex64>,
}

impl SymbolGrid {
    pub fn sample(grid: Grid3, p: &dyn Fn([f64; 3]) -> f64) -> Self {
        let data = (0..grid.len()).map(|i| Complex64::new(p(grid.covector(i)), 0.0)).collect();
        SymbolGrid { grid, data }
    }
}

pub fn check_window(m: f64) -> Result<(), HeisenbergError> {
    if m > -4.0 && m < 0.0 {
        Ok(())
    } else {
        Err(HeisenbergError::DegreeWindow(m))
    }
}

/// `k(y) = (2π)⁻³ ∫ e^{iy·ξ} χ(‖ξ‖) p(ξ) dξ` on the grid.
pub fn symbol_to_kernel(p: &HHomogeneousSymbol, grid: Grid3) -> Result<KernelGrid, HeisenbergError> {
    check_window(p.degree)?;
    let s = SymbolGrid::sample(grid, &|xi| p.eval_regularized(xi));
    Ok(samples_to_kernel(&s))
}

pub fn samples_to_kernel(s: &SymbolGrid) -> KernelGrid {
    let grid = s.grid;
    let mut data = s.data.clone();
    centred_fft3(&grid, &mut data, true);
    let d = grid.dual_spacing();
    let scale = d * d * d / (8.0 * PI * PI * PI);
    data.iter_mut().for_each(|v| *v *= scale);
    KernelGrid { grid, data }
}

/// `p(ξ) = ∫ e^{−iy·ξ} k(y) dy` on the dual grid.
pub fn kernel_to_symbol(k: &KernelGrid) -> SymbolGrid {
    let grid = k.grid;
    let mut data = k.data.clone();
    centred_fft3(&grid, &mut data, false);
    let h = grid.h();
    data.iter_mut().for_each(|v| *v *= h * h * h);
    SymbolGrid { grid, data }
}

/// Largest relative deviation of `kernel_to_symbol(symbol_to_kernel(p))`
/// from `p` over dual-grid nodes in the annulus `1 ≤ ‖ξ‖ ≤ 2`.
pub fn round_trip_error(p: &HHomogeneousSymbol, grid: Grid3) -> Result<f64, HeisenbergError> {
    let back = kernel_to_symbol(&symbol_to_kernel(p, grid)?);
    let mut worst = 0.0f64;
    for (i, v) in back.data.iter().enumerate() {
        let xi = grid.covector(i);
        let r = hnorm(xi);
        if (1.0..=2.0).contains(&r) {
            let exact = p.eval(xi);
            worst = worst.max((v - exact).norm() / exact.abs().max(1e-300));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_pair_is_inverse() {
        let g = Grid3::new(4.0, 8).unwrap();
        let orig: Vec<Complex64> = (0..g.len()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut d = orig.clone();
        centred_fft3(&g, &mut d, false);
        centred_fft3(&g, &mut d, true);
        let n3 = g.len() as f64;
        for (a, b) in d.iter().zip(&orig) {
            assert!((a / n3 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn centred_transform_matches_direct_sum() {
        let g = Grid3::new(3.0, 6).unwrap();
        let f: Vec<Complex64> = (0..g.len()).map(|i| Complex64::new(1.0 / (1.0 + i as f64), 0.0)).collect();
        let mut d = f.clone();
        centred_fft3(&g, &mut d, false);
        for k in [0usize, 17, 100, g.len() - 1] {
            let xi = g.covector(k);
            let direct: Complex64 = (0..g.len())
                .map(|j| {
                    let y = g.point(j);
                    f[j] * Complex64::from_polar(1.0, -(y[0] * xi[0] + y[1] * xi[1] + y[2] * xi[2]))
                })
                .sum();
            assert!((direct - d[k]).norm() < 1e-10, "{direct} vs {}", d[k]);
        }
    }

    #[test]
    fn even_symbol_has_even_kernel() {
        let g = Grid3::new(4.0, 16).unwrap();
        let p = HHomogeneousSymbol::gauge_power(-2.0);
        let k = symbol_to_kernel(&p, g).unwrap();
        let n = g.n;
        // y ↦ −y maps centred index j ↦ n − j (index 0 has no partner)
        for i in [[1usize, 3, 5], [7, 8, 9], [4, 12, 2]] {
            let a = k.data[g.index(i)];
            let b = k.data[g.index([n - i[0], n - i[1], n - i[2]])];
            assert!((a - b).norm() < 1e-14 * a.norm().max(1.0));
            assert!(a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn zero_symbol_zero_kernel_and_window() {
        let g = Grid3::new(4.0, 8).unwrap();
        let zero = HHomogeneousSymbol::parse("0 * norm^(-1)", -1.0).unwrap();
        assert!(symbol_to_kernel(&zero, g).unwrap().data.iter().all(|v| v.norm() == 0.0));
        assert!(symbol_to_kernel(&HHomogeneousSymbol::gauge_power(-4.0), g).is_err());
        assert!(symbol_to_kernel(&HHomogeneousSymbol::gauge_power(0.5), g).is_err());
    }
}
