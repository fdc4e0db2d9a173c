//! `p(x, −iX) f(x) = (2π)⁻³ ∫ e^{ix·ξ} p(x, σ(x, ξ)) f̂(ξ) dξ` on a periodic box.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::expr::HHomogeneousSymbol;
use crate::frame::{SymbolPoly, VectorFieldFrame};
use crate::kernel::{centred_fft3, Grid3};

/// Spectral energy fraction above which the aliasing warning fires.
pub const ALIASING_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Quantized {
    pub values: Vec<Complex64>,
    /// Fraction of `|f̂|²` in the outer third of the frequency range.
    pub high_frequency_fraction: f64,
    pub aliasing_warning: bool,
}

fn high_frequency_fraction(grid: &Grid3, fhat: &[Complex64]) -> f64 {
    let n = grid.n;
    let cut = n / 3;
    let outer = |k: usize| (k as i64 - (n / 2) as i64).unsigned_abs() as usize >= cut;
    let mut hi = 0.0;
    let mut total = 0.0;
    for (idx, v) in fhat.iter().enumerate() {
        let e = v.norm_sqr();
        total += e;
        if outer(idx / (n * n)) || outer((idx / n) % n) || outer(idx % n) {
            hi += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        hi / total
    }
}

/// `ξ^b` on the dual grid with the unpaired Nyquist frequency dropped for odd
/// powers, so that real inputs give real derivatives.
fn xi_power(grid: &Grid3, idx: usize, b: [u32; 3]) -> f64 {
    let n = grid.n;
    let ks = [idx / (n * n), (idx / n) % n, idx % n];
    let mut v = 1.0;
    for a in 0..3 {
        if b[a] == 0 {
            continue;
        }
        if ks[a] == 0 && b[a] % 2 == 1 {
            return 0.0;
        }
        v *= grid.freq(ks[a]).powi(b[a] as i32);
    }
    v
}

/// Exact quantization of a polynomial symbol: `Σ c x^a D^b f` with `D = −i∂`
/// applied spectrally.
pub fn quantize_poly(p: &SymbolPoly, f: &[Complex64], grid: &Grid3) -> Quantized {
    let mut fhat = f.to_vec();
    centred_fft3(grid, &mut fhat, false);
    let hf = high_frequency_fraction(grid, &fhat);
    let mut by_xi: BTreeMap<[u32; 3], SymbolPoly> = BTreeMap::new();
    for (&(a, b), &c) in &p.terms {
        by_xi.entry(b).or_default().add_term(c, a, [0; 3]);
    }
    let n3 = grid.len() as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (b, coef) in by_xi {
        let mut d: Vec<Complex64> = fhat.iter().enumerate().map(|(i, v)| v * xi_power(grid, i, b)).collect();
        centred_fft3(grid, &mut d, true);
        for (i, v) in d.iter().enumerate() {
            out[i] += coef.eval(grid.point(i), [0.0; 3]) * v / n3;
        }
    }
    Quantized {
        values: out,
        high_frequency_fraction: hf,
        aliasing_warning: hf > ALIASING_THRESHOLD,
    }
}

/// Direct double sum for a general full symbol `a(x, ξ)`; cost `O(N²)` in
/// the number of grid points.
pub fn quantize_full(a: &dyn Fn([f64; 3], [f64; 3]) -> f64, f: &[Complex64], grid: &Grid3) -> Quantized {
    let mut fhat = f.to_vec();
    centred_fft3(grid, &mut fhat, false);
    let hf = high_frequency_fraction(grid, &fhat);
    let n3 = grid.len() as f64;
    let values = (0..grid.len())
        .map(|i| {
            let x = grid.point(i);
            let s: Complex64 = fhat
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let xi = grid.covector(k);
                    v * a(x, xi) * Complex64::from_polar(1.0, x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2])
                })
                .sum();
            s / n3
        })
        .collect();
    Quantized {
        values,
        high_frequency_fraction: hf,
        aliasing_warning: hf > ALIASING_THRESHOLD,
    }
}

/// Quantize an x-independent homogeneous symbol through the frame:
/// `a(x, ξ) = χ(‖σ‖) p(σ(x, ξ))`. For `κ = 0` the symbol is a Fourier
/// multiplier and the FFT is used directly.
pub fn quantize_homogeneous(
    p: &HHomogeneousSymbol,
    frame: &VectorFieldFrame,
    f: &[Complex64],
    grid: &Grid3,
) -> Quantized {
    if frame.kappa == 0.0 {
        let mut fhat = f.to_vec();
        centred_fft3(grid, &mut fhat, false);
        let hf = high_frequency_fraction(grid, &fhat);
        for (k, v) in fhat.iter_mut().enumerate() {
            *v *= p.eval_regularized(grid.covector(k));
        }
        centred_fft3(grid, &mut fhat, true);
        let n3 = grid.len() as f64;
        return Quantized {
            values: fhat.into_iter().map(|v| v / n3).collect(),
            high_frequency_fraction: hf,
            aliasing_warning: hf > ALIASING_THRESHOLD,
        };
    }
    let sig: Vec<SymbolPoly> = (0..3).map(|j| frame.sigma(j)).collect();
    let a = |x: [f64; 3], xi: [f64; 3]| {
        let s = [sig[0].eval(x, xi), sig[1].eval(x, xi), sig[2].eval(x, xi)];
        p.eval_regularized(s)
    };
    quantize_full(&a, f, grid)
}

/// `Re⟨Pf, g⟩ − ⟨f, Pg⟩` relative to `‖Pf‖‖g‖`.
pub fn symmetry_defect(pf: &[Complex64], f: &[Complex64], pg: &[Complex64], g: &[Complex64]) -> f64 {
    let ip = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(u, v)| u * v.conj()).sum::<Complex64>();
    let norm = |a: &[Complex64]| a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    (ip(pf, g) - ip(f, pg)).norm() / (norm(pf) * norm(g)).max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::gaussian_bump;

    #[test]
    fn identity_symbol() {
        let g = Grid3::new(6.0, 24).unwrap();
        let f = gaussian_bump(&g, 1.0, [0.0; 3]);
        let q = quantize_poly(&SymbolPoly::constant(1.0), &f, &g);
        for (a, b) in q.values.iter().zip(&f) {
            assert!((a - b).norm() < 1e-13);
        }
        assert!(!q.aliasing_warning, "{}", q.high_frequency_fraction);
    }

    #[test]
    fn aliasing_flag_fires_for_rough_data() {
        let g = Grid3::new(4.0, 8).unwrap();
        let f: Vec<Complex64> = (0..g.len()).map(|i| Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect();
        assert!(quantize_poly(&SymbolPoly::constant(1.0), &f, &g).aliasing_warning);
    }

    #[test]
    fn double_sum_agrees_with_spectral_path() {
        let g = Grid3::new(4.0, 16).unwrap();
        let frame = VectorFieldFrame::new(1.0);
        let mut f = gaussian_bump(&g, 1.2, [0.2, 0.0, -0.1]);
        // remove the unpaired Nyquist modes, where the two paths differ by design
        centred_fft3(&g, &mut f, false);
        for (i, v) in f.iter_mut().enumerate() {
            if i / 256 == 0 || (i / 16) % 16 == 0 || i % 16 == 0 {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        centred_fft3(&g, &mut f, true);
        f.iter_mut().for_each(|v| *v /= g.len() as f64);
        let s1 = frame.sigma(1);
        let a = quantize_poly(&s1, &f, &g);
        let b = quantize_full(&|x, xi| s1.eval(x, xi), &f, &g);
        for (u, v) in a.values.iter().zip(&b.values) {
            assert!((u - v).norm() < 1e-10, "{u} vs {v}");
        }
    }
}
