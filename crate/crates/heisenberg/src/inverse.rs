//! Star inverse of `σ₁² + σ₂² − λ` for `λ < 0`.
//!
//! For a polynomial left factor the slice formula collapses to a
//! differential operator in `ξ'`: with `ω = κξ₀/2`,
//!
//! ```text
//! ((|ξ'|² − λ) ⋆ q)(ξ₀, ξ') = (|ξ'|² − λ) q + 2iω (ξ₁∂₂ − ξ₂∂₁) q − ω² Δ' q,
//! ```
//!
//! a shifted Landau Hamiltonian, which is Hermitian and positive for
//! `λ < 0`. Each slice is solved by conjugate residuals with spectral
//! derivatives; the right-hand side is the symbol of a mollified delta.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::HeisenbergError;
use crate::expr::low_cutoff;
use crate::group::hnorm;
use crate::star::SliceGrid;

/// Annulus on which the residual is required to be small.
pub const RESIDUAL_ANNULUS: (f64, f64) = (1.0, 2.0);

#[derive(Clone, Debug, PartialEq)]
pub struct InverseSlice {
    pub xi0: f64,
    /// Row-major samples `q(ξ₀, ξ'_{j₁}, ξ'_{j₂})` with `ξ'_j = grid.y(j)`.
    pub values: Vec<Complex64>,
    /// `‖r_k‖ / ‖b‖` per iteration; nonincreasing.
    pub residual_history: Vec<f64>,
    /// `max |(p₂ − λ) ⋆ q − 1|` over grid nodes in the annulus.
    pub annulus_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarInverse {
    pub lambda: f64,
    pub kappa: f64,
    /// `ξ'` grid: `y(j)` are the sample coordinates.
    pub grid: SliceGrid,
    pub slices: Vec<InverseSlice>,
}

struct Landau {
    n: usize,
    xi: Vec<f64>,
    freq: Vec<f64>,
    omega: f64,
    lambda: f64,
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl Landau {
    fn new(grid: SliceGrid, omega: f64, lambda: f64) -> Self {
        let n = grid.n;
        let h = grid.h();
        let mut planner = FftPlanner::new();
        let freq = (0..n)
            .map(|k| {
                let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
                2.0 * std::f64::consts::PI * kk / (n as f64 * h)
            })
            .collect();
        Landau {
            n,
            xi: (0..n).map(|j| grid.y(j)).collect(),
            freq,
            omega,
            lambda,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    fn fft2(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        let f = if inverse { &self.inv } else { &self.fwd };
        for row in data.chunks_exact_mut(n) {
            f.process(row);
        }
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            for r in 0..n {
                col[r] = data[r * n + c];
            }
            f.process(&mut col);
            for r in 0..n {
                data[r * n + c] = col[r];
            }
        }
    }

    fn apply(&self, q: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut qh = q.to_vec();
        self.fft2(&mut qh, false);
        let scale = 1.0 / (n * n) as f64;
        let odd = |k: usize| if k == n / 2 { 0.0 } else { self.freq[k] };
        let mut d1 = vec![Complex64::new(0.0, 0.0); n * n];
        let mut d2 = d1.clone();
        let mut lap = d1.clone();
        for k1 in 0..n {
            for k2 in 0..n {
                let v = qh[k1 * n + k2] * scale;
                d1[k1 * n + k2] = v * Complex64::new(0.0, odd(k1));
                d2[k1 * n + k2] = v * Complex64::new(0.0, odd(k2));
                lap[k1 * n + k2] = -v * (self.freq[k1].powi(2) + self.freq[k2].powi(2));
            }
        }
        self.fft2(&mut d1, true);
        self.fft2(&mut d2, true);
        self.fft2(&mut lap, true);
        let w = self.omega;
        let mut out = Vec::with_capacity(n * n);
        for j1 in 0..n {
            for j2 in 0..n {
                let i = j1 * n + j2;
                let (x1, x2) = (self.xi[j1], self.xi[j2]);
                let rot = x1 * d2[i] - x2 * d1[i];
                out.push((x1 * x1 + x2 * x2 - self.lambda) * q[i] + Complex64::new(0.0, 2.0 * w) * rot - w * w * lap[i]);
            }
        }
        out
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(u, v)| u.conj() * v).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    dot(a, a).re.sqrt()
}

/// Symbol of the mollified delta: 1 for `|ξ'| ≤ Λ/2`, 0 for `|ξ'| ≥ 4Λ/5`.
pub fn mollified_unit(grid: SliceGrid, xi1: f64, xi2: f64) -> f64 {
    let s = (xi1 * xi1 + xi2 * xi2).sqrt() / grid.l;
    1.0 - low_cutoff(0.25 + (s - 0.5) * (0.25 / 0.3))
}

/// Solve `(σ₁² + σ₂² − λ) ⋆ q = 1_δ` on each slice `ξ₀ ∈ xi0s`.
pub fn star_inverse_negative_lambda(
    lambda: f64,
    kappa: f64,
    xi0s: &[f64],
    grid: SliceGrid,
    tol: f64,
    max_iter: usize,
) -> Result<StarInverse, HeisenbergError> {
    if !(lambda < 0.0) || !lambda.is_finite() {
        return Err(HeisenbergError::BadLambda("negative and finite"));
    }
    let n = grid.n;
    let mut slices = Vec::with_capacity(xi0s.len());
    for &xi0 in xi0s {
        let op = Landau::new(grid, 0.5 * kappa * xi0, lambda);
        let mut b = Vec::with_capacity(n * n);
        let mut x = Vec::with_capacity(n * n);
        for j1 in 0..n {
            for j2 in 0..n {
                let (x1, x2) = (grid.y(j1), grid.y(j2));
                let phi = mollified_unit(grid, x1, x2);
                b.push(Complex64::new(phi, 0.0));
                x.push(Complex64::new(phi / (x1 * x1 + x2 * x2 - lambda), 0.0));
            }
        }
        let bn = norm(&b);
        let ax = op.apply(&x);
        let mut r: Vec<Complex64> = b.iter().zip(&ax).map(|(u, v)| u - v).collect();
        let mut ar = op.apply(&r);
        let mut p = r.clone();
        let mut ap = ar.clone();
        let mut rar = dot(&r, &ar).re;
        let mut history = vec![norm(&r) / bn];
        while *history.last().unwrap() > tol {
            if history.len() > max_iter {
                return Err(HeisenbergError::NoConvergence {
                    residual: *history.last().unwrap(),
                    iterations: max_iter,
                });
            }
            let alpha = rar / dot(&ap, &ap).re;
            for i in 0..n * n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            history.push(norm(&r) / bn);
            ar = op.apply(&r);
            let rar_new = dot(&r, &ar).re;
            let beta = rar_new / rar;
            rar = rar_new;
            for i in 0..n * n {
                p[i] = r[i] + beta * p[i];
                ap[i] = ar[i] + beta * ap[i];
            }
        }
        let lq = op.apply(&x);
        let mut annulus_residual = 0.0f64;
        for j1 in 0..n {
            for j2 in 0..n {
                let g = hnorm([xi0, grid.y(j1), grid.y(j2)]);
                if g >= RESIDUAL_ANNULUS.0 && g <= RESIDUAL_ANNULUS.1 {
                    annulus_residual = annulus_residual.max((lq[j1 * n + j2] - 1.0).norm());
                }
            }
        }
        slices.push(InverseSlice {
            xi0,
            values: x,
            residual_history: history,
            annulus_residual,
        });
    }
    Ok(StarInverse {
        lambda,
        kappa,
        grid,
        slices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_slice_is_the_pointwise_inverse() {
        let g = SliceGrid::new(6.0, 32).unwrap();
        let s = star_inverse_negative_lambda(-1.0, 1.0, &[0.0], g, 1e-12, 100).unwrap();
        let q = &s.slices[0].values;
        for (j1, j2) in [(16, 16), (20, 13), (18, 22)] {
            let (a, b) = (g.y(j1), g.y(j2));
            assert!((q[j1 * 32 + j2] - 1.0 / (a * a + b * b + 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonnegative_lambda() {
        let g = SliceGrid::new(6.0, 32).unwrap();
        assert!(star_inverse_negative_lambda(0.5, 1.0, &[1.0], g, 1e-8, 10).is_err());
        assert!(star_inverse_negative_lambda(0.0, 1.0, &[1.0], g, 1e-8, 10).is_err());
    }

    #[test]
    fn landau_operator_is_hermitian() {
        let g = SliceGrid::new(4.0, 16).unwrap();
        let op = Landau::new(g, 0.7, -1.0);
        let u: Vec<Complex64> = (0..256).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        let v: Vec<Complex64> = (0..256).map(|i| Complex64::new((i as f64 * 0.23).cos(), (i as f64 * 0.51).sin())).collect();
        let a = dot(&u, &op.apply(&v));
        let b = dot(&op.apply(&u), &v);
        assert!((a - b).norm() < 1e-10 * a.norm());
    }
}
