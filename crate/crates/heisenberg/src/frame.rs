//! The left-invariant frame of H¹ and polynomial symbols in `(x, ξ)`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::kernel::Grid3;

/// `Σ c · x^a ξ^b` with real coefficients; keys are `(a, b)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SymbolPoly {
    pub terms: BTreeMap<([u32; 3], [u32; 3]), f64>,
}

impl SymbolPoly {
    pub fn zero() -> Self {
        SymbolPoly::default()
    }

    pub fn constant(c: f64) -> Self {
        SymbolPoly::monomial(c, [0; 3], [0; 3])
    }

    pub fn monomial(c: f64, x: [u32; 3], xi: [u32; 3]) -> Self {
        let mut p = SymbolPoly::zero();
        p.add_term(c, x, xi);
        p
    }

    pub fn add_term(&mut self, c: f64, x: [u32; 3], xi: [u32; 3]) {
        if c == 0.0 {
            return;
        }
        let slot = self.terms.entry((x, xi)).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&(x, xi));
        }
    }

    pub fn add(&self, other: &SymbolPoly) -> SymbolPoly {
        let mut out = self.clone();
        for (&(a, b), &c) in &other.terms {
            out.add_term(c, a, b);
        }
        out
    }

    pub fn mul(&self, other: &SymbolPoly) -> SymbolPoly {
        let mut out = SymbolPoly::zero();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &other.terms {
                let a = [a1[0] + a2[0], a1[1] + a2[1], a1[2] + a2[2]];
                let b = [b1[0] + b2[0], b1[1] + b2[1], b1[2] + b2[2]];
                out.add_term(c1 * c2, a, b);
            }
        }
        out
    }

    pub fn eval(&self, x: [f64; 3], xi: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b), &c)| {
                c * (0..3).map(|i| x[i].powi(a[i] as i32) * xi[i].powi(b[i] as i32)).product::<f64>()
            })
            .sum()
    }

    pub fn depends_on_x(&self) -> bool {
        self.terms.keys().any(|(a, _)| a.iter().any(|&e| e > 0))
    }
}

/// `X₀ = ∂₀`, `X₁ = ∂₁ − (κ/2)x₂∂₀`, `X₂ = ∂₂ + (κ/2)x₁∂₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VectorFieldFrame {
    pub kappa: f64,
}

impl VectorFieldFrame {
    pub fn new(kappa: f64) -> Self {
        VectorFieldFrame { kappa }
    }

    /// Classical symbol of `(1/i)X_j`.
    pub fn sigma(&self, j: usize) -> SymbolPoly {
        let k = 0.5 * self.kappa;
        match j {
            0 => SymbolPoly::monomial(1.0, [0; 3], [1, 0, 0]),
            1 => {
                let mut p = SymbolPoly::monomial(1.0, [0; 3], [0, 1, 0]);
                p.add_term(-k, [0, 0, 1], [1, 0, 0]);
                p
            }
            2 => {
                let mut p = SymbolPoly::monomial(1.0, [0; 3], [0, 0, 1]);
                p.add_term(k, [0, 1, 0], [1, 0, 0]);
                p
            }
            _ => panic!("frame index {j} out of range"),
        }
    }

    /// `σ₁² + σ₂²`, the symbol of the sublaplacian `−(X₁² + X₂²)`.
    pub fn sublaplacian(&self) -> SymbolPoly {
        let (s1, s2) = (self.sigma(1), self.sigma(2));
        s1.mul(&s1).add(&s2.mul(&s2))
    }

    /// `X_j f` by second-order central differences, periodic in the box.
    pub fn apply_fd(&self, j: usize, f: &[Complex64], grid: &Grid3) -> Vec<Complex64> {
        let n = grid.n;
        let h = grid.h();
        let d = |axis: usize, idx: usize| -> Complex64 {
            let mut i = [idx / (n * n), (idx / n) % n, idx % n];
            let c = i[axis];
            i[axis] = (c + 1) % n;
            let fp = f[grid.index(i)];
            i[axis] = (c + n - 1) % n;
            let fm = f[grid.index(i)];
            (fp - fm) / (2.0 * h)
        };
        let k = 0.5 * self.kappa;
        (0..grid.len())
            .map(|idx| {
                let x = grid.point(idx);
                match j {
                    0 => d(0, idx),
                    1 => d(1, idx) - k * x[2] * d(0, idx),
                    2 => d(2, idx) + k * x[1] * d(0, idx),
                    _ => panic!("frame index {j} out of range"),
                }
            })
            .collect()
    }

    /// Largest deviation of `[X₁, X₂]f − κX₀f` (finite differences) at points
    /// with `|x|∞ ≤ interior`.
    pub fn bracket_defect(&self, f: &[Complex64], grid: &Grid3, interior: f64) -> f64 {
        let x1 = self.apply_fd(1, f, grid);
        let x2 = self.apply_fd(2, f, grid);
        let x12 = self.apply_fd(1, &x2, grid);
        let x21 = self.apply_fd(2, &x1, grid);
        let x0 = self.apply_fd(0, f, grid);
        (0..grid.len())
            .filter(|&i| grid.point(i).iter().all(|c| c.abs() <= interior))
            .map(|i| (x12[i] - x21[i] - self.kappa * x0[i]).norm())
            .fold(0.0, f64::max)
    }
}

/// `exp(−|x|²/2w²)` sampled on the grid.
pub fn gaussian_bump(grid: &Grid3, width: f64, centre: [f64; 3]) -> Vec<Complex64> {
    (0..grid.len())
        .map(|i| {
            let x = grid.point(i);
            let r2: f64 = (0..3).map(|a| (x[a] - centre[a]).powi(2)).sum();
            Complex64::new((-r2 / (2.0 * width * width)).exp(), 0.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_symbols() {
        let f = VectorFieldFrame::new(1.0);
        assert_eq!(f.sigma(1).eval([0.0, 0.0, 2.0], [3.0, 1.0, 0.0]), 1.0 - 0.5 * 2.0 * 3.0);
        assert_eq!(f.sigma(2).eval([4.0, 1.0, 0.0], [2.0, 0.0, 5.0]), 5.0 + 0.5 * 1.0 * 2.0);
        assert!(f.sublaplacian().depends_on_x());
        assert!(!f.sigma(0).depends_on_x());
    }

    #[test]
    fn bracket_converges_at_second_order() {
        let frame = VectorFieldFrame::new(1.0);
        let defect = |n: usize| {
            let g = Grid3::new(4.0, n).unwrap();
            let f = gaussian_bump(&g, 0.6, [0.1, -0.2, 0.15]);
            frame.bracket_defect(&f, &g, 2.0)
        };
        let (a, b) = (defect(24), defect(48));
        assert!(a / b > 3.0, "ratio {}", a / b);
    }
}
