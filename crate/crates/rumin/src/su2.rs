//! Left-invariant frame of SU(2) ≅ S³ and its irreducible representation
//! blocks.
//!
//! With `M_a = −iJ_a` (angular momentum `J_a` in spin `ℓ/2`) the frame is
//! `X₁ = M₁`, `X₂ = M₂`, `X₀ = −M₃/c`, so that
//!
//! ```text
//! [X₁, X₂] = −c X₀,   [X₀, X₁] = −X₂/c,   [X₀, X₂] = X₁/c.
//! ```
//!
//! The coframe `(θ, e¹, e²)` is dual to `(X₀, X₁, X₂)`; `dθ = c e¹∧e²`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::RuminError;

pub type CMat = DMatrix<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2Frame {
    pub c: f64,
}

/// Structure constants `[X_b, X_c] = Σ_a C[a][b][c] X_a`, index 0 = X₀.
pub type StructureConstants = [[[f64; 3]; 3]; 3];

impl Su2Frame {
    pub fn new(c: f64) -> Result<Self, RuminError> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(RuminError::BadBracket(c));
        }
        Ok(Su2Frame { c })
    }

    pub fn structure_constants(&self) -> StructureConstants {
        let c = self.c;
        let mut k = [[[0.0; 3]; 3]; 3];
        let mut set = |a: usize, b: usize, d: usize, v: f64| {
            k[a][b][d] = v;
            k[a][d][b] = -v;
        };
        set(0, 1, 2, -c);
        set(2, 0, 1, -1.0 / c);
        set(1, 0, 2, 1.0 / c);
        k
    }

    /// `θ(X_a)`.
    pub fn theta(&self, a: usize) -> f64 {
        if a == 0 {
            1.0
        } else {
            0.0
        }
    }

    /// `dθ(X_a, X_b) = −θ([X_a, X_b])` for left-invariant fields.
    pub fn dtheta(&self, a: usize, b: usize) -> f64 {
        -self.structure_constants()[0][a][b]
    }

    /// `J X₁ = X₂`, `J X₂ = −X₁`, `J X₀ = 0`, as a map on frame indices.
    pub fn j(&self, a: usize) -> (usize, f64) {
        match a {
            1 => (2, 1.0),
            2 => (1, -1.0),
            _ => (0, 0.0),
        }
    }

    /// `g(X_a, X_b) = dθ(X_a, J X_b) + θ(X_a)θ(X_b)`, with the horizontal
    /// part divided by `c` so that the frame is orthonormal.
    pub fn metric(&self, a: usize, b: usize) -> f64 {
        let (jb, s) = self.j(b);
        let horizontal = if b == 0 { 0.0 } else { s * self.dtheta(a, jb) / self.c };
        horizontal + self.theta(a) * self.theta(b)
    }
}

/// Frame matrices on the irreducible representation of dimension `ℓ + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepBlock {
    pub level: usize,
    /// `[X₀, X₁, X₂]`.
    pub x: [CMat; 3],
}

/// Angular momentum `(J₁, J₂, J₃)` in spin `ℓ/2`, basis `m = j, j−1, …, −j`.
pub fn angular_momentum(level: usize) -> [CMat; 3] {
    let n = level + 1;
    let j = level as f64 / 2.0;
    let mut jp = CMat::zeros(n, n);
    let mut j3 = CMat::zeros(n, n);
    for k in 0..n {
        let m = j - k as f64;
        j3[(k, k)] = Complex64::new(m, 0.0);
        if k > 0 {
            // J₊|m⟩ = √(j(j+1) − m(m+1)) |m+1⟩, and |m+1⟩ sits at k − 1
            jp[(k - 1, k)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let j1 = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let j2 = (&jp - &jm) * Complex64::new(0.0, -0.5);
    [j1, j2, j3]
}

impl IrrepBlock {
    pub fn new(frame: &Su2Frame, level: usize) -> Self {
        let [j1, j2, j3] = angular_momentum(level);
        let mi = Complex64::new(0.0, -1.0);
        let x0 = j3 * (mi * (-1.0 / frame.c));
        IrrepBlock {
            level,
            x: [x0, j1 * mi, j2 * mi],
        }
    }

    pub fn dim(&self) -> usize {
        self.level + 1
    }

    /// Largest entry of `[X_b, X_d] − Σ_a C^a_{bd} X_a` over all pairs.
    pub fn bracket_defect(&self, frame: &Su2Frame) -> f64 {
        let k = frame.structure_constants();
        let mut worst = 0.0f64;
        for b in 0..3 {
            for d in 0..3 {
                let mut m = &self.x[b] * &self.x[d] - &self.x[d] * &self.x[b];
                for a in 0..3 {
                    m -= &self.x[a] * Complex64::new(k[a][b][d], 0.0);
                }
                worst = worst.max(m.camax());
            }
        }
        worst
    }

    /// Largest entry of `X_a + X_a*`.
    pub fn skew_defect(&self) -> f64 {
        self.x.iter().map(|m| (m + m.adjoint()).camax()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_identities() {
        for c in [1.0, 2.0, 0.5] {
            let f = Su2Frame::new(c).unwrap();
            assert_eq!(f.theta(0), 1.0);
            assert_eq!(f.dtheta(1, 2), c);
            assert_eq!(f.dtheta(0, 1), 0.0);
            assert_eq!(f.dtheta(0, 2), 0.0);
            let (j1, s) = f.j(1);
            assert!(s * f.dtheta(1, j1) > 0.0);
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(f.metric(a, b), if a == b { 1.0 } else { 0.0 }, "g({a},{b}) at c = {c}");
                }
            }
        }
        assert!(Su2Frame::new(0.0).is_err());
        assert!(Su2Frame::new(-1.0).is_err());
    }

    #[test]
    fn blocks_represent_the_frame() {
        for c in [1.0, 2.0] {
            let f = Su2Frame::new(c).unwrap();
            for level in [0, 1, 2, 5, 12] {
                let b = IrrepBlock::new(&f, level);
                assert!(b.bracket_defect(&f) < 1e-12 * (1.0 + level as f64));
                assert!(b.skew_defect() < 1e-14);
            }
        }
    }

    #[test]
    fn casimir() {
        let [a, b, c] = angular_momentum(4);
        let cas = &a * &a + &b * &b + &c * &c;
        // j = 2
        assert!((cas - CMat::identity(5, 5) * Complex64::new(6.0, 0.0)).camax() < 1e-13);
    }
}
