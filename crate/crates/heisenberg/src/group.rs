//! Anisotropic dilations, the homogeneous gauge and the group law of H¹.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::HeisenbergError;

/// Covariable weights `(2, 1, 1)` for `(ξ₀, ξ₁, ξ₂)`.
pub const WEIGHTS: [u32; 3] = [2, 1, 1];

/// `t.ξ = (t²ξ₀, tξ₁, tξ₂)`.
pub fn dilate(xi: [f64; 3], t: f64) -> Result<[f64; 3], HeisenbergError> {
    if !(t > 0.0) {
        return Err(HeisenbergError::NonPositiveDilation(t));
    }
    Ok(dilate_unchecked(xi, t))
}

#[inline]
pub(crate) fn dilate_unchecked(xi: [f64; 3], t: f64) -> [f64; 3] {
    [t * t * xi[0], t * xi[1], t * xi[2]]
}

/// `‖ξ‖ = (ξ₀² + ξ₁⁴ + ξ₂⁴)^{1/4}`.
pub fn hnorm(xi: [f64; 3]) -> f64 {
    let (a, b) = (xi[1] * xi[1], xi[2] * xi[2]);
    (xi[0] * xi[0] + a * a + b * b).sqrt().sqrt()
}

/// The point of the unit gauge sphere on the dilation orbit of `ξ ≠ 0`.
pub fn unit_gauge(xi: [f64; 3]) -> [f64; 3] {
    dilate_unchecked(xi, 1.0 / hnorm(xi))
}

/// `⟨β⟩ = 2β₀ + β₁ + β₂`.
pub fn weighted_order(beta: &[u32]) -> Result<u32, HeisenbergError> {
    if beta.len() != 3 {
        return Err(HeisenbergError::BadMultiIndex(beta.len()));
    }
    Ok(beta.iter().zip(WEIGHTS).map(|(b, w)| b * w).sum())
}

/// `x·y = (x₀ + y₀ + (κ/2)(x₁y₂ − x₂y₁), x₁ + y₁, x₂ + y₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupLaw {
    pub kappa: f64,
}

impl GroupLaw {
    pub fn new(kappa: f64) -> Self {
        GroupLaw { kappa }
    }

    pub fn mul(&self, x: [f64; 3], y: [f64; 3]) -> [f64; 3] {
        [
            x[0] + y[0] + 0.5 * self.kappa * (x[1] * y[2] - x[2] * y[1]),
            x[1] + y[1],
            x[2] + y[2],
        ]
    }

    pub fn inverse(&self, x: [f64; 3]) -> [f64; 3] {
        [-x[0], -x[1], -x[2]]
    }

    pub fn identity(&self) -> [f64; 3] {
        [0.0; 3]
    }
}

/// Largest deviation from associativity and the inverse identities over
/// `count` random triples in `[−2, 2]³`.
pub fn group_law_defect(law: &GroupLaw, seed: u64, count: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pt = || [0; 3].map(|_: i32| rng.gen_range(-2.0..2.0));
    let dist = |a: [f64; 3], b: [f64; 3]| (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let (x, y, z) = (pt(), pt(), pt());
        worst = worst.max(dist(law.mul(law.mul(x, y), z), law.mul(x, law.mul(y, z))));
        worst = worst.max(dist(law.mul(x, law.inverse(x)), law.identity()));
        worst = worst.max(dist(law.mul(law.inverse(x), x), law.identity()));
        worst = worst.max(dist(law.mul(x, law.identity()), x));
    }
    worst
}

/// Largest `|‖t.ξ‖ − t‖ξ‖| / (t‖ξ‖)` over `count` random `(t, ξ)`.
pub fn gauge_homogeneity_defect(seed: u64, count: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let xi = [0; 3].map(|_: i32| rng.gen_range(-3.0..3.0));
        let t: f64 = rng.gen_range(0.1..10.0);
        let n = hnorm(xi);
        worst = worst.max((hnorm(dilate_unchecked(xi, t)) - t * n).abs() / (t * n));
    }
    worst
}
