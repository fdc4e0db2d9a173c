//! Angular sectors, conic regions in `(ξ, λ)` space, and the keyhole contour
//! `Γ_r` used for complex powers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::SymbolError;

/// Open sector `θ < arg λ < θ′` with `0 < θ < π < θ′ < 2π`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sector {
    theta: f64,
    theta_prime: f64,
}

impl Sector {
    pub fn new(theta: f64, theta_prime: f64) -> Result<Self, SymbolError> {
        if !(0.0 < theta && theta < PI && PI < theta_prime && theta_prime < 2.0 * PI) {
            return Err(SymbolError::BadSector(theta, theta_prime));
        }
        Ok(Sector { theta, theta_prime })
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.theta, self.theta_prime)
    }

    /// `arg λ` taken in `[0, 2π)`; `λ = 0` is in no sector.
    pub fn contains(&self, lambda: Complex64) -> bool {
        if lambda == Complex64::new(0.0, 0.0) {
            return false;
        }
        let mut a = lambda.arg();
        if a < 0.0 {
            a += 2.0 * PI;
        }
        self.theta < a && a < self.theta_prime
    }
}

/// `Θ = (ℝ^d × Λ) ∪ {(ξ, λ) : |λ| < ρ|ξ|^m}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConicRegion {
    pub sector: Sector,
    pub rho: f64,
    pub order: u32,
}

impl ConicRegion {
    pub fn new(sector: Sector, rho: f64, order: u32) -> Self {
        assert!(rho > 0.0, "rho must be positive");
        ConicRegion { sector, rho, order }
    }

    pub fn contains(&self, xi: &[f64], lambda: Complex64) -> Result<bool, SymbolError> {
        let xi_norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if xi_norm == 0.0 && lambda == Complex64::new(0.0, 0.0) {
            return Err(SymbolError::ConicOrigin);
        }
        Ok(self.sector.contains(lambda) || lambda.norm() < self.rho * xi_norm.powi(self.order as i32))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureRule {
    GaussLegendre,
    /// Composite midpoint; second order, used for convergence studies.
    Midpoint,
}

/// Which piece of the contour a node belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Segment {
    IncomingRay,
    Circle,
    OutgoingRay,
    ClosingArc,
}

/// A quadrature node: `λ`, the branch of `arg λ` used for `λ^s`, and the
/// complex weight `dλ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourNode {
    pub lambda: Complex64,
    pub arg: f64,
    pub weight: Complex64,
    pub segment: Segment,
}

impl ContourNode {
    /// `λ^s` on the branch `arg λ ∈ [−π, π]` fixed by the contour.
    pub fn pow(&self, s: Complex64) -> Complex64 {
        (s * Complex64::new(self.lambda.norm().ln(), self.arg)).exp()
    }
}

pub const MIN_NODES: usize = 64;

/// `Γ_r`: in along `arg λ = π` from `R_max` to `r`, clockwise round `|λ| = r`
/// from `π` to `−π`, out along `arg λ = −π` to `R_max`. With `closed` the
/// rays are joined by the counter-clockwise arc `|λ| = R_max`, so the node set
/// is a closed loop around every point of `r < |λ| < R_max` off the cut.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contour {
    pub r: f64,
    pub r_max: f64,
    pub nodes: usize,
    pub rule: QuadratureRule,
    pub closed: bool,
}

impl Contour {
    pub fn new(r: f64, nodes: usize) -> Result<Self, SymbolError> {
        if !(r > 0.0) || nodes < MIN_NODES {
            return Err(SymbolError::BadContour {
                r,
                n: nodes,
                min: MIN_NODES,
            });
        }
        Ok(Contour {
            r,
            r_max: 1e3 * r,
            nodes,
            rule: QuadratureRule::GaussLegendre,
            closed: true,
        })
    }

    pub fn with_r_max(mut self, r_max: f64) -> Self {
        assert!(r_max > self.r);
        self.r_max = r_max;
        self
    }

    pub fn with_rule(mut self, rule: QuadratureRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn open(mut self) -> Self {
        self.closed = false;
        self
    }
}

/// Nodes and weights on `[a, b]`.
pub fn rule_nodes(rule: QuadratureRule, n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    match rule {
        QuadratureRule::GaussLegendre => gauss_legendre(n)
            .into_iter()
            .map(|(x, w)| (mid + half * x, half * w))
            .collect(),
        QuadratureRule::Midpoint => {
            let h = (b - a) / n as f64;
            (0..n).map(|i| (a + (i as f64 + 0.5) * h, h)).collect()
        }
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let (p, pm1) = if n == 0 { (1.0, 0.0) } else { (p1, p0) };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

pub fn contour_nodes(c: &Contour) -> Vec<ContourNode> {
    let n = c.nodes;
    let (lr, lrm) = (c.r.ln(), c.r_max.ln());
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(4 * n);
    // incoming ray: λ = e^u e^{iπ}, u from ln R down to ln r
    let mut ray = rule_nodes(c.rule, n, lr, lrm);
    ray.reverse();
    for &(u, w) in &ray {
        let lambda = Complex64::from_polar(u.exp(), PI);
        out.push(ContourNode {
            lambda,
            arg: PI,
            weight: -w * lambda,
            segment: Segment::IncomingRay,
        });
    }
    // circle, clockwise from π to −π
    let mut circ = rule_nodes(c.rule, n, -PI, PI);
    circ.reverse();
    for &(t, w) in &circ {
        let lambda = Complex64::from_polar(c.r, t);
        out.push(ContourNode {
            lambda,
            arg: t,
            weight: -w * i * lambda,
            segment: Segment::Circle,
        });
    }
    // outgoing ray at arg −π
    for &(u, w) in &rule_nodes(c.rule, n, lr, lrm) {
        let lambda = Complex64::from_polar(u.exp(), -PI);
        out.push(ContourNode {
            lambda,
            arg: -PI,
            weight: w * lambda,
            segment: Segment::OutgoingRay,
        });
    }
    if c.closed {
        for &(t, w) in &rule_nodes(c.rule, n, -PI, PI) {
            let lambda = Complex64::from_polar(c.r_max, t);
            out.push(ContourNode {
                lambda,
                arg: t,
                weight: w * i * lambda,
                segment: Segment::ClosingArc,
            });
        }
    }
    out
}
