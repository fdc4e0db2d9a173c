//! Measurements on the star product: degree additivity, the abelian limit,
//! the commutator, failure of microlocality, the domain gap of the
//! parametric resolvent, and remainder bounds for asymptotic expansions.
//!
//! Every reported number comes with a noise floor and/or the drift between
//! the working grid and its refinement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::HeisenbergError;
use crate::expr::{low_cutoff, Expr, HHomogeneousSymbol};
use crate::group::{dilate, hnorm, unit_gauge, GroupLaw};
use crate::kernel::check_window;
use crate::star::{fit_log_slope, SliceGrid, StarEngine};

/// Rays (before normalization) along which homogeneity is fitted.
pub const DEGREE_RAYS: [[f64; 3]; 3] = [[0.6, 0.7, 0.4], [-0.5, 0.3, -0.8], [0.8, -0.4, 0.5]];
pub const DEGREE_SCALES: [f64; 5] = [1.0, 1.25, 1.5, 1.75, 2.0];
/// Largest admissible relative change between `n` and `2n`.
pub const MAX_GRID_DRIFT: f64 = 0.1;

/// A value with its error bars.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Measured {
    pub value: f64,
    pub noise_floor: f64,
    pub grid_drift: f64,
}

impl Measured {
    /// `value` exceeds `factor` times both the noise floor and the drift.
    pub fn exceeds(&self, factor: f64) -> bool {
        self.value > factor * self.noise_floor && self.value > factor * self.grid_drift
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarReport {
    pub m1: f64,
    pub m2: f64,
    pub kappa: f64,
    pub grid_l: f64,
    pub grid_n: usize,
    /// Fitted degree per ray.
    pub fitted_degrees: Vec<f64>,
    /// Largest relative change of a sample between `n` and `2n`.
    pub grid_drift: f64,
    /// Largest relative gap between the left- and right-kernel evaluations.
    pub discretization_gap: f64,
    /// `(ξ, Re, Im)` at the unit-gauge points of the rays.
    pub samples: Vec<([f64; 3], f64, f64)>,
}

impl StarReport {
    pub fn worst_degree_error(&self) -> f64 {
        let target = self.m1 + self.m2;
        self.fitted_degrees.iter().map(|d| (d - target).abs()).fold(0.0, f64::max)
    }
}

fn regularized(p: &HHomogeneousSymbol) -> impl Fn([f64; 3]) -> f64 + '_ {
    move |xi| p.eval_regularized(xi)
}

/// `p₁ ⋆ p₂` sampled along the fitting rays, with the grid drift measured
/// against the refined grid.
pub fn star_product(
    p1: &HHomogeneousSymbol,
    p2: &HHomogeneousSymbol,
    kappa: f64,
    grid: SliceGrid,
) -> Result<StarReport, HeisenbergError> {
    check_window(p1.degree)?;
    check_window(p2.degree)?;
    check_window(p1.degree + p2.degree)?;
    let (f1, f2) = (regularized(p1), regularized(p2));
    let coarse = StarEngine::new(GroupLaw::new(kappa), grid);
    let fine = StarEngine::new(GroupLaw::new(kappa), grid.refined());
    let mut fitted = Vec::new();
    let mut samples = Vec::new();
    let mut drift = 0.0f64;
    let mut gap = 0.0f64;
    for ray in DEGREE_RAYS {
        let base = unit_gauge(ray);
        let mut pts = Vec::new();
        for &t in &DEGREE_SCALES {
            let xi = dilate(base, t)?;
            let v = coarse.star_at(&f1, &f2, xi);
            let w = fine.star_at(&f1, &f2, xi);
            drift = drift.max((v - w).norm() / w.norm().max(1e-300));
            pts.push((t, v.norm()));
            if t == 1.0 {
                samples.push((xi, v.re, v.im));
                let r = coarse.star_at_right(&f1, &f2, xi);
                gap = gap.max((v - r).norm() / v.norm().max(1e-300));
            }
        }
        fitted.push(fit_log_slope(&pts));
    }
    if drift > MAX_GRID_DRIFT {
        return Err(HeisenbergError::GridConvergence(drift));
    }
    Ok(StarReport {
        m1: p1.degree,
        m2: p2.degree,
        kappa,
        grid_l: grid.l,
        grid_n: grid.n,
        fitted_degrees: fitted,
        grid_drift: drift,
        discretization_gap: gap,
        samples,
    })
}

/// Relative deviation of `p₁ ⋆ p₂` from `p₁p₂` at the unit-gauge ray points
/// for each `κ`.
pub fn abelian_deviation(
    p1: &HHomogeneousSymbol,
    p2: &HHomogeneousSymbol,
    kappas: &[f64],
    grid: SliceGrid,
) -> Vec<(f64, f64)> {
    let (f1, f2) = (regularized(p1), regularized(p2));
    kappas
        .iter()
        .map(|&k| {
            let e = StarEngine::new(GroupLaw::new(k), grid);
            let dev = DEGREE_RAYS
                .iter()
                .map(|&r| {
                    let xi = unit_gauge(r);
                    let exact = f1(xi) * f2(xi);
                    (e.star_at(&f1, &f2, xi) - exact).norm() / exact.abs()
                })
                .fold(0.0, f64::max);
            (k, dev)
        })
        .collect()
}

fn commutator_size(e: &StarEngine, f1: &dyn Fn([f64; 3]) -> f64, f2: &dyn Fn([f64; 3]) -> f64) -> f64 {
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for r in DEGREE_RAYS {
        let xi = unit_gauge(r);
        let a = e.star_at(f1, f2, xi);
        let b = e.star_at(f2, f1, xi);
        num = num.max((a - b).norm());
        den = den.max(a.norm());
    }
    num / den
}

/// `max |p₁⋆p₂ − p₂⋆p₁| / max |p₁⋆p₂|` over the ray points; the noise floor
/// is the same quantity for the abelian law.
pub fn commutator(p1: &HHomogeneousSymbol, p2: &HHomogeneousSymbol, kappa: f64, grid: SliceGrid) -> Measured {
    let (f1, f2) = (regularized(p1), regularized(p2));
    let value = commutator_size(&StarEngine::new(GroupLaw::new(kappa), grid), &f1, &f2);
    let fine = commutator_size(&StarEngine::new(GroupLaw::new(kappa), grid.refined()), &f1, &f2);
    let floor = commutator_size(&StarEngine::new(GroupLaw::new(0.0), grid), &f1, &f2);
    Measured {
        value,
        noise_floor: floor,
        grid_drift: (value - fine).abs(),
    }
}

/// `δp = ψ_K · a` with `ψ_K` the smooth cone cutoff around `axis`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConePerturbation {
    pub axis: [f64; 3],
    pub angle: f64,
    pub amplitude: HHomogeneousSymbol,
}

impl ConePerturbation {
    pub fn cone(&self) -> Expr {
        Expr::Cone {
            axis: self.axis,
            angle: self.angle,
        }
    }

    pub fn eval(&self, xi: [f64; 3]) -> f64 {
        let c = self.cone().eval(xi);
        if c == 0.0 {
            0.0
        } else {
            c * self.amplitude.eval(xi)
        }
    }

    /// Distance from `ξ` to the axis on the unit gauge sphere.
    pub fn angular_distance(&self, xi: [f64; 3]) -> f64 {
        let (a, u) = (unit_gauge(self.axis), unit_gauge(xi));
        ((u[0] - a[0]).powi(2) + (u[1] - a[1]).powi(2) + (u[2] - a[2]).powi(2)).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MicrolocalityReport {
    pub xi0: [f64; 3],
    /// `|p₁(p₂ + δp) − p₁p₂|` at `ξ⁰`; zero because `δp(ξ⁰) = 0`.
    pub classical_diff: f64,
    pub heisenberg_diff: Measured,
}

fn probe_diff(e: &StarEngine, f1: &dyn Fn([f64; 3]) -> f64, f2: &dyn Fn([f64; 3]) -> f64, f2d: &dyn Fn([f64; 3]) -> f64, xi0: [f64; 3]) -> f64 {
    (e.star_at(f1, f2d, xi0) - e.star_at(f1, f2, xi0)).norm()
}

/// Change of `(p₁ ⋆ p₂)(ξ⁰)` when `p₂` is perturbed inside a cone that
/// stays away from the ray of `ξ⁰`.
pub fn microlocality_probe(
    p1: &HHomogeneousSymbol,
    p2: &HHomogeneousSymbol,
    dp: &ConePerturbation,
    xi0: [f64; 3],
    kappa: f64,
    grid: SliceGrid,
) -> Result<MicrolocalityReport, HeisenbergError> {
    if dp.angular_distance(xi0) <= dp.angle {
        return Err(HeisenbergError::SupportOverlap);
    }
    let (f1, f2) = (regularized(p1), regularized(p2));
    let f2d = |xi: [f64; 3]| f2(xi) + low_cutoff(hnorm(xi)) * dp.eval(xi);
    let classical_diff = (f1(xi0) * f2d(xi0) - f1(xi0) * f2(xi0)).abs();
    let value = probe_diff(&StarEngine::new(GroupLaw::new(kappa), grid), &f1, &f2, &f2d, xi0);
    let fine = probe_diff(&StarEngine::new(GroupLaw::new(kappa), grid.refined()), &f1, &f2, &f2d, xi0);
    let floor = probe_diff(&StarEngine::new(GroupLaw::new(0.0), grid), &f1, &f2, &f2d, xi0);
    Ok(MicrolocalityReport {
        xi0,
        classical_diff,
        heisenberg_diff: Measured {
            value,
            noise_floor: floor,
            grid_drift: (value - fine).abs(),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapPoint {
    pub lambda: f64,
    /// Fraction of the stencil outside `Θ_λ = {ρ‖ξ‖² > λ}`.
    pub fraction: f64,
    /// The same fraction on the refined grid.
    pub refined_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub rho: f64,
    pub epsilon: f64,
    pub xi0: [f64; 3],
    pub stencil_size: usize,
    pub points: Vec<GapPoint>,
}

/// `‖ξ‖²` at every covector the slice formula reads with relative kernel
/// weight above `eps` when evaluating `‖·‖⁻² ⋆ q` at `ξ⁰`.
pub fn stencil(xi0: [f64; 3], eps: f64, kappa: f64, grid: SliceGrid) -> Vec<f64> {
    let e = StarEngine::new(GroupLaw::new(kappa), grid);
    let p = HHomogeneousSymbol::gauge_power(-2.0);
    let f = regularized(&p);
    let a = e.shifted_kernel(&f, xi0);
    let max = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let w = 0.5 * kappa * xi0[0];
    let n = grid.n;
    let mut out = Vec::new();
    for j1 in 0..n {
        for j2 in 0..n {
            if a[j1 * n + j2].norm() > eps * max {
                let (y1, y2) = (grid.y(j1), grid.y(j2));
                out.push(hnorm([xi0[0], xi0[1] - w * y2, xi0[2] + w * y1]).powi(2));
            }
        }
    }
    out
}

fn outside_fraction(s: &[f64], rho: f64, lambda: f64) -> f64 {
    s.iter().filter(|&&q| !(rho * q > lambda)).count() as f64 / s.len() as f64
}

/// Fraction of the star-product stencil at `ξ⁰` on which a degree −2
/// parametric symbol with region `ρ‖ξ‖² > λ` is undefined, for each `λ`.
pub fn parametric_domain_gap(
    rho: f64,
    lambdas: &[f64],
    eps: f64,
    xi0: [f64; 3],
    kappa: f64,
    grid: SliceGrid,
) -> Result<GapReport, HeisenbergError> {
    if lambdas.iter().any(|&l| !(l >= 0.0)) {
        return Err(HeisenbergError::BadLambda("nonnegative"));
    }
    let s = stencil(xi0, eps, kappa, grid);
    let sf = stencil(xi0, eps, kappa, grid.refined());
    let points = lambdas
        .iter()
        .map(|&lambda| GapPoint {
            lambda,
            fraction: outside_fraction(&s, rho, lambda),
            refined_fraction: outside_fraction(&sf, rho, lambda),
        })
        .collect();
    Ok(GapReport {
        rho,
        epsilon: eps,
        xi0,
        stencil_size: s.len(),
        points,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemainderReport {
    /// Smallest `C` with `|p − Σ parts| ≤ C‖ξ‖^{m−N}` on the samples.
    pub constant: f64,
    pub worst_x: [f64; 3],
    pub worst_xi: [f64; 3],
    /// Per-shell supremum of the normalized remainder.
    pub shell_sups: Vec<(f64, f64)>,
    pub divergent: bool,
}

pub const REMAINDER_SHELLS: usize = 12;
pub const REMAINDER_SAMPLES_PER_SHELL: usize = 64;

/// Remainder bound for `p(x, ξ) ~ Σ_{j<N} p_{m−j}(ξ)` on `‖ξ‖ ≥ 1`, `x ∈ K`.
pub fn expansion_remainder_check(
    p: &dyn Fn([f64; 3], [f64; 3]) -> f64,
    m: f64,
    parts: &[HHomogeneousSymbol],
    x_box: ([f64; 3], [f64; 3]),
    seed: u64,
) -> Result<RemainderReport, HeisenbergError> {
    for (j, part) in parts.iter().enumerate() {
        if (part.degree - (m - j as f64)).abs() > 1e-12 {
            return Err(HeisenbergError::DegreeWindow(part.degree));
        }
    }
    let order = m - parts.len() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut constant = 0.0f64;
    let mut worst = ([0.0; 3], [0.0; 3]);
    let mut shell_sups = Vec::with_capacity(REMAINDER_SHELLS);
    for k in 0..REMAINDER_SHELLS {
        let r = 2f64.powi(k as i32);
        let mut sup = 0.0f64;
        for _ in 0..REMAINDER_SAMPLES_PER_SHELL {
            let dir = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            if hnorm(dir) < 1e-3 {
                continue;
            }
            let xi = dilate(unit_gauge(dir), r)?;
            let x = [0, 1, 2].map(|i| rng.gen_range(x_box.0[i]..=x_box.1[i]));
            let rem = p(x, xi) - parts.iter().map(|q| q.eval(xi)).sum::<f64>();
            let c = rem.abs() / r.powf(order);
            if c > constant {
                constant = c;
                worst = (x, xi);
            }
            sup = sup.max(c);
        }
        shell_sups.push((r, sup));
    }
    // growth of the shell suprema over the outer half of the shells
    let outer: Vec<(f64, f64)> = shell_sups[REMAINDER_SHELLS / 2..]
        .iter()
        .filter(|s| s.1 > 0.0)
        .copied()
        .collect();
    let divergent = outer.len() >= 2 && fit_log_slope(&outer) > 0.25;
    Ok(RemainderReport {
        constant,
        worst_x: worst.0,
        worst_xi: worst.1,
        shell_sups,
        divergent,
    })
}

