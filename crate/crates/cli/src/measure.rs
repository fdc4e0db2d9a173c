//! Measurements behind each invariant. These return raw numbers; deciding
//! pass or fail against a tolerance is left to the caller.

use hpowers_core::battery::{constant_coefficient, variable_coefficient};
use hpowers_core::oracle::{binomial_expansion_oracle, contour_quadrature, resolvent_integrand, TorusOperator};
use hpowers_core::seeley::{complex_power_terms, integer_power_reduction, resolvent_terms, residue_power, verify_parametrix};
use hpowers_core::{part_difference, Contour, Poly};
use hpowers_heisenberg::probes::{
    microlocality_probe, parametric_domain_gap, star_product, ConePerturbation, GapReport, MicrolocalityReport,
    StarReport,
};
use hpowers_heisenberg::{HHomogeneousSymbol, SliceGrid};
use hpowers_rumin::complex::{LaplacianConvention, RuminBlock, Slot};
use hpowers_rumin::forms::db_blocks;
use hpowers_rumin::power::{contour_check, semigroup_deviation};
use hpowers_rumin::spectrum::{harmonic_dimensions, laplacian_block, weyl_exponent, WeylFit};
use hpowers_rumin::Su2Frame;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;

/// Independent stream per check so that adding draws to one check does not
/// shift the samples of another.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// `Σ |c_α x^a ξ^b|`: the magnitude the rounding error of `p(x, ξ)` scales with.
fn monomial_magnitude(p: &Poly, x: &[f64], xi: &[f64]) -> f64 {
    p.terms()
        .map(|(e, c)| {
            let mut m = Poly::zero(p.dim());
            m.add_term(e.clone(), c.clone());
            m.eval(x, xi).norm()
        })
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct BinomialMatch {
    pub operator: String,
    /// Depths whose canonical difference from the oracle is nonzero.
    pub mismatched_depths: Vec<usize>,
}

pub fn binomial_match(depth: usize) -> Result<Vec<BinomialMatch>, CliError> {
    constant_coefficient()
        .into_iter()
        .map(|(name, p)| {
            let seeley = complex_power_terms(&p, depth)?;
            let oracle = binomial_expansion_oracle(&p, depth)?;
            let mut bad = Vec::new();
            for j in 0..=depth {
                if !part_difference(&seeley.parts[j], &oracle[j], &seeley.base)?.is_zero() {
                    bad.push(j);
                }
            }
            Ok(BinomialMatch {
                operator: name.to_string(),
                mismatched_depths: bad,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ParametrixResult {
    pub operator: String,
    pub first_failure: Option<usize>,
    /// The depth-1 term is nonzero, so the x-derivative branch ran.
    pub lower_order_terms: bool,
    pub bookkeeping: bool,
}

pub fn parametrix_battery(depth: usize) -> Result<Vec<ParametrixResult>, CliError> {
    variable_coefficient()
        .into_iter()
        .map(|(name, p)| {
            let q = resolvent_terms(&p, depth)?;
            let report = verify_parametrix(&p, &q, depth);
            Ok(ParametrixResult {
                operator: name.to_string(),
                first_failure: report.first_failure(),
                lower_order_terms: depth == 0 || !q.parts[1].is_zero(),
                bookkeeping: q.all_terms().iter().all(|t| t.bookkeeping_holds(p.order())),
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueResult {
    pub cases: usize,
    pub worst_relative_error: f64,
    /// `P⁰ = I` and `P¹ = P` reproduced exactly by the closed form.
    pub normalizations_exact: bool,
    pub flagged: usize,
}

pub fn residue_matrix(seed: u64, cases: usize, nodes: usize) -> Result<ResidueResult, CliError> {
    let mut r = rng(seed, 3);
    let mut worst = 0.0f64;
    let mut flagged = 0;
    for _ in 0..cases {
        let k = r.gen_range(1..=4u32);
        let mu = r.gen_range(0.5..10.0);
        let s = Complex64::new(r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0));
        let exact = residue_power(k, s, mu)?;
        let q = contour_quadrature(&resolvent_integrand(k, s, mu), &Contour::new(mu / 2.0, nodes)?, 1e-8);
        flagged += q.flagged as usize;
        worst = worst.max(rel(q.value, exact));
    }
    let mu = 7.0;
    let normalizations_exact = residue_power(1, Complex64::new(0.0, 0.0), mu)? == Complex64::new(1.0, 0.0)
        && residue_power(1, Complex64::new(1.0, 0.0), mu)? == Complex64::new(mu, 0.0);
    Ok(ResidueResult {
        cases,
        worst_relative_error: worst,
        normalizations_exact,
        flagged,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HomogeneityResult {
    pub resolvent_terms: usize,
    pub power_parts: usize,
    /// `|q(tξ, t^mλ) − t^{−m−j}q(ξ, λ)|` over the term evaluated with its
    /// numerator replaced by the sum of monomial magnitudes.
    pub worst_resolvent_error: f64,
    /// Same, over `|q(tξ, t^mλ)|`.
    pub worst_resolvent_error_unscaled: f64,
    /// `|p(tξ) − t^{ms−j}p(ξ)|` over `Σ|terms(tξ)|`: deep parts are sums
    /// whose terms cancel, so this is the scale of the rounding error.
    pub worst_power_error: f64,
    /// The same error over `|p(tξ)|`, inflated by that cancellation.
    pub worst_power_error_unscaled: f64,
    /// Exact degree law `ms − j` for every power term.
    pub degree_law: bool,
}

pub fn homogeneity_audit(seed: u64, depth: usize) -> Result<HomogeneityResult, CliError> {
    let mut r = rng(seed, 4);
    let mut out = HomogeneityResult {
        resolvent_terms: 0,
        power_parts: 0,
        worst_resolvent_error: 0.0,
        worst_resolvent_error_unscaled: 0.0,
        worst_power_error: 0.0,
        worst_power_error_unscaled: 0.0,
        degree_law: true,
    };
    for (_, p) in constant_coefficient().into_iter().chain(variable_coefficient()) {
        let d = p.dim();
        let m = p.order() as i32;
        let q = resolvent_terms(&p, depth)?;
        for term in q.all_terms() {
            let x: Vec<f64> = (0..d).map(|_| r.gen_range(-1.0..1.0)).collect();
            let xi: Vec<f64> = (0..d).map(|_| r.gen_range(0.5..1.5)).collect();
            let lambda = Complex64::new(r.gen_range(-2.0..-0.1), r.gen_range(-1.0..1.0));
            let t = r.gen_range(0.5..3.0);
            let v = term.eval(&q.base, &x, &xi, lambda);
            let txi: Vec<f64> = xi.iter().map(|a| a * t).collect();
            let tl = lambda * t.powi(m);
            let scaled = term.eval(&q.base, &x, &txi, tl);
            let expected = v * t.powi(-m - term.j as i32);
            let pole = (q.base.eval(&x, &txi) - tl).powi(-(term.k as i32)).norm();
            let scale = monomial_magnitude(&term.numerator, &x, &txi) * pole;
            out.worst_resolvent_error = out.worst_resolvent_error.max((scaled - expected).norm() / scale.max(1e-300));
            out.worst_resolvent_error_unscaled = out.worst_resolvent_error_unscaled.max(rel(scaled, expected));
            out.resolvent_terms += 1;
        }
        let e = complex_power_terms(&p, depth)?;
        out.degree_law &= e.degree_law_holds();
        let s = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-0.5..0.5));
        for j in 0..=depth {
            let x: Vec<f64> = (0..d).map(|_| r.gen_range(-1.0..1.0)).collect();
            let xi: Vec<f64> = (0..d).map(|_| r.gen_range(0.5..1.5)).collect();
            let v = e.eval_part(j, &x, &xi, s);
            if v.norm() == 0.0 {
                continue;
            }
            let t: f64 = r.gen_range(0.5..3.0);
            let txi: Vec<f64> = xi.iter().map(|a| a * t).collect();
            let deg = s * p.order() as f64 - j as f64;
            let expected = v * (deg * t.ln()).exp();
            let got = e.eval_part(j, &x, &txi, s);
            let scale: f64 = e.parts[j].iter().map(|term| term.eval(&e.base, &x, &txi, s).norm()).sum();
            out.worst_power_error = out.worst_power_error.max((got - expected).norm() / scale);
            out.worst_power_error_unscaled = out.worst_power_error_unscaled.max(rel(got, expected));
            out.power_parts += 1;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionResult {
    /// `operator@k` for constant-coefficient cases with a symbolic mismatch.
    pub constant_mismatches: Vec<String>,
    /// Worst `|lhs − rhs|` over `max(1, Σ|terms|)`; the raw figures divide by
    /// `max(1, |rhs|)` instead and are kept for reference.
    pub constant_worst_deviation: f64,
    pub variable_worst_deviation: f64,
    pub constant_worst_raw: f64,
    pub variable_worst_raw: f64,
}

fn sample_points(r: &mut ChaCha8Rng, d: usize, n: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    (0..n)
        .map(|_| {
            let x = (0..d).map(|_| r.gen_range(-1.0..1.0)).collect();
            let xi = (0..d).map(|_| r.gen_range(0.5..2.0) * if r.gen() { 1.0 } else { -1.0 }).collect();
            (x, xi)
        })
        .collect()
}

pub fn reduction(seed: u64, depth: usize) -> Result<ReductionResult, CliError> {
    let mut r = rng(seed, 5);
    let mut out = ReductionResult {
        constant_mismatches: Vec::new(),
        constant_worst_deviation: 0.0,
        variable_worst_deviation: 0.0,
        constant_worst_raw: 0.0,
        variable_worst_raw: 0.0,
    };
    for (name, p) in constant_coefficient() {
        let pts = sample_points(&mut r, p.dim(), 5);
        for (s, k) in [(Complex64::new(0.5, 0.0), 1), (Complex64::new(-0.3, 0.4), 2)] {
            let rep = integer_power_reduction(&p, s, k, depth, &pts)?;
            if !rep.exact() {
                out.constant_mismatches.push(format!("{name}@{k}"));
            }
            out.constant_worst_deviation = out.constant_worst_deviation.max(rep.max_conditioned_deviation);
            out.constant_worst_raw = out.constant_worst_raw.max(rep.max_numeric_deviation);
        }
    }
    for (_, p) in variable_coefficient() {
        let pts = sample_points(&mut r, p.dim(), 8);
        let s = Complex64::new(r.gen_range(-0.5..0.9), r.gen_range(-0.5..0.5));
        let rep = integer_power_reduction(&p, s, 1, depth, &pts)?;
        out.variable_worst_deviation = out.variable_worst_deviation.max(rep.max_conditioned_deviation);
        out.variable_worst_raw = out.variable_worst_raw.max(rep.max_numeric_deviation);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusResult {
    pub eigenvalues_checked: usize,
    /// `max |λ^{1/2}λ^{1/2} − λ| / λ` over the lattice.
    pub worst_semigroup_error: f64,
}

/// Functional calculus on the torus battery: `P^{1/2}P^{1/2} = P` per
/// eigenvalue, with the kernel excluded.
pub fn torus_semigroup(radius: i64) -> Result<TorusResult, CliError> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (_, p) in constant_coefficient() {
        let op = TorusOperator::new(p)?;
        let half = op.spectral_complex_power(Complex64::new(0.5, 0.0), radius)?;
        let one = op.spectral_complex_power(Complex64::new(1.0, 0.0), radius)?;
        for ((k, a), (k2, b)) in half.iter().zip(&one) {
            assert_eq!(k, k2);
            worst = worst.max(rel(a * a, *b));
            count += 1;
        }
    }
    Ok(TorusResult {
        eigenvalues_checked: count,
        worst_semigroup_error: worst,
    })
}

/// Degree pairs for the star product, all inside the integrability window.
pub const DEGREE_PAIRS: [(f64, f64); 6] = [(-2.0, -1.5), (-1.0, -1.0), (-0.5, -2.0), (-1.5, -1.5), (-1.0, -2.5), (-0.5, -0.5)];

/// Gauge power with angular modulation; `xi0/norm²` is degree 0.
pub fn star_left(m: f64) -> Result<HHomogeneousSymbol, CliError> {
    Ok(HHomogeneousSymbol::parse(&format!("norm^({m}) * (1 + 0.3*xi1/norm + 0.2*xi0/norm^2)"), m)?)
}

pub fn star_right(m: f64) -> Result<HHomogeneousSymbol, CliError> {
    Ok(HHomogeneousSymbol::parse(&format!("norm^({m}) * (1 - 0.25*xi2/norm + 0.1*xi1*xi2/norm^2)"), m)?)
}

pub fn star_degrees(kappa: f64, grid: SliceGrid) -> Result<Vec<StarReport>, CliError> {
    DEGREE_PAIRS
        .iter()
        .map(|&(m1, m2)| Ok(star_product(&star_left(m1)?, &star_right(m2)?, kappa, grid)?))
        .collect()
}

pub const PROBE_POINT: [f64; 3] = [1.0, 0.0, 1.0];
pub const GAP_POINT: [f64; 3] = [0.5, 1.5, 0.0];

pub fn standard_cone() -> ConePerturbation {
    ConePerturbation {
        axis: [0.0, 1.0, 0.0],
        angle: 0.3,
        amplitude: HHomogeneousSymbol::gauge_power(-1.5),
    }
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || CliError::Usage(format!("sweep must be start:stop:step, got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    let (a, b, h) = (v[0], v[1], v[2]);
    if !(h > 0.0) || !(b >= a) {
        return Err(bad());
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| a + i as f64 * h).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct NonMicrolocality {
    pub probe: MicrolocalityReport,
    pub gap: GapReport,
}

pub fn non_microlocality(
    kappa: f64,
    grid: SliceGrid,
    rho: f64,
    eps: f64,
    lambdas: &[f64],
) -> Result<NonMicrolocality, CliError> {
    let p1 = HHomogeneousSymbol::gauge_power(-2.0);
    let p2 = HHomogeneousSymbol::gauge_power(-1.5);
    let probe = microlocality_probe(&p1, &p2, &standard_cone(), PROBE_POINT, kappa, grid)?;
    let gap = parametric_domain_gap(rho, lambdas, eps, GAP_POINT, kappa, grid)?;
    Ok(NonMicrolocality { probe, gap })
}

/// Bracket conventions every contact invariant is checked under: both
/// standard normalizations plus the configured one.
pub fn conventions(configured: f64) -> Vec<f64> {
    let mut v = vec![1.0, 2.0];
    if !v.contains(&configured) {
        v.push(configured);
    }
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexValidity {
    pub c: f64,
    pub lmax: usize,
    /// Relative `‖D₁d₀‖`, `‖d₂D₁‖`, worst over levels.
    pub worst_complex_defect: f64,
    /// `max |d_b² + ε(dθ)L_{X₀}| / scale`, worst over levels.
    pub worst_db_defect: f64,
}

pub fn complex_validity(c: f64, lmax: usize) -> Result<ComplexValidity, CliError> {
    let f = Su2Frame::new(c)?;
    let mut out = ComplexValidity {
        c,
        lmax,
        worst_complex_defect: 0.0,
        worst_db_defect: 0.0,
    };
    for level in 0..=lmax {
        let r = RuminBlock::new(&f, level)?;
        out.worst_complex_defect = out.worst_complex_defect.max(r.complex_defect());
        let db = db_blocks(&f, level);
        out.worst_db_defect = out.worst_db_defect.max(db.defect() / db.scale().max(1.0));
    }
    Ok(out)
}

pub fn harmonic(c: f64, conv: LaplacianConvention, lmax: usize) -> Result<[usize; 4], CliError> {
    Ok(harmonic_dimensions(&Su2Frame::new(c)?, conv, lmax)?)
}

pub fn weyl(c: f64, conv: LaplacianConvention, lmax: usize) -> Result<Vec<WeylFit>, CliError> {
    let f = Su2Frame::new(c)?;
    Slot::ALL.iter().map(|&s| Ok(weyl_exponent(&f, conv, s, lmax)?)).collect()
}

/// Exponent the Weyl law predicts for a slot: `Q / order` with `Q = 4`.
pub fn weyl_target(slot: &str) -> f64 {
    match slot {
        "0" | "2" => 2.0,
        _ => 1.0,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerAgreement {
    pub c: f64,
    pub levels: usize,
    pub exponents: Vec<(f64, f64)>,
    pub worst_contour_deviation: f64,
    pub pairs: Vec<((f64, f64), (f64, f64))>,
    pub worst_semigroup_deviation: f64,
}

pub fn power_agreement(
    c: f64,
    conv: LaplacianConvention,
    lmax: usize,
    seed: u64,
    pairs: usize,
) -> Result<PowerAgreement, CliError> {
    let f = Su2Frame::new(c)?;
    let mut r = rng(seed, 11);
    let mut exponents = vec![Complex64::new(-0.7, 0.0), Complex64::new(-0.3, 1.1), Complex64::new(0.5, 0.0)];
    exponents.push(Complex64::new(r.gen_range(-1.0..-0.05), r.gen_range(-1.0..1.0)));
    let st: Vec<(Complex64, Complex64)> = (0..pairs)
        .map(|_| {
            let mut z = || Complex64::new(r.gen_range(-1.5..1.5), r.gen_range(-1.0..1.0));
            (z(), z())
        })
        .collect();
    let mut out = PowerAgreement {
        c,
        levels: lmax + 1,
        exponents: exponents.iter().map(|s| (s.re, s.im)).collect(),
        worst_contour_deviation: 0.0,
        pairs: st.iter().map(|(s, t)| ((s.re, s.im), (t.re, t.im))).collect(),
        worst_semigroup_deviation: 0.0,
    };
    for level in 0..=lmax {
        let l = laplacian_block(&f, conv, level)?;
        for slot in Slot::ALL {
            for &s in &exponents {
                out.worst_contour_deviation = out.worst_contour_deviation.max(contour_check(&l, slot, s).contour_deviation);
            }
            for &(s, t) in &st {
                out.worst_semigroup_deviation = out.worst_semigroup_deviation.max(semigroup_deviation(l.slot(slot), s, t));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let v = parse_sweep("0:2:0.1").unwrap();
        assert_eq!(v.len(), 21);
        assert!((v[20] - 2.0).abs() < 1e-12);
        assert!(parse_sweep("0:2").is_err());
        assert!(parse_sweep("1:0:0.1").is_err());
        assert!(parse_sweep("0:1:0").is_err());
    }

    #[test]
    fn streams_are_independent() {
        let a: u64 = rng(1, 3).gen();
        let b: u64 = rng(1, 4).gen();
        let c: u64 = rng(1, 3).gen();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
