//! Seeley's construction at the symbol level: the resolvent recursion, its
//! exact verification, the residue map `λ^s`-integration, and the reduction
//! `P^s = P^k P^{s−k}`.

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::SymbolError;
use crate::gauss::{rat, rat_int, rat_to_f64, GaussQ, Rational};
use crate::poly::Poly;
use crate::power::{part_difference, AffineExponent, CanonicalPart, PowerBasisTerm, PowerSymbolExpansion};
use crate::resolvent::{inv_factorial, PoleSum, ResolventExpansion};
use crate::spoly::SPoly;
use crate::symbol::{ClassicalSymbol, MultiIndex};

pub const DEFAULT_DEPTH: usize = 4;

/// Axis-aligned box `Π [−wᵢ, wᵢ]` in chart coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartBox {
    pub half_widths: Vec<Rational>,
}

impl ChartBox {
    pub fn unit(d: usize) -> Self {
        ChartBox {
            half_widths: vec![Rational::one(); d],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RhoBound {
    /// Smallest sampled value of `p_m(x, ξ)/|ξ|^m`, exact.
    pub rho: Rational,
    /// `rho` minus the largest variation between neighbouring samples.
    pub certified: f64,
}

const X_SAMPLES: i64 = 9;
const XI_LATTICE: i64 = 6;
const ANGLE_SAMPLES: usize = 720;

fn x_grid(bx: &ChartBox) -> Vec<Vec<Rational>> {
    let mut pts: Vec<Vec<Rational>> = vec![vec![]];
    let half = (X_SAMPLES - 1) / 2;
    for w in &bx.half_widths {
        let axis: Vec<Rational> = (-half..=half).map(|i| w * rat(i, half)).collect();
        pts = pts
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(a.clone());
                    q
                })
            })
            .collect();
    }
    pts
}

fn lattice_directions(d: usize) -> Vec<Vec<i64>> {
    let mut pts: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..d {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (-XI_LATTICE..=XI_LATTICE).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    pts.retain(|v| v.iter().any(|&a| a != 0));
    pts
}

/// Lower bound for `inf_{x ∈ box, |ξ| = 1} p_m(x, ξ)`.
pub fn rho_bound(p: &ClassicalSymbol, bx: &ChartBox) -> Result<RhoBound, SymbolError> {
    let d = p.dim();
    if bx.half_widths.len() != d {
        return Err(SymbolError::DimensionMismatch(d, bx.half_widths.len()));
    }
    let m = p.order();
    if m % 2 == 1 {
        return Err(SymbolError::NotElliptic(format!("odd order {m} cannot have a positive principal symbol")));
    }
    let pm = p.principal();
    // exact pass on rational directions: p_m(x, ξ) / (|ξ|²)^{m/2}
    let mut best: Option<Rational> = None;
    for x in x_grid(bx) {
        let xq: Vec<GaussQ> = x.iter().cloned().map(GaussQ::real).collect();
        for dir in lattice_directions(d) {
            let xiq: Vec<GaussQ> = dir.iter().map(|&a| GaussQ::int(a)).collect();
            let v = pm.eval_exact(&xq, &xiq)?;
            if !v.im.is_zero() {
                return Err(SymbolError::NotElliptic("principal symbol is not real".into()));
            }
            let norm2: i64 = dir.iter().map(|a| a * a).sum();
            let normalized = v.re / rat_int(norm2).pow((m / 2) as i32);
            if best.as_ref().map_or(true, |b| normalized < *b) {
                best = Some(normalized);
            }
        }
    }
    let rho = best.expect("nonempty sample set");
    // float pass for the neighbour variation
    let xs: Vec<Vec<f64>> = x_grid(bx).iter().map(|v| v.iter().map(rat_to_f64).collect()).collect();
    let dirs: Vec<Vec<f64>> = match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..ANGLE_SAMPLES)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * i as f64 / ANGLE_SAMPLES as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => lattice_directions(d)
            .into_iter()
            .map(|v| {
                let n = v.iter().map(|a| (a * a) as f64).sum::<f64>().sqrt();
                v.iter().map(|&a| a as f64 / n).collect()
            })
            .collect(),
    };
    let vals: Vec<Vec<f64>> = xs
        .iter()
        .map(|x| dirs.iter().map(|xi| pm.eval(x, xi).re).collect())
        .collect();
    let mut variation = 0.0f64;
    for (a, row) in vals.iter().enumerate() {
        for (b, &v) in row.iter().enumerate() {
            if d == 2 {
                variation = variation.max((v - row[(b + 1) % row.len()]).abs());
            }
            // neighbours along each x axis
            let mut stride = 1;
            for _ in 0..d {
                let per = X_SAMPLES as usize;
                if (a / stride) % per + 1 < per {
                    variation = variation.max((v - vals[a + stride][b]).abs());
                }
                stride *= per;
            }
        }
    }
    let certified = rat_to_f64(&rho) - variation;
    if !rho.is_positive() || certified <= 0.0 {
        return Err(SymbolError::NotElliptic(format!(
            "sampled infimum {} with slack {variation:.3e} is not positive",
            rat_to_f64(&rho)
        )));
    }
    Ok(RhoBound { rho, certified })
}

/// `q_{−m−j}` for `j = 0..=depth`.
pub fn resolvent_terms(p: &ClassicalSymbol, depth: usize) -> Result<ResolventExpansion, SymbolError> {
    rho_bound(p, &ChartBox::unit(p.dim()))?;
    Ok(resolvent_terms_unchecked(p, depth))
}

/// The recursion without the ellipticity gate.
pub fn resolvent_terms_unchecked(p: &ClassicalSymbol, depth: usize) -> ResolventExpansion {
    let d = p.dim();
    let base = p.principal().clone();
    let mut parts: Vec<PoleSum> = vec![PoleSum::single(1, Poly::one(d))];
    for j in 1..=depth {
        let mut acc = PoleSum::zero(d);
        for (l, q_l) in parts.iter().enumerate() {
            for k in 0..=(j - l) {
                let a = (j - l - k) as u32;
                let pk = p.part(k);
                if pk.is_zero() {
                    continue;
                }
                for alpha in MultiIndex::all_of_order(d, a) {
                    let dp = pk.diff_xi_multi(&alpha.0);
                    if dp.is_zero() {
                        continue;
                    }
                    let dq = q_l.diff_x(&alpha.0, &base);
                    acc.add_sum(&dq.mul_poly(&dp).scale(&inv_factorial(&alpha)));
                }
            }
        }
        parts.push(acc.raise_pole().scale(&GaussQ::int(-1)));
    }
    ResolventExpansion {
        order: p.order(),
        base,
        parts,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParametrixReport {
    /// Residual at each depth after removing the identity at depth 0.
    pub residuals: Vec<PoleSum>,
}

impl ParametrixReport {
    pub fn first_failure(&self) -> Option<usize> {
        self.residuals.iter().position(|r| !r.is_zero())
    }

    pub fn is_exact(&self) -> bool {
        self.first_failure().is_none()
    }
}

/// Expand `(p − λ)q + Σ_{α≠0} (1/α!) ∂_ξ^α p D_x^α q` by depth and subtract 1.
pub fn verify_parametrix(p: &ClassicalSymbol, q: &ResolventExpansion, depth: usize) -> ParametrixReport {
    let d = p.dim();
    let base = &q.base;
    let mut residuals = Vec::with_capacity(depth + 1);
    for j in 0..=depth {
        let mut acc = PoleSum::zero(d);
        for l in 0..=j.min(q.depth()) {
            let q_l = &q.parts[l];
            for k in 0..=(j - l) {
                let a = (j - l - k) as u32;
                if a == 0 && k == 0 {
                    // (p_m − λ) q_l
                    acc.add_sum(&q_l.lower_pole());
                    continue;
                }
                let pk = p.part(k);
                if pk.is_zero() {
                    continue;
                }
                for alpha in MultiIndex::all_of_order(d, a) {
                    let dp = pk.diff_xi_multi(&alpha.0);
                    if dp.is_zero() {
                        continue;
                    }
                    let dq = q_l.diff_x(&alpha.0, base);
                    acc.add_sum(&dq.mul_poly(&dp).scale(&inv_factorial(&alpha)));
                }
            }
        }
        if j == 0 {
            acc.add(0, &Poly::one(d).scale(&GaussQ::int(-1)));
        }
        residuals.push(acc);
    }
    ParametrixReport { residuals }
}

/// Scalar factor of the residue map for a pole of order `k`:
/// `(−1)^{k−1} binom(s, k−1)`.
pub fn residue_scalar(k: u32) -> SPoly {
    assert!(k >= 1);
    let b = SPoly::binomial(k - 1);
    if k % 2 == 0 {
        b.scale(&rat_int(-1))
    } else {
        b
    }
}

/// `(i/2π) ∮_Γ λ^s (μ − λ)^{−k} dλ = (−1)^{k−1} binom(s, k−1) μ^{s−k+1}`.
pub fn residue_power(k: u32, s: Complex64, mu: f64) -> Result<Complex64, SymbolError> {
    if k == 0 {
        return Err(SymbolError::ZeroPoleOrder);
    }
    assert!(mu > 0.0, "mu must be positive");
    let e = s - (k as f64 - 1.0);
    // integer exponents exactly, so that P⁰ = I and P¹ = P hold bit for bit
    let pow = if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= 64.0 {
        Complex64::new(mu.powi(e.re as i32), 0.0)
    } else {
        (e * mu.ln()).exp()
    };
    Ok(residue_scalar(k).eval(s) * pow)
}

fn power_terms_from(q: &ResolventExpansion, shift: i64) -> PowerSymbolExpansion {
    let shift_q = rat_int(shift);
    let parts = q
        .parts
        .iter()
        .map(|part| {
            part.terms
                .iter()
                .map(|(&k, a)| PowerBasisTerm {
                    numerator: a.clone(),
                    exponent: AffineExponent::new(Rational::one(), rat_int(1 - k as i64) + &shift_q),
                    scalar: residue_scalar(k).shift(&shift_q),
                })
                .collect()
        })
        .collect();
    PowerSymbolExpansion {
        order: q.order,
        base: q.base.clone(),
        parts,
        specialized: None,
    }
}

/// `p_{s, ms−j}` for `j = 0..=depth`: each `a·(p_m − λ)^{−k}` becomes
/// `a · (−1)^{k−1} binom(s, k−1) · p_m^{s−k+1}`.
pub fn complex_power_terms(p: &ClassicalSymbol, depth: usize) -> Result<PowerSymbolExpansion, SymbolError> {
    Ok(power_terms_from(&resolvent_terms(p, depth)?, 0))
}

/// The expansion of `P^{s−k}` written in the variable `s`.
pub fn shifted_power_terms(p: &ClassicalSymbol, depth: usize, k: u32) -> Result<PowerSymbolExpansion, SymbolError> {
    Ok(power_terms_from(&resolvent_terms(p, depth)?, -(k as i64)))
}

/// Full-symbol composition `Σ_α (1/α!) ∂_ξ^α a · D_x^α b` of two polynomial
/// symbols; finite for polynomials.
pub fn compose_polynomial_symbols(a: &Poly, b: &Poly) -> Poly {
    let d = a.dim();
    let max = a.max_xi_degree().unwrap_or(0);
    let mut out = Poly::zero(d);
    let minus_i = -GaussQ::i();
    for n in 0..=max {
        for alpha in MultiIndex::all_of_order(d, n) {
            let da = a.diff_xi_multi(&alpha.0);
            if da.is_zero() {
                continue;
            }
            let mut db = b.diff_x_multi(&alpha.0);
            for _ in 0..n {
                db = db.scale(&minus_i);
            }
            out = &out + &(&da * &db).scale(&inv_factorial(&alpha));
        }
    }
    out
}

/// Compose a polynomial symbol `a` with a power expansion, collected by depth
/// through `depth`.
pub fn compose_with_expansion(a: &ClassicalSymbol, e: &PowerSymbolExpansion, depth: usize) -> Vec<Vec<PowerBasisTerm>> {
    let d = a.dim();
    let mut out: Vec<Vec<PowerBasisTerm>> = vec![Vec::new(); depth + 1];
    for i in 0..=depth.min(a.order() as usize) {
        let ai = a.part(i);
        if ai.is_zero() {
            continue;
        }
        for l in 0..=(depth - i).min(e.depth()) {
            for n in 0..=(depth - i - l) as u32 {
                for alpha in MultiIndex::all_of_order(d, n) {
                    let da = ai.diff_xi_multi(&alpha.0);
                    if da.is_zero() {
                        continue;
                    }
                    let c = inv_factorial(&alpha);
                    let mut terms: Vec<PowerBasisTerm> = e.parts[l].clone();
                    for (var, &count) in alpha.0.iter().enumerate() {
                        for _ in 0..count {
                            terms = terms.iter().flat_map(|t| t.diff_x(var, &e.base)).collect();
                        }
                    }
                    let target = &mut out[i + l + n as usize];
                    target.extend(terms.iter().map(|t| t.mul_poly(&da.scale(&c))));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionReport {
    pub k: u32,
    /// Depths whose canonical symbolic difference is nonzero.
    pub symbolic_mismatches: Vec<usize>,
    /// Largest `|lhs − rhs|/max(1, |rhs|)` over sample points and depths.
    pub max_numeric_deviation: f64,
    /// Same difference over `max(1, Σ|terms|)` summed across both sides: the
    /// rounding-aware figure when the parts cancel heavily.
    pub max_conditioned_deviation: f64,
}

impl ReductionReport {
    pub fn exact(&self) -> bool {
        self.symbolic_mismatches.is_empty()
    }
}

/// Compare `σ(P^k) ∘ p_{s−k}` with `p_s` part by part through `depth`, both
/// symbolically and at the sample points `(x, ξ)` for the given `s`.
pub fn integer_power_reduction(
    p: &ClassicalSymbol,
    s: Complex64,
    k: u32,
    depth: usize,
    samples: &[(Vec<f64>, Vec<f64>)],
) -> Result<ReductionReport, SymbolError> {
    if k == 0 || s.re >= k as f64 {
        return Err(SymbolError::PowerPrecondition { s: format!("{s}"), k });
    }
    let full = p.full();
    let mut pk = full.clone();
    for _ in 1..k {
        pk = compose_polynomial_symbols(&pk, &full);
    }
    let pk = ClassicalSymbol::from_full(&pk)?;
    let lower = shifted_power_terms(p, depth, k)?;
    let lhs = compose_with_expansion(&pk, &lower, depth);
    let rhs = complex_power_terms(p, depth)?;
    let mut symbolic_mismatches = Vec::new();
    let mut max_dev = 0.0f64;
    let mut max_cond = 0.0f64;
    for j in 0..=depth {
        let diff: CanonicalPart = part_difference(&lhs[j], &rhs.parts[j], &rhs.base)?;
        if !diff.is_zero() {
            symbolic_mismatches.push(j);
        }
        for (x, xi) in samples {
            let lt: Vec<Complex64> = lhs[j].iter().map(|t| t.eval(&rhs.base, x, xi, s)).collect();
            let rt: Vec<Complex64> = rhs.parts[j].iter().map(|t| t.eval(&rhs.base, x, xi, s)).collect();
            let (l, r): (Complex64, Complex64) = (lt.iter().sum(), rt.iter().sum());
            let mass: f64 = lt.iter().chain(&rt).map(|z| z.norm()).sum();
            max_dev = max_dev.max((l - r).norm() / r.norm().max(1.0));
            max_cond = max_cond.max((l - r).norm() / mass.max(1.0));
        }
    }
    Ok(ReductionReport {
        k,
        symbolic_mismatches,
        max_numeric_deviation: max_dev,
        max_conditioned_deviation: max_cond,
    })
}

/// For constant coefficients: the depth-collected pointwise product of the
/// expansions at `s` and `t`, compared exactly with the expansion at `s + t`.
/// Returns the depths that differ.
pub fn semigroup_mismatches(
    p: &ClassicalSymbol,
    s: &Rational,
    t: &Rational,
    depth: usize,
) -> Result<Vec<usize>, SymbolError> {
    assert!(p.is_constant_coefficient(), "symbol-level semigroup needs constant coefficients");
    let e = complex_power_terms(p, depth)?;
    let (es, et, est) = (e.specialize(s), e.specialize(t), e.specialize(&(s + t)));
    let mut bad = Vec::new();
    for j in 0..=depth {
        let mut prod = Vec::new();
        for i in 0..=j {
            for a in &es.parts[i] {
                for b in &et.parts[j - i] {
                    prod.push(a.mul(b));
                }
            }
        }
        if !part_difference(&prod, &est.parts[j], &e.base)?.is_zero() {
            bad.push(j);
        }
    }
    Ok(bad)
}

/// `binom(s, n)` evaluated at complex `s`.
pub fn binomial_complex(s: Complex64, n: u32) -> Complex64 {
    SPoly::binomial(n).eval(s)
}

/// Numerically relevant size of a rational, for diagnostics.
pub fn rational_magnitude(q: &Rational) -> f64 {
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi2(d: usize) -> Poly {
        (0..d).fold(Poly::zero(d), |acc, i| &acc + &Poly::xi(d, i).pow(2))
    }

    fn c(q: Rational) -> Poly {
        Poly::constant(1, GaussQ::real(q))
    }

    #[test]
    fn rho_examples() {
        let p = ClassicalSymbol::new(1, 2, vec![xi2(1)]).unwrap();
        assert_eq!(rho_bound(&p, &ChartBox::unit(1)).unwrap().rho, rat_int(1));
        let var = &xi2(1) + &(&Poly::x(1, 0).pow(2) * &xi2(1));
        let p = ClassicalSymbol::new(1, 2, vec![var]).unwrap();
        assert_eq!(rho_bound(&p, &ChartBox::unit(1)).unwrap().rho, rat_int(1));
        let quartic = &Poly::xi(2, 0).pow(4) + &Poly::xi(2, 1).pow(4);
        let p = ClassicalSymbol::new(2, 4, vec![quartic]).unwrap();
        let rb = rho_bound(&p, &ChartBox::unit(2)).unwrap();
        assert_eq!(rb.rho, rat(1, 2));
        assert!(rb.certified > 0.0 && rb.certified <= 0.5);
    }

    #[test]
    fn rejects_non_elliptic() {
        let p = ClassicalSymbol::new(1, 2, vec![xi2(1).scale(&GaussQ::int(-1))]).unwrap();
        assert!(matches!(resolvent_terms(&p, 2), Err(SymbolError::NotElliptic(_))));
        // degenerate at x = 0
        let p = ClassicalSymbol::new(1, 2, vec![&Poly::x(1, 0).pow(2) * &xi2(1)]).unwrap();
        assert!(rho_bound(&p, &ChartBox::unit(1)).is_err());
    }

    #[test]
    fn pure_laplacian_has_single_term() {
        let p = ClassicalSymbol::new(1, 2, vec![xi2(1)]).unwrap();
        let q = resolvent_terms(&p, 4).unwrap();
        assert!(q.leading_is_canonical());
        assert!(q.parts[1..].iter().all(PoleSum::is_zero));
    }

    #[test]
    fn shifted_laplacian_one_step() {
        let p = ClassicalSymbol::new(1, 2, vec![xi2(1), Poly::zero(1), c(rat(3, 1))]).unwrap();
        let q = resolvent_terms(&p, 2).unwrap();
        assert!(q.parts[1].is_zero());
        assert_eq!(q.parts[2], PoleSum::single(2, c(rat(-3, 1))));
        assert!(verify_parametrix(&p, &q, 2).is_exact());
    }

    #[test]
    fn variable_coefficient_parametrix() {
        let lead = &xi2(1) + &(&Poly::x(1, 0).pow(2) * &xi2(1));
        let p = ClassicalSymbol::new(1, 2, vec![lead]).unwrap();
        let q = resolvent_terms(&p, 3).unwrap();
        assert!(!q.parts[1].is_zero());
        assert!(q.all_terms().iter().all(|t| t.bookkeeping_holds(2)));
        assert!(verify_parametrix(&p, &q, 3).is_exact());
    }

    #[test]
    fn corrupted_expansion_detected() {
        let lead = &xi2(1) + &(&Poly::x(1, 0).pow(2) * &xi2(1));
        let p = ClassicalSymbol::new(1, 2, vec![lead]).unwrap();
        let mut q = resolvent_terms(&p, 3).unwrap();
        let k = *q.parts[2].terms.keys().next().unwrap();
        q.parts[2].terms.remove(&k);
        assert_eq!(verify_parametrix(&p, &q, 3).first_failure(), Some(2));
    }

    #[test]
    fn residue_normalizations() {
        let one = residue_power(1, Complex64::new(0.0, 0.0), 7.0).unwrap();
        assert_eq!(one, Complex64::new(1.0, 0.0));
        let three = residue_power(1, Complex64::new(1.0, 0.0), 3.0).unwrap();
        assert!((three - 3.0).norm() < 1e-15);
        assert_eq!(residue_power(0, Complex64::new(0.0, 0.0), 1.0), Err(SymbolError::ZeroPoleOrder));
    }

    #[test]
    fn power_of_laplacian() {
        let p = ClassicalSymbol::new(1, 2, vec![xi2(1)]).unwrap();
        let e = complex_power_terms(&p, 3).unwrap();
        assert_eq!(e.parts[0].len(), 1);
        assert!(e.parts[1..].iter().all(|p| p.iter().all(PowerBasisTerm::is_zero)));
        assert!(e.degree_law_holds());
    }

    #[test]
    fn shifted_laplacian_depth_two() {
        let p = ClassicalSymbol::new(1, 2, vec![xi2(1), Poly::zero(1), c(rat(5, 2))]).unwrap();
        let e = complex_power_terms(&p, 2).unwrap();
        // s · c · (ξ²)^{s−1}
        let expected = PowerBasisTerm {
            numerator: c(rat(5, 2)),
            exponent: AffineExponent::new(rat_int(1), rat_int(-1)),
            scalar: SPoly::affine(rat_int(1), rat_int(0)),
        };
        assert!(part_difference(&e.parts[2], &[expected], &e.base).unwrap().is_zero());
    }

    #[test]
    fn reduction_precondition() {
        let p = ClassicalSymbol::new(1, 2, vec![xi2(1)]).unwrap();
        let err = integer_power_reduction(&p, Complex64::new(1.0, 0.0), 1, 2, &[]).unwrap_err();
        assert!(matches!(err, SymbolError::PowerPrecondition { .. }));
        let ok = integer_power_reduction(&p, Complex64::new(0.5, 0.0), 1, 2, &[(vec![0.0], vec![1.3])]).unwrap();
        assert!(ok.exact());
    }
}
