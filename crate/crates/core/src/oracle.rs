//! Independent ground truth for the Seeley engine: exact torus spectra, the
//! multinomial expansion of `p(ξ)^s`, and direct contour quadrature.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::SymbolError;
use crate::gauss::{rat_int, rat_to_f64, GaussQ, Rational};
use crate::poly::Poly;
use crate::power::{AffineExponent, PowerBasisTerm};
use crate::region::{contour_nodes, Contour, ContourNode, Segment};
use crate::spoly::SPoly;
use crate::symbol::ClassicalSymbol;

/// Constant-coefficient operator on the flat torus `ℝ^d/2πℤ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusOperator {
    symbol: ClassicalSymbol,
}

impl TorusOperator {
    pub fn new(symbol: ClassicalSymbol) -> Result<Self, SymbolError> {
        if !symbol.is_constant_coefficient() {
            return Err(SymbolError::Parse("torus operators need constant coefficients".into()));
        }
        if !symbol.full().is_real() {
            return Err(SymbolError::NotElliptic("symbol is not real".into()));
        }
        Ok(TorusOperator { symbol })
    }

    pub fn dim(&self) -> usize {
        self.symbol.dim()
    }

    pub fn symbol(&self) -> &ClassicalSymbol {
        &self.symbol
    }

    /// `p(k)` at every lattice point with `|k| ≤ radius`.
    pub fn eigenvalues(&self, radius: i64) -> Result<Vec<(Vec<i64>, Rational)>, SymbolError> {
        assert!(radius >= 1);
        let d = self.dim();
        let full = self.symbol.full();
        let zero_x = vec![GaussQ::zero(); d];
        let mut pts: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..d {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    (-radius..=radius).map(move |a| {
                        let mut q = p.clone();
                        q.push(a);
                        q
                    })
                })
                .collect();
        }
        pts.retain(|k| k.iter().map(|a| a * a).sum::<i64>() <= radius * radius);
        let mut out = Vec::with_capacity(pts.len());
        for k in pts {
            let xi: Vec<GaussQ> = k.iter().map(|&a| GaussQ::int(a)).collect();
            let v = full.eval_exact(&zero_x, &xi)?.re;
            let nonzero_k = k.iter().any(|&a| a != 0);
            if nonzero_k && !v.is_positive() {
                return Err(SymbolError::NotElliptic(format!("eigenvalue {v} at k = {k:?}")));
            }
            out.push((k, v));
        }
        Ok(out)
    }

    /// `k ↦ p(k)^s` on the orthogonal complement of the kernel.
    pub fn spectral_complex_power(&self, s: Complex64, radius: i64) -> Result<Vec<(Vec<i64>, Complex64)>, SymbolError> {
        Ok(self
            .eigenvalues(radius)?
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, (s * rat_to_f64(&v).ln()).exp()))
            .collect())
    }
}

/// Homogeneous parts of `p^s = Σ_n binom(s, n) (p − p_m)^n p_m^{s−n}`,
/// grouped by depth `j = 0..=depth`.
pub fn binomial_expansion_oracle(p: &ClassicalSymbol, depth: usize) -> Result<Vec<Vec<PowerBasisTerm>>, SymbolError> {
    if !p.is_constant_coefficient() {
        return Err(SymbolError::Parse("binomial oracle needs constant coefficients".into()));
    }
    let d = p.dim();
    // products[n][j]: sum of all products of n lower parts with total depth j
    let mut products: Vec<Vec<Poly>> = vec![vec![Poly::zero(d); depth + 1]];
    products[0][0] = Poly::one(d);
    for n in 1..=depth {
        let mut row = vec![Poly::zero(d); depth + 1];
        for j in n..=depth {
            for k in 1..=(j - n + 1) {
                let lower = p.part(k);
                if lower.is_zero() || products[n - 1][j - k].is_zero() {
                    continue;
                }
                row[j] = &row[j] + &(&products[n - 1][j - k] * &lower);
            }
        }
        products.push(row);
    }
    let mut parts = vec![Vec::new(); depth + 1];
    for (n, row) in products.iter().enumerate() {
        for (j, num) in row.iter().enumerate() {
            if num.is_zero() {
                continue;
            }
            parts[j].push(PowerBasisTerm {
                numerator: num.clone(),
                exponent: AffineExponent::new(Rational::one(), rat_int(-(n as i64))),
                scalar: SPoly::binomial(n as u32),
            });
        }
    }
    Ok(parts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// `|Q_N − Q_{N/2}|`, scaled by `i/2π`.
    pub discretization_error: f64,
    /// Contribution of the closing arc `|λ| = R_max`; the size of the ray
    /// tails dropped by truncation when the integrand decays.
    pub tail_estimate: f64,
    pub flagged: bool,
}

fn quadrature_sum(nodes: &[ContourNode], f: &dyn Fn(&ContourNode) -> Complex64) -> (Complex64, Complex64) {
    let mut total = Complex64::zero();
    let mut arc = Complex64::zero();
    for n in nodes {
        let v = f(n) * n.weight;
        total += v;
        if n.segment == Segment::ClosingArc {
            arc += v;
        }
    }
    let factor = Complex64::new(0.0, 1.0 / (2.0 * std::f64::consts::PI));
    (total * factor, arc * factor)
}

/// `(i/2π) ∫_Γ f(λ) dλ` with error estimates; `tolerance` sets `flagged`.
pub fn contour_quadrature(
    f: &dyn Fn(&ContourNode) -> Complex64,
    contour: &Contour,
    tolerance: f64,
) -> QuadratureResult {
    let (value, arc) = quadrature_sum(&contour_nodes(contour), f);
    let coarse = Contour {
        nodes: (contour.nodes / 2).max(1),
        ..*contour
    };
    let (coarse_value, _) = quadrature_sum(&contour_nodes(&coarse), f);
    let discretization_error = (value - coarse_value).norm();
    QuadratureResult {
        value,
        discretization_error,
        tail_estimate: arc.norm(),
        flagged: discretization_error > tolerance * value.norm().max(1.0),
    }
}

/// The resolvent integrand `λ^s (μ − λ)^{−k}`.
pub fn resolvent_integrand(k: u32, s: Complex64, mu: f64) -> impl Fn(&ContourNode) -> Complex64 {
    move |n: &ContourNode| n.pow(s) * (Complex64::new(mu, 0.0) - n.lambda).powi(-(k as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::rat;
    use crate::region::QuadratureRule;

    fn op(full: Poly) -> TorusOperator {
        TorusOperator::new(ClassicalSymbol::from_full(&full).unwrap()).unwrap()
    }

    #[test]
    fn circle_spectrum() {
        let t = op(Poly::xi(1, 0).pow(2));
        let mut ev: Vec<i64> = t
            .eigenvalues(3)
            .unwrap()
            .iter()
            .map(|(_, v)| v.to_integer().try_into().unwrap())
            .collect();
        ev.sort();
        assert_eq!(ev, vec![0, 1, 1, 4, 4, 9, 9]);
        let shifted = op(&Poly::xi(1, 0).pow(2) + &Poly::one(1));
        assert!(shifted.eigenvalues(3).unwrap().iter().all(|(k, v)| *v == rat_int(k[0] * k[0] + 1)));
    }

    #[test]
    fn anisotropic_torus() {
        let p = &Poly::xi(2, 0).pow(2) + &Poly::xi(2, 1).pow(2).scale(&GaussQ::int(4));
        let ev = op(p).eigenvalues(2).unwrap();
        let v = ev.iter().find(|(k, _)| k == &vec![1, 1]).unwrap();
        assert_eq!(v.1, rat_int(5));
    }

    #[test]
    fn spectral_powers() {
        let t = op(Poly::xi(1, 0).pow(2));
        let zero = t.spectral_complex_power(Complex64::new(0.0, 0.0), 3).unwrap();
        assert!(zero.iter().all(|(_, v)| (*v - 1.0).norm() < 1e-15));
        let inv = t.spectral_complex_power(Complex64::new(-1.0, 0.0), 3).unwrap();
        let at2 = inv.iter().find(|(k, _)| k == &vec![2]).unwrap().1;
        assert!((at2 - 0.25).norm() < 1e-15);
        let half = t.spectral_complex_power(Complex64::new(0.5, 0.0), 3).unwrap();
        let one = t.spectral_complex_power(Complex64::new(1.0, 0.0), 3).unwrap();
        for ((_, h), (_, o)) in half.iter().zip(&one) {
            assert!((h * h - o).norm() / o.norm() < 1e-14);
        }
    }

    #[test]
    fn binomial_parts_for_shifted_laplacian() {
        let c = rat(7, 3);
        let p = ClassicalSymbol::new(1, 2, vec![Poly::xi(1, 0).pow(2), Poly::zero(1), Poly::constant(1, GaussQ::real(c.clone()))])
            .unwrap();
        let parts = binomial_expansion_oracle(&p, 4).unwrap();
        assert_eq!(parts[0].len(), 1);
        assert!(parts[1].is_empty() && parts[3].is_empty());
        assert_eq!(parts[2][0].scalar, SPoly::binomial(1));
        assert_eq!(parts[2][0].numerator, Poly::constant(1, GaussQ::real(c.clone())));
        assert_eq!(parts[4][0].scalar, SPoly::binomial(2));
        assert_eq!(parts[4][0].numerator, Poly::constant(1, GaussQ::real(&c * &c)));
        assert_eq!(parts[4][0].exponent.b, rat_int(-2));
    }

    #[test]
    fn quadrature_identity_normalization() {
        let c = Contour::new(3.5, 128).unwrap();
        let r = contour_quadrature(&resolvent_integrand(1, Complex64::new(0.0, 0.0), 7.0), &c, 1e-8);
        assert!((r.value - 1.0).norm() < 1e-8, "{:?}", r);
        assert!(!r.flagged);
    }

    #[test]
    fn midpoint_rule_is_second_order() {
        let s = Complex64::new(-0.6, 0.3);
        let f = resolvent_integrand(2, s, 4.0);
        let exact = crate::seeley::residue_power(2, s, 4.0).unwrap();
        let err = |n: usize| {
            let c = Contour::new(2.0, n).unwrap().with_rule(QuadratureRule::Midpoint);
            (contour_quadrature(&f, &c, 1.0).value - exact).norm()
        };
        let (e1, e2) = (err(64), err(128));
        assert!(e1 / e2 >= 4.0 * 0.95, "ratio {}", e1 / e2);
    }
}
