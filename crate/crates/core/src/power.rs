//! The closed term class `scalar(s) · numerator(x,ξ) · p_m(x,ξ)^{a·s+b}` in
//! which complex-power symbols are assembled.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::SymbolError;
use crate::gauss::{rat_int, rat_to_f64, GaussQ, Rational};
use crate::poly::Poly;
use crate::spoly::SPoly;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineExponent {
    pub a: Rational,
    pub b: Rational,
}

impl AffineExponent {
    pub fn new(a: Rational, b: Rational) -> Self {
        AffineExponent { a, b }
    }

    pub fn as_spoly(&self) -> SPoly {
        SPoly::affine(self.a.clone(), self.b.clone())
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        s * rat_to_f64(&self.a) + rat_to_f64(&self.b)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerBasisTerm {
    pub numerator: Poly,
    pub exponent: AffineExponent,
    pub scalar: SPoly,
}

impl PowerBasisTerm {
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero() || self.scalar.is_zero()
    }

    /// Requires `base(x, ξ) > 0`.
    pub fn eval(&self, base: &Poly, x: &[f64], xi: &[f64], s: Complex64) -> Complex64 {
        let pm = base.eval(x, xi).re;
        let e = self.exponent.eval(s);
        self.scalar.eval(s) * self.numerator.eval(x, xi) * (e * pm.ln()).exp()
    }

    /// `deg_ξ(numerator) + m·(a·s + b)` as the pair `(coefficient of s,
    /// constant)`.
    pub fn degree(&self, m: u32) -> Option<(Rational, Rational)> {
        let d = self.numerator.xi_degree()?;
        let m = rat_int(m as i64);
        Some((&m * &self.exponent.a, rat_int(d as i64) + &m * &self.exponent.b))
    }

    pub fn mul_poly(&self, p: &Poly) -> PowerBasisTerm {
        PowerBasisTerm {
            numerator: &self.numerator * p,
            ..self.clone()
        }
    }

    /// `D_{x_i} = −i∂_{x_i}` of the term; at most two output terms.
    pub fn diff_x(&self, i: usize, base: &Poly) -> Vec<PowerBasisTerm> {
        let minus_i = -GaussQ::i();
        let mut out = Vec::new();
        let dn = self.numerator.diff_x(i);
        if !dn.is_zero() {
            out.push(PowerBasisTerm {
                numerator: dn.scale(&minus_i),
                ..self.clone()
            });
        }
        let db = base.diff_x(i);
        if !db.is_zero() {
            // ∂ p^e = e · p^{e−1} ∂p
            out.push(PowerBasisTerm {
                numerator: (&self.numerator * &db).scale(&minus_i),
                exponent: AffineExponent::new(self.exponent.a.clone(), &self.exponent.b - Rational::one()),
                scalar: self.scalar.mul(&self.exponent.as_spoly()),
            });
        }
        out
    }

    /// Substitute a rational value for `s`.
    pub fn specialize(&self, s: &Rational) -> PowerBasisTerm {
        PowerBasisTerm {
            numerator: self.numerator.clone(),
            exponent: AffineExponent::new(Rational::zero(), &self.exponent.a * s + &self.exponent.b),
            scalar: SPoly::constant(self.scalar.eval_exact(s)),
        }
    }

    /// Product of two terms over the same base; `s` must be specialized in
    /// at least one factor when both carry `s`-dependence.
    pub fn mul(&self, other: &PowerBasisTerm) -> PowerBasisTerm {
        PowerBasisTerm {
            numerator: &self.numerator * &other.numerator,
            exponent: AffineExponent::new(
                &self.exponent.a + &other.exponent.a,
                &self.exponent.b + &other.exponent.b,
            ),
            scalar: self.scalar.mul(&other.scalar),
        }
    }
}

/// `p_s ∼ Σ_j p_{s, ms−j}` as lists of basis terms per depth.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerSymbolExpansion {
    pub order: u32,
    pub base: Poly,
    pub parts: Vec<Vec<PowerBasisTerm>>,
    /// Set once `s` has been replaced by a rational value.
    pub specialized: Option<Rational>,
}

impl PowerSymbolExpansion {
    pub fn depth(&self) -> usize {
        self.parts.len().saturating_sub(1)
    }

    pub fn eval_part(&self, j: usize, x: &[f64], xi: &[f64], s: Complex64) -> Complex64 {
        self.parts[j]
            .iter()
            .map(|t| t.eval(&self.base, x, xi, s))
            .fold(Complex64::zero(), |a, b| a + b)
    }

    /// Every term at depth `j` has degree `m·s − j` (with `s` replaced by its
    /// value once specialized).
    pub fn degree_law_holds(&self) -> bool {
        let m = rat_int(self.order as i64);
        self.parts.iter().enumerate().all(|(j, part)| {
            let j = rat_int(j as i64);
            part.iter().filter(|t| !t.is_zero()).all(|t| {
                let Some((slope, offset)) = t.degree(self.order) else {
                    return false;
                };
                match &self.specialized {
                    None => slope == m && offset == -j.clone(),
                    Some(s) => slope.is_zero() && offset == &m * s - &j,
                }
            })
        })
    }

    pub fn specialize(&self, s: &Rational) -> PowerSymbolExpansion {
        PowerSymbolExpansion {
            order: self.order,
            base: self.base.clone(),
            parts: self
                .parts
                .iter()
                .map(|p| p.iter().map(|t| t.specialize(s)).collect())
                .collect(),
            specialized: Some(s.clone()),
        }
    }

    pub fn term_count(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }
}

/// Canonical form of a sum of basis terms sharing the exponent slope `a`:
/// `base^{a·s + b_min} · Σ_i s^i · poly_i(x, ξ)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalPart {
    pub slope: Rational,
    pub min_offset: Rational,
    pub by_s_power: BTreeMap<usize, Poly>,
}

impl CanonicalPart {
    pub fn is_zero(&self) -> bool {
        self.by_s_power.is_empty()
    }
}

/// Bring `Σ sign·term` to canonical form. Returns an error when slopes differ
/// or offsets are not congruent modulo integers.
pub fn canonicalize(
    signed_terms: &[(i64, &PowerBasisTerm)],
    base: &Poly,
) -> Result<CanonicalPart, SymbolError> {
    let live: Vec<&(i64, &PowerBasisTerm)> = signed_terms.iter().filter(|(_, t)| !t.is_zero()).collect();
    let dim = base.dim();
    let Some(first) = live.first() else {
        return Ok(CanonicalPart {
            slope: Rational::zero(),
            min_offset: Rational::zero(),
            by_s_power: BTreeMap::new(),
        });
    };
    let slope = first.1.exponent.a.clone();
    let mut min_b = first.1.exponent.b.clone();
    for (_, t) in &live {
        if t.exponent.a != slope {
            return Err(SymbolError::IncommensurateExponents(
                format!("{}·s", t.exponent.a),
                format!("{slope}·s"),
            ));
        }
        let diff = &t.exponent.b - &min_b;
        if !diff.is_integer() {
            return Err(SymbolError::IncommensurateExponents(t.exponent.b.to_string(), min_b.to_string()));
        }
        if diff.is_negative() {
            min_b = t.exponent.b.clone();
        }
    }
    let mut by_s: BTreeMap<usize, Poly> = BTreeMap::new();
    let mut base_pows: Vec<Poly> = vec![Poly::one(dim)];
    for (sign, t) in &live {
        let shift = (&t.exponent.b - &min_b).to_integer();
        let shift: usize = shift.try_into().expect("small exponent shift");
        while base_pows.len() <= shift {
            let next = base_pows.last().unwrap() * base;
            base_pows.push(next);
        }
        let num = (&t.numerator * &base_pows[shift]).scale(&GaussQ::int(*sign));
        for (i, c) in t.scalar.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let slot = by_s.entry(i).or_insert_with(|| Poly::zero(dim));
            *slot = &*slot + &num.scale_rational(c);
        }
    }
    by_s.retain(|_, p| !p.is_zero());
    Ok(CanonicalPart {
        slope,
        min_offset: min_b,
        by_s_power: by_s,
    })
}

/// Exact symbolic difference `lhs − rhs`; empty when the parts agree.
pub fn part_difference(
    lhs: &[PowerBasisTerm],
    rhs: &[PowerBasisTerm],
    base: &Poly,
) -> Result<CanonicalPart, SymbolError> {
    let mut signed: Vec<(i64, &PowerBasisTerm)> = lhs.iter().map(|t| (1, t)).collect();
    signed.extend(rhs.iter().map(|t| (-1, t)));
    canonicalize(&signed, base)
}
