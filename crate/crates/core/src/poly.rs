//! Exact multivariate polynomials in chart variables `x₁..x_d` and covariables
//! `ξ₁..ξ_d` with Gaussian-rational coefficients.
//!
//! Exponent vectors have length `2d`: the first `d` entries belong to `x`, the
//! last `d` to `ξ`. Terms are kept in a `BTreeMap`, so iteration order and
//! therefore every printed or serialized form is canonical.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::SymbolError;
use crate::gauss::{rat_int, GaussQ, Rational};

pub type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<Exponent, GaussQ>,
}

impl Poly {
    pub fn zero(dim: usize) -> Self {
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: GaussQ) -> Self {
        let mut p = Poly::zero(dim);
        p.add_term(vec![0; 2 * dim], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Poly::constant(dim, GaussQ::one())
    }

    /// The monomial `c · x^a ξ^b`.
    pub fn monomial(dim: usize, x_exp: &[u32], xi_exp: &[u32], c: GaussQ) -> Self {
        assert_eq!(x_exp.len(), dim);
        assert_eq!(xi_exp.len(), dim);
        let mut e = x_exp.to_vec();
        e.extend_from_slice(xi_exp);
        let mut p = Poly::zero(dim);
        p.add_term(e, c);
        p
    }

    pub fn x(dim: usize, i: usize) -> Self {
        let mut e = vec![0; 2 * dim];
        e[i] = 1;
        let mut p = Poly::zero(dim);
        p.add_term(e, GaussQ::one());
        p
    }

    pub fn xi(dim: usize, i: usize) -> Self {
        let mut e = vec![0; 2 * dim];
        e[dim + i] = 1;
        let mut p = Poly::zero(dim);
        p.add_term(e, GaussQ::one());
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &GaussQ)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exp: Exponent, c: GaussQ) {
        debug_assert_eq!(exp.len(), 2 * self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Poly) -> Result<(), SymbolError> {
        if self.dim != other.dim {
            return Err(SymbolError::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, SymbolError> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, SymbolError> {
        self.check_dim(other)?;
        let mut out = Poly::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussQ) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.dim);
        }
        Poly {
            dim: self.dim,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Poly {
        self.scale(&GaussQ::real(q.clone()))
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(self.dim);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to variable `var` (index into the
    /// combined `(x, ξ)` exponent vector).
    pub fn diff(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.add_term(ne, c.scale(&rat_int(e[var] as i64)));
        }
        out
    }

    pub fn diff_x(&self, i: usize) -> Poly {
        self.diff(i)
    }

    pub fn diff_xi(&self, i: usize) -> Poly {
        self.diff(self.dim + i)
    }

    /// `∂_ξ^α` for a multi-index `α` of length `d`.
    pub fn diff_xi_multi(&self, alpha: &[u32]) -> Poly {
        let mut out = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.diff_xi(i);
            }
        }
        out
    }

    /// `∂_x^α` for a multi-index `α` of length `d`.
    pub fn diff_x_multi(&self, alpha: &[u32]) -> Poly {
        let mut out = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.diff_x(i);
            }
        }
        out
    }

    pub fn depends_on_x(&self) -> bool {
        self.terms.keys().any(|e| e[..self.dim].iter().any(|&a| a > 0))
    }

    fn xi_degree_of(&self, e: &Exponent) -> u32 {
        e[self.dim..].iter().sum()
    }

    /// Common ξ-degree of all monomials, `None` for the zero polynomial or a
    /// non-homogeneous one.
    pub fn xi_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| self.xi_degree_of(e));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_xi_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|e| self.xi_degree_of(e) == degree)
    }

    /// Split into ξ-homogeneous components keyed by degree.
    pub fn xi_components(&self) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(self.xi_degree_of(e))
                .or_insert_with(|| Poly::zero(self.dim))
                .add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn max_xi_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| self.xi_degree_of(e)).max()
    }

    /// Exact evaluation at a Gaussian-rational point.
    pub fn eval_exact(&self, x: &[GaussQ], xi: &[GaussQ]) -> Result<GaussQ, SymbolError> {
        if x.len() != self.dim || xi.len() != self.dim {
            return Err(SymbolError::DimensionMismatch(self.dim, x.len().max(xi.len())));
        }
        let mut acc = GaussQ::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (v, &a) in x.iter().chain(xi.iter()).zip(e.iter()) {
                for _ in 0..a {
                    m = &m * v;
                }
            }
            acc += &m;
        }
        Ok(acc)
    }

    /// Floating-point evaluation, monomial by monomial.
    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.dim);
        assert_eq!(xi.len(), self.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = 1.0f64;
            for (v, &a) in x.iter().chain(xi.iter()).zip(e.iter()) {
                m *= v.powi(a as i32);
            }
            acc += c.to_complex() * m;
        }
        acc
    }

    pub fn eval_complex(&self, x: &[Complex64], xi: &[Complex64]) -> Complex64 {
        assert_eq!(x.len(), self.dim);
        assert_eq!(xi.len(), self.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = c.to_complex();
            for (v, &a) in x.iter().chain(xi.iter()).zip(e.iter()) {
                m *= v.powi(a as i32);
            }
            acc += m;
        }
        acc
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussQ::is_real)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial dimension mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_add(&-rhs).expect("polynomial dimension mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial dimension mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&GaussQ::int(-1))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &a) in e.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let name = if i < self.dim {
                    format!("x{}", i + 1)
                } else {
                    format!("ξ{}", i - self.dim + 1)
                };
                if a == 1 {
                    write!(f, "·{name}")?;
                } else {
                    write!(f, "·{name}^{a}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::rat;

    #[test]
    fn monomial_product() {
        let x = Poly::xi(1, 0);
        let x2 = &x * &x;
        assert_eq!(&x2 * &x, x.pow(3));
        assert_eq!(x.pow(3).xi_degree(), Some(3));
    }

    #[test]
    fn exact_evaluation() {
        let p = &Poly::xi(1, 0).pow(2) + &Poly::x(1, 0);
        let v = p.eval_exact(&[GaussQ::int(1)], &[GaussQ::int(2)]).unwrap();
        assert_eq!(v, GaussQ::int(5));
        assert_eq!(p.eval(&[1.0], &[2.0]).re, 5.0);
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = &Poly::xi(2, 1).pow(3) + &Poly::x(2, 0).scale_rational(&rat(3, 7));
        let z = &p + &(-&p);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = Poly::one(1);
        let b = Poly::one(2);
        assert_eq!(a.checked_add(&b), Err(SymbolError::DimensionMismatch(1, 2)));
        assert!(a.checked_mul(&b).is_err());
        assert!(a.eval_exact(&[], &[]).is_err());
    }

    #[test]
    fn derivative_of_power() {
        let p = Poly::xi(1, 0).pow(4);
        assert_eq!(p.diff_xi(0), Poly::xi(1, 0).pow(3).scale_rational(&rat(4, 1)));
        assert!(p.diff_x(0).is_zero());
    }
}
