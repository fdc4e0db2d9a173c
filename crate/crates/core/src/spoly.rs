//! Univariate polynomials in the power parameter `s` with rational coefficients.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::gauss::{rat_int, rat_to_f64, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SPoly {
    /// `coeffs[i]` multiplies `s^i`; no trailing zeros.
    coeffs: Vec<Rational>,
}

impl SPoly {
    pub fn zero() -> Self {
        SPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        SPoly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        SPoly::constant(Rational::one())
    }

    /// `a·s + b`.
    pub fn affine(a: Rational, b: Rational) -> Self {
        SPoly::from_coeffs(vec![b, a])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        SPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                a + b
            })
            .collect();
        SPoly::from_coeffs(c)
    }

    pub fn mul(&self, other: &SPoly) -> SPoly {
        if self.is_zero() || other.is_zero() {
            return SPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        SPoly::from_coeffs(c)
    }

    pub fn scale(&self, q: &Rational) -> SPoly {
        SPoly::from_coeffs(self.coeffs.iter().map(|c| c * q).collect())
    }

    /// `p(s + shift)`.
    pub fn shift(&self, shift: &Rational) -> SPoly {
        let lin = SPoly::affine(Rational::one(), shift.clone());
        let mut out = SPoly::zero();
        let mut pow = SPoly::one();
        for c in &self.coeffs {
            out = out.add(&pow.scale(c));
            pow = pow.mul(&lin);
        }
        out
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * s + rat_to_f64(c))
    }

    pub fn eval_exact(&self, s: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * s + c)
    }

    /// `binom(s, n) = s(s−1)…(s−n+1)/n!` as a polynomial in `s`.
    pub fn binomial(n: u32) -> SPoly {
        let mut out = SPoly::one();
        for i in 0..n {
            out = out.mul(&SPoly::affine(Rational::one(), rat_int(-(i as i64))));
        }
        let fact: Rational = (1..=n as i64).map(rat_int).fold(Rational::one(), |a, b| a * b);
        out.scale(&(Rational::one() / fact))
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}·s"),
                _ => format!("{c}·s^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
