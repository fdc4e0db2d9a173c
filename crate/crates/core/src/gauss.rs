//! Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    // numerator/denominator may exceed f64 range individually
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = q.numer().bits().max(q.denom().bits()) as i64 - 60;
            let n = (q.numer() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift.max(0) as usize).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussQ {
    pub re: Rational,
    pub im: Rational,
}

impl GaussQ {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussQ { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussQ {
            re,
            im: Rational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::real(rat_int(n))
    }

    pub fn i() -> Self {
        GaussQ {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        GaussQ {
            re: &self.re * q,
            im: &self.im * q,
        }
    }

    pub fn conj(&self) -> Self {
        GaussQ {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl Zero for GaussQ {
    fn zero() -> Self {
        GaussQ {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussQ {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl From<Rational> for GaussQ {
    fn from(q: Rational) -> Self {
        Self::real(q)
    }
}

impl Add for GaussQ {
    type Output = GaussQ;
    fn add(self, rhs: GaussQ) -> GaussQ {
        GaussQ {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn add(self, rhs: &GaussQ) -> GaussQ {
        GaussQ {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl AddAssign<&GaussQ> for GaussQ {
    fn add_assign(&mut self, rhs: &GaussQ) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for GaussQ {
    type Output = GaussQ;
    fn sub(self, rhs: GaussQ) -> GaussQ {
        GaussQ {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for GaussQ {
    type Output = GaussQ;
    fn neg(self) -> GaussQ {
        GaussQ {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for GaussQ {
    type Output = GaussQ;
    fn mul(self, rhs: GaussQ) -> GaussQ {
        &self * &rhs
    }
}

impl<'a> Mul<&'a GaussQ> for &'a GaussQ {
    type Output = GaussQ;
    fn mul(self, rhs: &GaussQ) -> GaussQ {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussQ::real(&self.re * &rhs.re);
        }
        GaussQ {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl fmt::Display for GaussQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "({} {} {}i)", self.re, sign, self.im.abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(GaussQ::i() * GaussQ::i(), GaussQ::int(-1));
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::new(BigInt::from(10).pow(400), BigInt::from(10).pow(399) * 4);
        assert!((rat_to_f64(&big) - 2.5).abs() < 1e-15);
    }
}
