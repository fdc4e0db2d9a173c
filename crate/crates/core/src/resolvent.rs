//! Pole-order terms `a(x,ξ)·(p_m(x,ξ) − λ)^{−k}` and the graded resolvent
//! expansion built from them.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use crate::gauss::GaussQ;
use crate::poly::Poly;
use crate::symbol::MultiIndex;

/// `numerator · (base − λ)^{−k}` at expansion depth `j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResolventTerm {
    pub j: u32,
    pub k: u32,
    pub numerator: Poly,
}

impl ResolventTerm {
    /// `deg_ξ(numerator) − m·k = −m − j`; vacuous for a zero numerator.
    pub fn bookkeeping_holds(&self, m: u32) -> bool {
        match self.numerator.xi_degree() {
            None => self.numerator.is_zero(),
            Some(deg) => deg as i64 - (m * self.k) as i64 == -(m as i64) - self.j as i64,
        }
    }

    pub fn eval(&self, base: &Poly, x: &[f64], xi: &[f64], lambda: Complex64) -> Complex64 {
        let pm = base.eval(x, xi);
        self.numerator.eval(x, xi) * (pm - lambda).powi(-(self.k as i32))
    }
}

/// `Σ_k a_k (base − λ)^{−k}` with `k ≥ 0`, merged by pole order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoleSum {
    dim: usize,
    pub terms: BTreeMap<u32, Poly>,
}

impl PoleSum {
    pub fn zero(dim: usize) -> Self {
        PoleSum {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(k: u32, numerator: Poly) -> Self {
        let mut s = PoleSum::zero(numerator.dim());
        s.add(k, &numerator);
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, k: u32, a: &Poly) {
        if a.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(|| Poly::zero(self.dim));
        *slot = &*slot + a;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_sum(&mut self, other: &PoleSum) {
        for (&k, a) in &other.terms {
            self.add(k, a);
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> PoleSum {
        let mut out = PoleSum::zero(self.dim);
        for (&k, a) in &self.terms {
            out.add(k, &(a * p));
        }
        out
    }

    pub fn scale(&self, c: &GaussQ) -> PoleSum {
        let mut out = PoleSum::zero(self.dim);
        for (&k, a) in &self.terms {
            out.add(k, &a.scale(c));
        }
        out
    }

    /// Multiply by `(base − λ)^{−1}`.
    pub fn raise_pole(&self) -> PoleSum {
        PoleSum {
            dim: self.dim,
            terms: self.terms.iter().map(|(&k, a)| (k + 1, a.clone())).collect(),
        }
    }

    /// Multiply by `(base − λ)`; a pole of order zero becomes
    /// `a·base − λ·a`, which is outside the class, so callers only apply
    /// this to sums without a `k = 0` entry.
    pub fn lower_pole(&self) -> PoleSum {
        assert!(!self.terms.contains_key(&0), "lower_pole on a polynomial part");
        PoleSum {
            dim: self.dim,
            terms: self.terms.iter().map(|(&k, a)| (k - 1, a.clone())).collect(),
        }
    }

    /// `∂/∂v` where `v` indexes the combined `(x, ξ)` variables.
    fn diff_var(&self, var: usize, base: &Poly) -> PoleSum {
        let dbase = base.diff(var);
        let mut out = PoleSum::zero(self.dim);
        for (&k, a) in &self.terms {
            out.add(k, &a.diff(var));
            if k > 0 && !dbase.is_zero() {
                // ∂(base − λ)^{−k} = −k (base − λ)^{−k−1} ∂base
                out.add(k + 1, &(a * &dbase).scale(&GaussQ::int(-(k as i64))));
            }
        }
        out
    }

    pub fn diff_xi(&self, alpha: &[u32], base: &Poly) -> PoleSum {
        let mut out = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.diff_var(self.dim + i, base);
            }
        }
        out
    }

    /// `D_x^α = (−i∂_x)^α`.
    pub fn diff_x(&self, alpha: &[u32], base: &Poly) -> PoleSum {
        let mut out = self.clone();
        let minus_i = -GaussQ::i();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                out = out.diff_var(i, base).scale(&minus_i);
            }
        }
        out
    }

    pub fn to_terms(&self, j: u32) -> Vec<ResolventTerm> {
        self.terms
            .iter()
            .map(|(&k, a)| ResolventTerm {
                j,
                k,
                numerator: a.clone(),
            })
            .collect()
    }

    pub fn eval(&self, base: &Poly, x: &[f64], xi: &[f64], lambda: Complex64) -> Complex64 {
        let w = base.eval(x, xi) - lambda;
        self.terms
            .iter()
            .map(|(&k, a)| a.eval(x, xi) * w.powi(-(k as i32)))
            .fold(Complex64::zero(), |s, v| s + v)
    }
}

/// `∂_ξ^α` of a single term; the result stays in the term class with depth
/// `j + |α|`.
pub fn diff_xi(term: &ResolventTerm, alpha: &MultiIndex, base: &Poly) -> Vec<ResolventTerm> {
    PoleSum::single(term.k, term.numerator.clone())
        .diff_xi(&alpha.0, base)
        .to_terms(term.j + alpha.order())
}

/// `D_x^α` of a single term; depth is unchanged.
pub fn diff_x(term: &ResolventTerm, alpha: &MultiIndex, base: &Poly) -> Vec<ResolventTerm> {
    PoleSum::single(term.k, term.numerator.clone())
        .diff_x(&alpha.0, base)
        .to_terms(term.j)
}

/// The graded family `q_{−m−j}`, `j = 0..=depth`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResolventExpansion {
    pub order: u32,
    pub base: Poly,
    pub parts: Vec<PoleSum>,
}

impl ResolventExpansion {
    pub fn depth(&self) -> usize {
        self.parts.len().saturating_sub(1)
    }

    pub fn terms(&self, j: usize) -> Vec<ResolventTerm> {
        self.parts[j].to_terms(j as u32)
    }

    pub fn all_terms(&self) -> Vec<ResolventTerm> {
        (0..self.parts.len()).flat_map(|j| self.terms(j)).collect()
    }

    /// The leading entry is exactly `1·(p_m − λ)^{−1}`.
    pub fn leading_is_canonical(&self) -> bool {
        self.parts
            .first()
            .is_some_and(|q| *q == PoleSum::single(1, Poly::one(self.base.dim())))
    }

    pub fn eval_part(&self, j: usize, x: &[f64], xi: &[f64], lambda: Complex64) -> Complex64 {
        self.parts[j].eval(&self.base, x, xi, lambda)
    }

    pub fn term_count(&self) -> usize {
        self.parts.iter().map(|p| p.terms.len()).sum()
    }
}

/// `1/α!` as a Gaussian rational.
pub fn inv_factorial(alpha: &MultiIndex) -> GaussQ {
    let f = alpha.factorial();
    GaussQ::real(num_rational::BigRational::new(1.into(), f))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::rat_int;

    fn int(n: i64) -> GaussQ {
        GaussQ::real(rat_int(n))
    }

    fn xi2() -> Poly {
        Poly::xi(1, 0).pow(2)
    }

    fn unit(k: u32) -> ResolventTerm {
        ResolventTerm {
            j: 0,
            k,
            numerator: Poly::one(1),
        }
    }

    #[test]
    fn first_xi_derivative() {
        let out = diff_xi(&unit(1), &MultiIndex(vec![1]), &xi2());
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].k, 2);
        assert_eq!(out[0].j, 1);
        assert_eq!(out[0].numerator, Poly::xi(1, 0).scale(&int(-2)));
    }

    #[test]
    fn zeroth_derivative_is_identity() {
        let t = unit(3);
        assert_eq!(diff_xi(&t, &MultiIndex(vec![0]), &xi2()), vec![t.clone()]);
        assert_eq!(diff_x(&t, &MultiIndex(vec![0]), &xi2()), vec![t]);
    }

    #[test]
    fn second_xi_derivative() {
        let out = diff_xi(&unit(1), &MultiIndex(vec![2]), &xi2());
        let by_k: BTreeMap<u32, Poly> = out.into_iter().map(|t| (t.k, t.numerator)).collect();
        assert_eq!(by_k[&2], Poly::one(1).scale(&int(-2)));
        assert_eq!(by_k[&3], xi2().scale(&int(8)));
    }

    #[test]
    fn x_derivative_cases() {
        // x-independent term
        assert!(diff_x(&unit(1), &MultiIndex(vec![1]), &xi2()).is_empty());
        // D_x x₁ = −i
        let t = ResolventTerm {
            j: 0,
            k: 1,
            numerator: Poly::x(1, 0),
        };
        let out = diff_x(&t, &MultiIndex(vec![1]), &xi2());
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].numerator, Poly::one(1).scale(&-GaussQ::i()));
        // variable base (1 + x²)ξ²
        let base = &xi2() + &(&Poly::x(1, 0).pow(2) * &xi2());
        let out = diff_x(&unit(1), &MultiIndex(vec![1]), &base);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].k, 2);
        assert_eq!(out[0].numerator, (&Poly::x(1, 0) * &xi2()).scale(&GaussQ::new(rat_int(0), rat_int(2))));
    }
}
