//! Classical polyhomogeneous symbols of differential operators with polynomial
//! coefficients, and their JSON document form.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::SymbolError;
use crate::gauss::{GaussQ, Rational};
use crate::poly::Poly;

/// A multi-index `α ∈ ℕ^d`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `α! = Π αᵢ!`, exact.
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .map(|&a| (1..=a as u64).map(BigInt::from).product::<BigInt>())
            .product()
    }

    /// All multi-indices of length `d` with `|α| = n`, in lexicographic order.
    pub fn all_of_order(d: usize, n: u32) -> Vec<MultiIndex> {
        fn rec(d: usize, n: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == d {
                prefix.push(n);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=n).rev() {
                prefix.push(a);
                rec(d, n - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if d == 0 {
            if n == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(d, n, &mut Vec::new(), &mut out);
        out
    }
}

/// `p = Σ_j p_{m-j}` with part `j` ξ-homogeneous of degree `m - j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassicalSymbol {
    dim: usize,
    order: u32,
    parts: Vec<Poly>,
}

impl ClassicalSymbol {
    /// `parts[j]` must be ξ-homogeneous of degree `order - j`; missing trailing
    /// parts are zero.
    pub fn new(dim: usize, order: u32, parts: Vec<Poly>) -> Result<Self, SymbolError> {
        if parts.len() > order as usize + 1 {
            return Err(SymbolError::NotHomogeneous {
                index: parts.len() - 1,
                expected: order as i64 - parts.len() as i64 + 1,
            });
        }
        for (j, p) in parts.iter().enumerate() {
            if p.dim() != dim {
                return Err(SymbolError::DimensionMismatch(dim, p.dim()));
            }
            if !p.is_xi_homogeneous(order - j as u32) {
                return Err(SymbolError::NotHomogeneous {
                    index: j,
                    expected: order as i64 - j as i64,
                });
            }
        }
        if parts.first().map_or(true, Poly::is_zero) {
            return Err(SymbolError::ZeroLeadingPart);
        }
        let mut parts = parts;
        parts.resize(order as usize + 1, Poly::zero(dim));
        Ok(ClassicalSymbol { dim, order, parts })
    }

    /// Split a full polynomial symbol into its homogeneous parts; the order is
    /// the top ξ-degree.
    pub fn from_full(full: &Poly) -> Result<Self, SymbolError> {
        let order = full.max_xi_degree().ok_or(SymbolError::ZeroLeadingPart)?;
        let comps = full.xi_components();
        let parts = (0..=order)
            .map(|j| comps.get(&(order - j)).cloned().unwrap_or_else(|| Poly::zero(full.dim())))
            .collect();
        ClassicalSymbol::new(full.dim(), order, parts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `p_{m-k}`, zero beyond the stored parts.
    pub fn part(&self, k: usize) -> Poly {
        self.parts.get(k).cloned().unwrap_or_else(|| Poly::zero(self.dim))
    }

    pub fn parts(&self) -> &[Poly] {
        &self.parts
    }

    pub fn principal(&self) -> &Poly {
        &self.parts[0]
    }

    pub fn full(&self) -> Poly {
        self.parts.iter().fold(Poly::zero(self.dim), |acc, p| &acc + p)
    }

    pub fn is_constant_coefficient(&self) -> bool {
        self.parts.iter().all(|p| !p.depends_on_x())
    }

    pub fn to_document(&self) -> SymbolDocument {
        SymbolDocument {
            vars: self.dim,
            order: self.order,
            parts: self
                .parts
                .iter()
                .enumerate()
                .map(|(j, p)| PartDocument {
                    degree: self.order as i64 - j as i64,
                    monomials: p
                        .terms()
                        .map(|(e, c)| MonomialDocument {
                            exp: e.clone(),
                            coef: [
                                c.re.numer().to_string(),
                                c.re.denom().to_string(),
                                c.im.numer().to_string(),
                                c.im.denom().to_string(),
                            ],
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &SymbolDocument) -> Result<Self, SymbolError> {
        let d = doc.vars;
        let mut parts = vec![Poly::zero(d); doc.order as usize + 1];
        for part in &doc.parts {
            let j = doc.order as i64 - part.degree;
            if j < 0 || j > doc.order as i64 {
                return Err(SymbolError::Parse(format!("part degree {} out of range", part.degree)));
            }
            for m in &part.monomials {
                if m.exp.len() != 2 * d {
                    return Err(SymbolError::Parse(format!(
                        "exponent vector of length {} for {} variables",
                        m.exp.len(),
                        d
                    )));
                }
                let num = |s: &str| {
                    BigInt::from_str(s).map_err(|e| SymbolError::Parse(format!("{s:?}: {e}")))
                };
                let (rn, rd, inn, id) = (
                    num(&m.coef[0])?,
                    num(&m.coef[1])?,
                    num(&m.coef[2])?,
                    num(&m.coef[3])?,
                );
                if rd == BigInt::from(0) || id == BigInt::from(0) {
                    return Err(SymbolError::Parse("zero denominator".into()));
                }
                let c = GaussQ::new(Rational::new(rn, rd), Rational::new(inn, id));
                parts[j as usize].add_term(m.exp.clone(), c);
            }
        }
        ClassicalSymbol::new(d, doc.order, parts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("symbol document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SymbolError> {
        let doc: SymbolDocument =
            serde_json::from_str(text).map_err(|e| SymbolError::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolDocument {
    pub vars: usize,
    pub order: u32,
    pub parts: Vec<PartDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartDocument {
    pub degree: i64,
    pub monomials: Vec<MonomialDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialDocument {
    pub exp: Vec<u32>,
    /// `[num, den, inum, iden]` as decimal strings.
    pub coef: [String; 4],
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::rat;

    #[test]
    fn multi_indices_of_order() {
        assert_eq!(MultiIndex::all_of_order(2, 2).len(), 3);
        assert_eq!(MultiIndex::all_of_order(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_of_order(1, 0), vec![MultiIndex(vec![0])]);
    }

    #[test]
    fn factorial_large_order() {
        let a = MultiIndex(vec![16, 16]);
        let f16: BigInt = (1..=16u64).map(BigInt::from).product();
        assert_eq!(a.factorial(), &f16 * &f16);
        assert_eq!(MultiIndex(vec![32]).factorial().to_string(), "263130836933693530167218012160000000");
    }

    #[test]
    fn rejects_inhomogeneous_part() {
        let p = &Poly::xi(1, 0).pow(2) + &Poly::one(1);
        let err = ClassicalSymbol::new(1, 2, vec![p]).unwrap_err();
        assert!(matches!(err, SymbolError::NotHomogeneous { index: 0, .. }));
    }

    #[test]
    fn from_full_splits_degrees() {
        let p = &(&Poly::xi(1, 0).pow(2) + &Poly::xi(1, 0)) + &Poly::constant(1, GaussQ::real(rat(3, 2)));
        let s = ClassicalSymbol::from_full(&p).unwrap();
        assert_eq!(s.order(), 2);
        assert_eq!(s.part(1), Poly::xi(1, 0));
        assert_eq!(s.full(), p);
    }

    #[test]
    fn json_document_round_trip() {
        let lead = &Poly::x(1, 0).pow(2) * &Poly::xi(1, 0).pow(2);
        let lead = &lead + &Poly::xi(1, 0).pow(2);
        let low = Poly::constant(1, GaussQ::new(rat(1, 3), rat(-2, 5)));
        let s = ClassicalSymbol::new(1, 2, vec![lead, Poly::zero(1), low]).unwrap();
        let text = s.to_json();
        assert!(text.contains("\"coef\""));
        assert_eq!(ClassicalSymbol::from_json(&text).unwrap(), s);
    }
}
