//! The Rumin complex `Λ⁰ → Λ¹_H → θ∧Λ¹_H → θ∧Λ²_H` and its Laplacians on
//! one block. Slots have ranks 1, 2, 2, 1 times the block dimension.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::RuminError;
use crate::forms::{db_blocks, exterior_derivative, sub_blocks, DbBlocks, THETA_E1, THETA_E2, VOLUME};
use crate::su2::{CMat, IrrepBlock, Su2Frame};

pub const COMPLEX_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct RuminBlock {
    pub level: usize,
    /// `d₀ = d_b : Λ⁰ → Λ¹_H`.
    pub d0: CMat,
    /// `D₁ = L_{X₀} + d_b ε(dθ)⁻¹ d_b : Λ¹_H → Λ¹_H ≅ θ∧Λ¹_H`.
    pub d1: CMat,
    /// `d₂ : θ∧Λ¹_H → θ∧Λ²_H`, the restriction of `d`.
    pub d2: CMat,
    pub db: DbBlocks,
}

impl RuminBlock {
    pub fn new(frame: &Su2Frame, level: usize) -> Result<Self, RuminError> {
        let db = db_blocks(frame, level);
        let block = IrrepBlock::new(frame, level);
        let n = block.dim();
        let d = exterior_derivative(frame, &block);
        let inv = Complex64::new(1.0 / db.dtheta, 0.0);
        let d1 = &db.lie1 + &db.db0 * inv * &db.db1;
        let d2 = sub_blocks(&d, n, &[VOLUME], &[THETA_E1, THETA_E2]);
        let b = RuminBlock {
            level,
            d0: db.db0.clone(),
            d1,
            d2,
            db,
        };
        let defect = b.complex_defect();
        if defect > COMPLEX_TOL {
            return Err(RuminError::NotAComplex { level, defect });
        }
        Ok(b)
    }

    /// `max(‖D₁d₀‖ / ‖D₁‖‖d₀‖, ‖d₂D₁‖ / ‖d₂‖‖D₁‖)`, Frobenius norms.
    pub fn complex_defect(&self) -> f64 {
        let rel = |p: CMat, a: &CMat, b: &CMat| {
            let s = a.norm() * b.norm();
            if s == 0.0 {
                p.norm()
            } else {
                p.norm() / s
            }
        };
        let first = rel(&self.d1 * &self.d0, &self.d1, &self.d0);
        let second = rel(&self.d2 * &self.d1, &self.d2, &self.d1);
        first.max(second)
    }

    /// The `d_b ε(dθ)⁻¹ d_b` part of `D₁`.
    pub fn second_order_part(&self) -> CMat {
        &self.d1 - &self.db.lie1
    }
}

/// Coefficients of the order-2 Laplacians `Δ₀ = a₀ d₀*d₀`, `Δ₂ = a₂ d₂d₂*`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplacianConvention {
    pub a0: f64,
    pub a2: f64,
}

impl Default for LaplacianConvention {
    /// `a₀ = a₂ = 2`: the weight `n − k + 1` at `k = 0` with `n = 1`, and
    /// its mirror image in top degree.
    fn default() -> Self {
        LaplacianConvention { a0: 2.0, a2: 2.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    Zero,
    OneOne,
    OneTwo,
    Two,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::Zero, Slot::OneOne, Slot::OneTwo, Slot::Two];

    pub fn parse(s: &str) -> Result<Slot, RuminError> {
        match s.trim() {
            "0" => Ok(Slot::Zero),
            "11" => Ok(Slot::OneOne),
            "12" => Ok(Slot::OneTwo),
            "2" => Ok(Slot::Two),
            other => Err(RuminError::UnknownSlot(other.to_string())),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Slot::Zero => "0",
            Slot::OneOne => "11",
            Slot::OneTwo => "12",
            Slot::Two => "2",
        }
    }

    /// Differential order of the Laplacian.
    pub fn order(&self) -> u32 {
        match self {
            Slot::Zero | Slot::Two => 2,
            _ => 4,
        }
    }

    /// Rank of the slot bundle.
    pub fn rank(&self) -> usize {
        match self {
            Slot::Zero | Slot::Two => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianBlock {
    pub level: usize,
    pub delta0: CMat,
    pub delta11: CMat,
    pub delta12: CMat,
    pub delta2: CMat,
}

fn hermitian_defect(m: &CMat) -> f64 {
    let s = m.norm();
    if s == 0.0 {
        0.0
    } else {
        (m - m.adjoint()).norm() / s
    }
}

impl LaplacianBlock {
    pub fn new(r: &RuminBlock, conv: LaplacianConvention) -> Result<Self, RuminError> {
        let (d0, d1, d2) = (&r.d0, &r.d1, &r.d2);
        let a = d0 * d0.adjoint();
        let b = d2.adjoint() * d2;
        let l = LaplacianBlock {
            level: r.level,
            delta0: d0.adjoint() * d0 * Complex64::new(conv.a0, 0.0),
            delta11: &a * &a + d1.adjoint() * d1,
            delta12: d1 * d1.adjoint() + &b * &b,
            delta2: d2 * d2.adjoint() * Complex64::new(conv.a2, 0.0),
        };
        for (what, m) in [("Δ₀", &l.delta0), ("Δ₁₁", &l.delta11), ("Δ₁₂", &l.delta12), ("Δ₂", &l.delta2)] {
            let defect = hermitian_defect(m);
            if defect > 1e-12 {
                return Err(RuminError::NotHermitian {
                    what,
                    level: r.level,
                    defect,
                });
            }
        }
        Ok(l)
    }

    pub fn slot(&self, s: Slot) -> &CMat {
        match s {
            Slot::Zero => &self.delta0,
            Slot::OneOne => &self.delta11,
            Slot::OneTwo => &self.delta12,
            Slot::Two => &self.delta2,
        }
    }
}

/// Numerical rank by singular values above `tol · σ_max`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// `(dim ker Δ, rank of incoming d, rank of outgoing d*)` per slot; these
/// sum to the slot dimension when the Hodge decomposition holds.
pub fn hodge_dimensions(r: &RuminBlock, l: &LaplacianBlock, slot: Slot) -> (usize, usize, usize) {
    let tol = 1e-9;
    let kernel = |m: &CMat| m.nrows() - rank(m, tol);
    match slot {
        Slot::Zero => (kernel(&l.delta0), 0, rank(&r.d0, tol)),
        Slot::OneOne => (kernel(&l.delta11), rank(&r.d0, tol), rank(&r.d1, tol)),
        Slot::OneTwo => (kernel(&l.delta12), rank(&r.d1, tol), rank(&r.d2, tol)),
        Slot::Two => (kernel(&l.delta2), rank(&r.d2, tol), 0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rumin_complex_on_small_blocks() {
        for c in [1.0, 2.0] {
            let f = Su2Frame::new(c).unwrap();
            for level in 0..6 {
                let r = RuminBlock::new(&f, level).unwrap();
                assert!(r.complex_defect() < 1e-13);
            }
        }
    }

    #[test]
    fn second_order_part_vanishes_on_constants() {
        let f = Su2Frame::new(2.0).unwrap();
        let r = RuminBlock::new(&f, 0).unwrap();
        assert_eq!(r.second_order_part().camax(), 0.0);
        assert!(r.d1.camax() > 0.0);
    }

    #[test]
    fn slot_parsing() {
        assert_eq!(Slot::parse("11").unwrap(), Slot::OneOne);
        assert!(Slot::parse("3").is_err());
        assert_eq!(Slot::OneTwo.order(), 4);
    }
}
