//! Left-invariant exterior calculus on one representation block.
//!
//! A form is `Σ_I f_I e^I` with `I ⊂ {0, 1, 2}` a bitmask over the coframe
//! `(θ, e¹, e²)` and `f_I ∈ ℂ^{ℓ+1}`. The full de Rham `d` is assembled
//! from the frame matrices and the structure constants; every horizontal
//! operator is a projection of it.

use num_complex::Complex64;

use crate::su2::{CMat, IrrepBlock, StructureConstants, Su2Frame};

/// Constant-coefficient form: coefficient per bitmask.
pub type ConstForm = [f64; 8];

pub const THETA: usize = 0b001;
pub const E1: usize = 0b010;
pub const E2: usize = 0b100;
pub const E12: usize = E1 | E2;
pub const THETA_E1: usize = THETA | E1;
pub const THETA_E2: usize = THETA | E2;
pub const VOLUME: usize = 0b111;

/// `e^a ∧ e^I = sign · e^{I ∪ a}`, or `None` if `a ∈ I`.
pub fn wedge_basis(a: usize, i: usize) -> Option<(usize, f64)> {
    let bit = 1 << a;
    if i & bit != 0 {
        return None;
    }
    let below = (i & (bit - 1)).count_ones();
    Some((i | bit, if below % 2 == 0 { 1.0 } else { -1.0 }))
}

fn wedge_mask(i: usize, j: usize) -> Option<(usize, f64)> {
    // e^I ∧ e^J by moving the generators of I in from the right
    let mut acc = (j, 1.0);
    for a in (0..3).rev().filter(|a| i & (1 << a) != 0) {
        let (m, s) = wedge_basis(a, acc.0)?;
        acc = (m, acc.1 * s);
    }
    Some(acc)
}

pub fn wedge(u: &ConstForm, v: &ConstForm) -> ConstForm {
    let mut out = [0.0; 8];
    for i in 0..8 {
        for j in 0..8 {
            if u[i] != 0.0 && v[j] != 0.0 {
                if let Some((m, s)) = wedge_mask(i, j) {
                    out[m] += s * u[i] * v[j];
                }
            }
        }
    }
    out
}

fn basis(i: usize) -> ConstForm {
    let mut f = [0.0; 8];
    f[i] = 1.0;
    f
}

/// `de^a = −Σ_{b<c} C^a_{bc} e^b ∧ e^c`.
pub fn d_coframe(k: &StructureConstants, a: usize) -> ConstForm {
    let mut f = [0.0; 8];
    for b in 0..3 {
        for c in b + 1..3 {
            f[(1 << b) | (1 << c)] -= k[a][b][c];
        }
    }
    f
}

/// `d(e^I)` by the Leibniz rule.
pub fn d_basis(k: &StructureConstants, i: usize) -> ConstForm {
    let Some(a) = (0..3).find(|a| i & (1 << a) != 0) else {
        return [0.0; 8];
    };
    let rest = i & !(1 << a);
    let first = wedge(&d_coframe(k, a), &basis(rest));
    let second = wedge(&basis(1 << a), &d_basis(k, rest));
    let mut out = [0.0; 8];
    for m in 0..8 {
        out[m] = first[m] - second[m];
    }
    out
}

/// Matrix of `d` on `Λ* ⊗ ℂ^{ℓ+1}`, blocks ordered by bitmask.
pub fn exterior_derivative(frame: &Su2Frame, block: &IrrepBlock) -> CMat {
    let n = block.dim();
    let k = frame.structure_constants();
    let mut d = CMat::zeros(8 * n, 8 * n);
    for i in 0..8 {
        for a in 0..3 {
            if let Some((j, s)) = wedge_basis(a, i) {
                let mut view = d.view_mut((j * n, i * n), (n, n));
                view += &block.x[a] * Complex64::new(s, 0.0);
            }
        }
        let db = d_basis(&k, i);
        for (j, &v) in db.iter().enumerate() {
            if v != 0.0 {
                for r in 0..n {
                    d[(j * n + r, i * n + r)] += Complex64::new(v, 0.0);
                }
            }
        }
    }
    d
}

/// Rows `to`, columns `from` of a block matrix with `n × n` blocks.
pub fn sub_blocks(m: &CMat, n: usize, to: &[usize], from: &[usize]) -> CMat {
    let mut out = CMat::zeros(to.len() * n, from.len() * n);
    for (r, &t) in to.iter().enumerate() {
        for (c, &f) in from.iter().enumerate() {
            out.view_mut((r * n, c * n), (n, n)).copy_from(&m.view((t * n, f * n), (n, n)));
        }
    }
    out
}

/// The pieces of `d = d_b + θ ∧ L_{X₀}` on horizontal forms.
#[derive(Clone, Debug, PartialEq)]
pub struct DbBlocks {
    pub level: usize,
    /// `d_b : Λ⁰ → Λ¹_H`.
    pub db0: CMat,
    /// `d_b : Λ¹_H → Λ²_H`.
    pub db1: CMat,
    /// `L_{X₀}` on `Λ⁰`.
    pub lie0: CMat,
    /// `L_{X₀}` on `Λ¹_H`.
    pub lie1: CMat,
    /// `ε(dθ) : Λ⁰ → Λ²_H`.
    pub eps: CMat,
    /// Coefficient of `e¹∧e²` in `dθ`.
    pub dtheta: f64,
}

pub fn db_blocks(frame: &Su2Frame, level: usize) -> DbBlocks {
    let block = IrrepBlock::new(frame, level);
    let n = block.dim();
    let d = exterior_derivative(frame, &block);
    let dtheta_form = d_basis(&frame.structure_constants(), THETA);
    let eps_form = wedge(&dtheta_form, &basis(0));
    DbBlocks {
        level,
        db0: sub_blocks(&d, n, &[E1, E2], &[0]),
        db1: sub_blocks(&d, n, &[E12], &[E1, E2]),
        lie0: sub_blocks(&d, n, &[THETA], &[0]),
        // ι_{X₀}(θ ∧ e^a) = e^a
        lie1: sub_blocks(&d, n, &[THETA_E1, THETA_E2], &[E1, E2]),
        eps: CMat::identity(n, n) * Complex64::new(eps_form[E12], 0.0),
        dtheta: dtheta_form[E12],
    }
}

impl DbBlocks {
    /// Largest entry of `d_b² + ε(dθ)L_{X₀}` on functions.
    pub fn defect(&self) -> f64 {
        (&self.db1 * &self.db0 + &self.eps * &self.lie0).camax()
    }

    /// `‖L_{X₀}d_b − d_b L_{X₀}‖` on functions; recorded in reports.
    pub fn lie_commutator(&self) -> f64 {
        (&self.lie1 * &self.db0 - &self.db0 * &self.lie0).norm()
    }

    pub fn scale(&self) -> f64 {
        self.db1.norm() * self.db0.norm() + self.eps.norm() * self.lie0.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_signs() {
        assert_eq!(wedge_basis(1, THETA), Some((THETA_E1, -1.0)));
        assert_eq!(wedge_basis(0, E1), Some((THETA_E1, 1.0)));
        assert_eq!(wedge_basis(2, E2), None);
        let v = wedge(&basis(E1), &basis(THETA_E2));
        assert_eq!(v[VOLUME], -1.0);
    }

    #[test]
    fn d_squared_vanishes() {
        for c in [1.0, 2.0] {
            let f = Su2Frame::new(c).unwrap();
            for level in [0, 1, 3, 6] {
                let b = IrrepBlock::new(&f, level);
                let d = exterior_derivative(&f, &b);
                assert!((&d * &d).camax() < 1e-12 * (1.0 + (level * level) as f64), "c {c} level {level}");
            }
        }
    }

    #[test]
    fn dtheta_is_c_e12() {
        let f = Su2Frame::new(2.0).unwrap();
        let dt = d_basis(&f.structure_constants(), THETA);
        assert_eq!(dt, [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn db_of_constants_vanishes() {
        let f = Su2Frame::new(1.0).unwrap();
        let b = db_blocks(&f, 0);
        assert_eq!(b.db0.camax(), 0.0);
    }
}
