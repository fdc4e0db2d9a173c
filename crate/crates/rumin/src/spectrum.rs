//! Block spectra, harmonic dimensions and Weyl counting exponents.

use nalgebra::DVector;
use serde::Serialize;

use crate::complex::{LaplacianBlock, LaplacianConvention, RuminBlock, Slot};
use crate::error::RuminError;
use crate::su2::{CMat, Su2Frame};

/// Eigenvalues below `KERNEL_TOL · max(1, ‖Δ‖)` count as kernel.
pub const KERNEL_TOL: f64 = 1e-9;
pub const NEGATIVE_TOL: f64 = 1e-10;
pub const MIN_LMAX: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub slot: &'static str,
    pub level: usize,
    pub index: usize,
    pub eigenvalue: f64,
    /// Peter–Weyl multiplicity `ℓ + 1`.
    pub multiplicity: usize,
}

/// Sorted eigenvalues and orthonormal eigenvectors of a Hermitian block.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let e = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..e.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = CMat::from_columns(&order.iter().map(|&i| e.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (vals, vecs)
}

pub fn laplacian_block(frame: &Su2Frame, conv: LaplacianConvention, level: usize) -> Result<LaplacianBlock, RuminError> {
    LaplacianBlock::new(&RuminBlock::new(frame, level)?, conv)
}

/// Eigenvalues of one slot on one block, checked for nonnegativity.
pub fn block_eigenvalues(l: &LaplacianBlock, slot: Slot) -> Result<Vec<f64>, RuminError> {
    let m = l.slot(slot);
    let vals = hermitian_eigen(m).0;
    let scale = m.norm().max(1.0);
    if let Some(&v) = vals.iter().find(|&&v| v < -NEGATIVE_TOL * scale) {
        return Err(RuminError::NegativeEigenvalue {
            slot: slot.label().to_string(),
            level: l.level,
            value: v,
        });
    }
    Ok(vals)
}

pub fn kernel_threshold(m: &CMat) -> f64 {
    KERNEL_TOL * m.norm().max(1.0)
}

/// Every eigenvalue of the slot Laplacian on levels `0..=lmax`, sorted by
/// value (ties by level and index).
pub fn spectrum(frame: &Su2Frame, conv: LaplacianConvention, slot: Slot, lmax: usize) -> Result<Vec<SpectrumEntry>, RuminError> {
    if lmax < MIN_LMAX {
        return Err(RuminError::LevelTooSmall(lmax, MIN_LMAX));
    }
    let mut out = Vec::new();
    for level in 0..=lmax {
        let l = laplacian_block(frame, conv, level)?;
        for (index, eigenvalue) in block_eigenvalues(&l, slot)?.into_iter().enumerate() {
            out.push(SpectrumEntry {
                slot: slot.label(),
                level,
                index,
                eigenvalue,
                multiplicity: level + 1,
            });
        }
    }
    out.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue).then(a.level.cmp(&b.level)).then(a.index.cmp(&b.index)));
    Ok(out)
}

/// Total multiplicity of the kernel of each slot over `0..=lmax`, in the
/// order `(Δ₀, Δ₁₁, Δ₁₂, Δ₂)`.
pub fn harmonic_dimensions(frame: &Su2Frame, conv: LaplacianConvention, lmax: usize) -> Result<[usize; 4], RuminError> {
    let mut dims = [0usize; 4];
    for level in 0..=lmax {
        let l = laplacian_block(frame, conv, level)?;
        for (k, slot) in Slot::ALL.iter().enumerate() {
            let m = l.slot(*slot);
            let tol = kernel_threshold(m);
            let zeros = block_eigenvalues(&l, *slot)?.iter().filter(|v| v.abs() <= tol).count();
            dims[k] += zeros * (level + 1);
        }
    }
    Ok(dims)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylFit {
    pub slot: &'static str,
    pub exponent: f64,
    /// The counting function is complete below this value.
    pub lambda_complete: f64,
    pub window: (f64, f64),
    pub samples: Vec<(f64, f64)>,
}

pub const WEYL_POINTS: usize = 30;
/// The fit window is `[λ_c / WEYL_WINDOW, λ_c]`.
pub const WEYL_WINDOW: f64 = 8.0;

/// Least-squares slope of `log N(λ)` against `log λ`, where `N` counts
/// eigenvalues with multiplicity. `N` is exact up to the smallest
/// eigenvalue found on the levels just above `lmax`.
pub fn weyl_exponent(frame: &Su2Frame, conv: LaplacianConvention, slot: Slot, lmax: usize) -> Result<WeylFit, RuminError> {
    let spec = spectrum(frame, conv, slot, lmax)?;
    let mut lambda_complete = f64::INFINITY;
    for level in lmax + 1..=lmax + 3 {
        let l = laplacian_block(frame, conv, level)?;
        let v = block_eigenvalues(&l, slot)?;
        lambda_complete = lambda_complete.min(v[0]);
    }
    let lo = lambda_complete / WEYL_WINDOW;
    let ratio = (lambda_complete / lo).powf(1.0 / (WEYL_POINTS - 1) as f64);
    let samples: Vec<(f64, f64)> = (0..WEYL_POINTS)
        .map(|k| {
            // stay strictly below λ_c so that N is complete
            let lam = lo * ratio.powi(k as i32) * (1.0 - 1e-12);
            let count: usize = spec.iter().filter(|e| e.eigenvalue <= lam).map(|e| e.multiplicity).sum();
            (lam, count as f64)
        })
        .collect();
    let xs = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.0.ln()));
    let ys = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1.ln()));
    let (mx, my) = (xs.mean(), ys.mean());
    let sxy: f64 = xs.iter().zip(ys.iter()).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(WeylFit {
        slot: slot.label(),
        exponent: sxy / sxx,
        lambda_complete,
        window: (lo, lambda_complete),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sublaplacian_eigenvalues_in_closed_form() {
        // Δ₀ = 2(J₁² + J₂²) = 2(j(j+1) − m²)
        let f = Su2Frame::new(2.0).unwrap();
        let l = laplacian_block(&f, LaplacianConvention::default(), 3).unwrap();
        let v = block_eigenvalues(&l, Slot::Zero).unwrap();
        let j: f64 = 1.5;
        let mut exact: Vec<f64> = [1.5f64, 0.5, -0.5, -1.5].iter().map(|m| 2.0 * (j * (j + 1.0) - m * m)).collect();
        exact.sort_by(f64::total_cmp);
        for (a, b) in v.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn lmax_lower_bound() {
        let f = Su2Frame::new(2.0).unwrap();
        assert!(spectrum(&f, LaplacianConvention::default(), Slot::Zero, 3).is_err());
    }
}
