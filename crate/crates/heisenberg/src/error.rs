use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeisenbergError {
    #[error("dilation parameter must be positive, got {0}")]
    NonPositiveDilation(f64),
    #[error("multi-index must have length 3, got {0}")]
    BadMultiIndex(usize),
    #[error("degree {0} outside the integrability window (-4, 0)")]
    DegreeWindow(f64),
    #[error("symbol is not homogeneous of degree {degree}: relative defect {defect:.3e} at {point:?}")]
    NotHomogeneous { degree: f64, defect: f64, point: [f64; 3] },
    #[error("expression parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("grid convergence failure: relative change {0:.3e} between n and 2n")]
    GridConvergence(f64),
    #[error("perturbation support meets the reference covector")]
    SupportOverlap,
    #[error("lambda must be {0}")]
    BadLambda(&'static str),
    #[error("iteration did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("invalid grid: {0}")]
    BadGrid(String),
}
