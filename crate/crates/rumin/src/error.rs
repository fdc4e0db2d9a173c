use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuminError {
    #[error("bracket constant must be positive, got {0}")]
    BadBracket(f64),
    #[error("complex property violated at level {level}: defect {defect:.3e}")]
    NotAComplex { level: usize, defect: f64 },
    #[error("{what} is not Hermitian at level {level}: defect {defect:.3e}")]
    NotHermitian { what: &'static str, level: usize, defect: f64 },
    #[error("negative eigenvalue {value:.3e} in slot {slot} at level {level}")]
    NegativeEigenvalue { slot: String, level: usize, value: f64 },
    #[error("unknown slot {0:?}; expected 0, 11, 12 or 2")]
    UnknownSlot(String),
    #[error("level bound {0} too small; need at least {1}")]
    LevelTooSmall(usize, usize),
}
