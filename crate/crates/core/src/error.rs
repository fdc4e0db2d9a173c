use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error("chart dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("part {index} is not xi-homogeneous of degree {expected}")]
    NotHomogeneous { index: usize, expected: i64 },
    #[error("leading part is identically zero")]
    ZeroLeadingPart,
    #[error("operator is not elliptic on the chart box: {0}")]
    NotElliptic(String),
    #[error("point (xi, lambda) = (0, 0) is excluded from every conic region")]
    ConicOrigin,
    #[error("sector must satisfy 0 < theta < pi < theta' < 2pi, got ({0}, {1})")]
    BadSector(f64, f64),
    #[error("contour needs r > 0 and at least {min} nodes per segment, got r = {r}, n = {n}")]
    BadContour { r: f64, n: usize, min: usize },
    #[error("pole order must be at least 1")]
    ZeroPoleOrder,
    #[error("integer power reduction needs Re(s) < k (s = {s}, k = {k})")]
    PowerPrecondition { s: String, k: u32 },
    #[error("exponents {0} and {1} do not differ by an integer")]
    IncommensurateExponents(String, String),
    #[error("malformed symbol document: {0}")]
    Parse(String),
}
