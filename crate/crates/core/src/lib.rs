//! Exact symbol calculus for positive elliptic differential operators with
//! polynomial coefficients: the parameter-dependent resolvent parametrix and
//! the symbols of complex powers obtained from it by contour integration.
//!
//! All symbol-level arithmetic is over Gaussian rationals. Floating point only
//! enters when terms are evaluated at sample points or when contour
//! quadrature is used as an independent check.

pub mod battery;
pub mod error;
pub mod gauss;
pub mod oracle;
pub mod poly;
pub mod power;
pub mod region;
pub mod resolvent;
pub mod seeley;
pub mod spoly;
pub mod symbol;

pub use error::SymbolError;
pub use gauss::{rat, rat_int, GaussQ, Rational};
pub use poly::Poly;
pub use power::{part_difference, PowerBasisTerm, PowerSymbolExpansion};
pub use region::{contour_nodes, ConicRegion, Contour, ContourNode, QuadratureRule, Sector};
pub use resolvent::{diff_x, diff_xi, PoleSum, ResolventExpansion, ResolventTerm};
pub use seeley::{
    complex_power_terms, integer_power_reduction, resolvent_terms, residue_power, rho_bound, verify_parametrix,
    ChartBox,
};
pub use symbol::{ClassicalSymbol, MultiIndex};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
