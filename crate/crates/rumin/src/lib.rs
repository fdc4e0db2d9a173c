//! The Rumin complex of the standard contact structure on S³ = SU(2),
//! block-diagonalized over irreducible representations: the frame and its
//! blocks, the horizontal differential `d_b`, the complex
//! `d₀, D₁, d₂`, its Laplacians, their spectra and their complex powers.

pub mod complex;
pub mod error;
pub mod forms;
pub mod power;
pub mod spectrum;
pub mod su2;

pub use complex::{LaplacianBlock, LaplacianConvention, RuminBlock, Slot};
pub use error::RuminError;
pub use su2::{IrrepBlock, Su2Frame};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
