//! Heisenberg calculus on the three-dimensional Heisenberg group: anisotropic
//! dilations and gauge, homogeneous symbol expressions, quantization of
//! polynomial symbols, the group-convolution star product, and probes of its
//! failure to be microlocal.

pub mod error;
pub mod expr;
pub mod frame;
pub mod group;
pub mod inverse;
pub mod kernel;
pub mod probes;
pub mod quantize;
pub mod star;

pub use error::HeisenbergError;
pub use expr::{Expr, HHomogeneousSymbol};
pub use group::{dilate, hnorm, weighted_order, GroupLaw};
pub use star::{SliceGrid, StarEngine};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
