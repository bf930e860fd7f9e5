//! Exact computations with the mod-p Steenrod algebra, truncated unstable
//! modules and strict polynomial functors, together with the comparison of
//! Hom spaces under evaluation on `F(1)`.

pub mod descriptor;
pub mod error;
pub mod fp;
pub mod hai_bridge;
pub mod padic_comb;
pub mod steenrod;
pub mod strictpoly;
pub mod unstable;
pub mod verify;

pub use error::{Error, Result};
pub use fp::{FpMatrix, Prime};
