//! Reference computations used to check `cdr-core`.
//!
//! Nothing here goes through the operator, product-expansion or localization
//! code: fiber states are enumerated mode by mode and cohomology of line
//! bundles on the projective line is read off Čech monomial bases.

pub mod genus;
pub mod modes;
pub mod p1;

pub use cdr_core::arith::Rat;
