//! Quadrature, radial reduction, suprema and Stieltjes integration on `(0, ∞)`.

pub mod quadrature;
pub mod radial;
pub mod stieltjes;
pub mod supremum;
