//! Numerical evaluation of the characterizing functionals for embeddings
//! between weighted Lebesgue spaces and weighted local Morrey-type spaces,
//! together with brute-force lower bounds on the corresponding best constants.

pub mod embeddings;
pub mod error;
pub mod exponent;
pub mod extreal;
pub mod hardy;
pub mod integration;
pub mod norms;
pub mod oracle;
pub mod weights;

pub use error::{MorreyError, Result};
pub use extreal::{conjugate_exponent, ExtReal};
