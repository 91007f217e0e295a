//! Numerical building blocks: quadrature, compensated summation, special
//! functions and monotone interpolation.

pub mod interp;
pub mod quadrature;
pub mod special;
pub mod summation;

pub use interp::MonotoneCubic;
pub use quadrature::{Estimate, GaussLegendre};
pub use summation::NeumaierSum;
