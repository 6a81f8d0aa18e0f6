//! Generic numerical building blocks.

pub mod ode;
pub mod quadrature;
pub mod roots;
pub mod sum;
