//! Self-gravity of crystalline nanospheres in the Schrödinger–Newton picture.
//!
//! The crate covers the homogeneous-sphere overlap kernel and its atomic and
//! nuclear refinements, discrete lattice pair sums, a variational Gaussian
//! reduction of the centre-of-mass dynamics, radial Choquard eigenstates and
//! a set of closed-form regime estimates. All public quantities are SI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod choquard;
pub mod error;
pub mod gaussian;
pub mod lattice;
pub mod numerics;
pub mod potentials;
pub mod regimes;
pub mod sphere;

pub use error::{Error, Result};
pub use potentials::{ModelVariant, PotentialModel};
pub use sphere::{PhysicalConstants, Regime, RegimeBoundaries, RegimeLabel, SphereSpec};
