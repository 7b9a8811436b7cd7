//! Thermal modular flows.
//!
//! Numerical machinery for the modular groups of half-line, light-cone and
//! wedge algebras in a KMS state at inverse temperature `beta`:
//!
//! * [`axb_group`]: the two-dimensional affine ("ax+b") group generated by
//!   time translations and the modular group, with its one-parameter
//!   subgroups and exchange relations.
//! * [`flow_maps`]: the modular and positive-generator point flows on a light
//!   ray, computed through the linearizing chart `xi`.
//! * [`cone_wedge`]: the factorized 2D flows of the forward light cone and
//!   the right wedge, flow lines, time calibrations and figure emission.
//! * [`weyl_field`]: test functions, the symplectic form and KMS two-point
//!   function of a generalized free field, and the explicit modular actions
//!   on smearing functions.
//! * [`verify`]: numerical checks of the operator-level statements inside the
//!   Weyl model (matrix-element bounds, convergence rates, KMS boundary
//!   values).
//! * [`cli`]: configuration and subcommands behind the `mfl` binary.

pub mod axb_group;
pub mod cli;
pub mod cone_wedge;
mod error;
pub mod flow_maps;
pub mod numerics;
pub mod verify;
pub mod weyl_field;

pub use error::{Error, Result};
pub use flow_maps::{Beta, RayDirection, ThermalContext};

/// `2π`.
pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
