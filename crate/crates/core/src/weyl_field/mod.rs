//! Generalized free field on a light ray in a KMS state.
//!
//! Smearing functions are sampled on uniform grids. Quadratic forms are
//! evaluated in momentum space with `f~(p) = (1/2pi) int exp(-ipx) f(x) dx`;
//! the modular and positive-generator groups act on smearing functions by
//! explicit reparametrizations.

mod kernels;
mod position;
mod test_function;
mod transform;

pub use kernels::{
    omega2, omega2_damped, symplectic_k, two_point_momentum, two_point_position, weyl_inner, Spectrum,
    StateNormalization, TAIL_TOLERANCE,
};
pub use position::{
    calibrate_position_kernel, kms_closed_form, kms_direct, omega2_position, smeared_kms_forms, KmsForms,
    KmsOrder,
};
pub use test_function::{TestFunction, TestFunctionFile};
pub use transform::{
    gamma_transform, higher_transform, l_map, localization_defect, modular_transform, Transform,
};

use serde::{Deserialize, Serialize};

/// Scaling index `n`: the field with `Q(p^2) = p^(2n)`, scaling dimension `n + 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub n: u32,
}

impl FieldSpec {
    pub fn new(n: u32) -> Self {
        FieldSpec { n }
    }

    /// `p Q(p^2) = p^(2n+1)`.
    pub fn symbol(&self, p: f64) -> f64 {
        p.powi(2 * self.n as i32 + 1)
    }
}
