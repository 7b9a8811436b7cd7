//! The ax+b group generated by translations and dilations.
//!
//! Elements are stored in the matrix normal form
//!
//! ```text
//! (lambda, tau)  <->  | lambda  tau |      lambda = exp(-2 pi u) > 0
//!                     |   0      1  |
//! ```
//!
//! so composition is the 2x2 matrix product and never exponentiates a
//! parameter. The three distinguished one-parameter subgroups are the
//! modular group of the half-sided algebra (`g_n`), the positive-generator
//! group (`g_pos`) and the modular group of the global algebra, i.e. scaled
//! time translations (`g_m`).

use std::fmt;
use std::ops::Mul;

use crate::{Error, Result, TWO_PI};

/// `|a r|` below which the subgroup shift uses its Taylor expansion.
const SMALL_RATE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroupElement {
    lambda: f64,
    tau: f64,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { lambda: 1.0, tau: 0.0 };

    pub fn new(lambda: f64, tau: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("scale factor must be positive and finite, got {lambda}")));
        }
        if !tau.is_finite() {
            return Err(Error::invalid(format!("translation must be finite, got {tau}")));
        }
        Ok(GroupElement { lambda, tau })
    }

    /// Element with scale `exp(-2 pi u)`.
    pub fn from_log_scale(u: f64, tau: f64) -> Result<Self> {
        Self::new((-TWO_PI * u).exp(), tau)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// The dilation parameter `u` with `lambda = exp(-2 pi u)`.
    pub fn u(&self) -> f64 {
        -self.lambda.ln() / TWO_PI
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.lambda, self.tau], [0.0, 1.0]]
    }

    pub fn compose(self, other: GroupElement) -> GroupElement {
        GroupElement {
            lambda: self.lambda * other.lambda,
            tau: self.tau + self.lambda * other.tau,
        }
    }

    pub fn inverse(self) -> GroupElement {
        GroupElement {
            lambda: 1.0 / self.lambda,
            tau: -self.tau / self.lambda,
        }
    }

    /// Affine action on the line, `x -> lambda x + tau`.
    pub fn apply(&self, x: f64) -> f64 {
        self.lambda * x + self.tau
    }

    /// Largest componentwise difference, used by the group-law checks.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        (self.lambda - other.lambda).abs().max((self.tau - other.tau).abs())
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: GroupElement) -> GroupElement {
        self.compose(rhs)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lambda, self.tau)
    }
}

pub fn compose(g1: GroupElement, g2: GroupElement) -> GroupElement {
    g1.compose(g2)
}

pub fn inverse(g: GroupElement) -> GroupElement {
    g.inverse()
}

/// Generator `[[a, b], [0, 0]]` of a one-parameter subgroup.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubgroupParams {
    pub a: f64,
    pub b: f64,
}

impl SubgroupParams {
    /// Modular group of the half-sided algebra, `u -> g_n(u)`.
    pub const MODULAR_N: SubgroupParams = SubgroupParams { a: -TWO_PI, b: 0.0 };
    /// Positive-generator group, `tau -> g_pos(tau)`.
    pub const POSITIVE: SubgroupParams = SubgroupParams { a: 0.0, b: 1.0 };
    /// Modular group of the global algebra, `s -> g_m(s)`.
    pub const MODULAR_M: SubgroupParams = SubgroupParams { a: -TWO_PI, b: -1.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a == 0.0 && b == 0.0 {
            return Err(Error::invalid("(a, b) = (0, 0) generates the trivial subgroup"));
        }
        Ok(SubgroupParams { a, b })
    }
}

/// `g_{a,b}(r) = (exp(a r), (b/a)(exp(a r) - 1))`, continued to `a = 0`.
pub fn subgroup_element(p: SubgroupParams, r: f64) -> GroupElement {
    let ar = p.a * r;
    let tau = if ar.abs() < SMALL_RATE {
        // (e^x - 1)/x = 1 + x/2 + x^2/6 + O(x^3)
        p.b * r * (1.0 + ar / 2.0 + ar * ar / 6.0)
    } else {
        p.b / p.a * ar.exp_m1()
    };
    GroupElement { lambda: ar.exp(), tau }
}

pub fn g_n(u: f64) -> GroupElement {
    subgroup_element(SubgroupParams::MODULAR_N, u)
}

pub fn g_pos(tau: f64) -> GroupElement {
    subgroup_element(SubgroupParams::POSITIVE, tau)
}

pub fn g_m(s: f64) -> GroupElement {
    subgroup_element(SubgroupParams::MODULAR_M, s)
}

/// Exchange function `F(u, s)` with `g_n(u) g_m(s) = g_m(F) g_n(s + u - F)`.
///
/// Defined while `1 + exp(-2 pi u)(exp(-2 pi s) - 1) > 0`; the boundary
/// itself is rejected.
pub fn exchange_f(u: f64, s: f64) -> Result<f64> {
    let shift = (-TWO_PI * u).exp() * (-TWO_PI * s).exp_m1();
    if !(1.0 + shift > 0.0) {
        return Err(Error::domain(format!(
            "1 + exp(-2 pi u)(exp(-2 pi s) - 1) > 0 fails at u = {u}, s = {s}"
        )));
    }
    Ok(-shift.ln_1p() / TWO_PI)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `g_pos(tau) = g_m(s) g_n(u)`, valid for `tau > -1/(2 pi)`.
    First,
    /// `g_pos(tau) = g_n(u) g_m(s)`, valid for `tau < 1/(2 pi)`.
    Second,
}

/// Factorization of `g_pos(tau)` into the two modular subgroups.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PosDecomposition {
    pub s: f64,
    pub u: f64,
    pub branch: Branch,
}

impl PosDecomposition {
    /// Recomposes the factors in the order the branch prescribes.
    pub fn compose(&self) -> GroupElement {
        match self.branch {
            Branch::First => g_m(self.s) * g_n(self.u),
            Branch::Second => g_n(self.u) * g_m(self.s),
        }
    }
}

pub fn decompose_pos(tau: f64, branch: Branch) -> Result<PosDecomposition> {
    let log = match branch {
        Branch::First => {
            if !(TWO_PI * tau > -1.0) {
                return Err(Error::domain(format!("first branch needs tau > -1/(2 pi), got {tau}")));
            }
            (TWO_PI * tau).ln_1p()
        }
        Branch::Second => {
            if !(TWO_PI * tau < 1.0) {
                return Err(Error::domain(format!("second branch needs tau < 1/(2 pi), got {tau}")));
            }
            (-TWO_PI * tau).ln_1p()
        }
    };
    let (s, u) = match branch {
        Branch::First => (-log / TWO_PI, log / TWO_PI),
        Branch::Second => (log / TWO_PI, -log / TWO_PI),
    };
    Ok(PosDecomposition { s, u, branch })
}

/// Translation parameter of `g_{a,b}(r) g_pos(tau) g_{a,b}(-r)`, i.e. `exp(a r) tau`.
pub fn conjugate_pos(p: SubgroupParams, r: f64, tau: f64) -> f64 {
    (p.a * r).exp() * tau
}
