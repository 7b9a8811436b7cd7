//! Half-sided flows on a light ray.
//!
//! For the algebra of the positive half-line the modular flow `phi_plus` and
//! the positive-generator flow `psi_plus` act on the left endpoint of a
//! half-line; the negative half-line flows are their reflections
//! `phi_minus(u, x) = -phi_plus(-u, -x)` and `psi_minus(t, x) = -psi_plus(-t, -x)`.
//!
//! Everything is computed through the chart
//!
//! ```text
//! xi_plus(x)  =  (beta/2pi) (exp( 2pi x/beta) - 1)
//! xi_minus(x) = -(beta/2pi) (exp(-2pi x/beta) - 1)
//! ```
//!
//! in which the modular flow is multiplication by `exp(-+2 pi u)` and the
//! positive-generator flow is translation by `tau`. A point leaves the
//! domain exactly when its image leaves the range of the chart. The chart
//! coordinate is carried in whichever of `xi`, `xi + beta/2pi` or `log xi`
//! keeps full precision for the given `x`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, TWO_PI};

/// Inverse temperature; `Infinite` is the vacuum limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Beta {
    Finite(f64),
    Infinite,
}

impl Beta {
    pub fn new(beta: f64) -> Result<Self> {
        if beta == f64::INFINITY {
            Ok(Beta::Infinite)
        } else if beta > 0.0 && beta.is_finite() {
            Ok(Beta::Finite(beta))
        } else {
            Err(Error::invalid(format!("beta must lie in (0, inf], got {beta}")))
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Beta::Finite(b) => b,
            Beta::Infinite => f64::INFINITY,
        }
    }

    /// `2 pi / beta`, zero in the vacuum limit.
    pub fn rate(&self) -> f64 {
        match *self {
            Beta::Finite(b) => TWO_PI / b,
            Beta::Infinite => 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Beta::Finite(_))
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Finite(b) => write!(f, "{b}"),
            Beta::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Beta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "Infinity" => Ok(Beta::Infinite),
            other => {
                let b: f64 = other
                    .parse()
                    .map_err(|_| Error::invalid(format!("cannot parse beta from {other:?}")))?;
                Beta::new(b)
            }
        }
    }
}

impl Serialize for Beta {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Beta::Finite(b) => serializer.serialize_f64(*b),
            Beta::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Beta {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(b) => Beta::new(b),
            Raw::Str(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Shared settings for flows and field quadratures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalContext {
    pub beta: Beta,
    /// Default comparison tolerance.
    pub tol: f64,
    /// Momentum cutoff of the field quadratures.
    pub pmax: f64,
    /// Number of momentum nodes on `[-pmax, pmax]`.
    pub np: usize,
}

impl ThermalContext {
    pub const DEFAULT_NP: usize = 8192;

    /// Context at finite `beta` with cutoff `200/beta` and 8192 momentum nodes.
    pub fn new(beta: f64) -> Result<Self> {
        let beta = Beta::new(beta)?;
        let pmax = match beta {
            Beta::Finite(b) => 200.0 / b,
            Beta::Infinite => 200.0,
        };
        Ok(ThermalContext { beta, tol: 1e-12, pmax, np: Self::DEFAULT_NP })
    }

    pub fn vacuum() -> Self {
        ThermalContext { beta: Beta::Infinite, tol: 1e-12, pmax: 200.0, np: Self::DEFAULT_NP }
    }

    pub fn with_quadrature(mut self, pmax: f64, np: usize) -> Result<Self> {
        if !(pmax > 0.0 && pmax.is_finite()) {
            return Err(Error::invalid(format!("pmax must be positive, got {pmax}")));
        }
        if np < 16 {
            return Err(Error::invalid(format!("need at least 16 momentum nodes, got {np}")));
        }
        self.pmax = pmax;
        self.np = np;
        Ok(self)
    }

    pub fn rate(&self) -> f64 {
        self.beta.rate()
    }

    /// `beta` as a number, or an error in the vacuum limit.
    pub fn finite_beta(&self) -> Result<f64> {
        match self.beta {
            Beta::Finite(b) => Ok(b),
            Beta::Infinite => Err(Error::invalid("operation requires a finite beta")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RayDirection {
    /// Algebra of the positive half-line.
    Plus,
    /// Algebra of the negative half-line.
    Minus,
}

impl RayDirection {
    fn sign(self) -> f64 {
        match self {
            RayDirection::Plus => 1.0,
            RayDirection::Minus => -1.0,
        }
    }
}

pub fn xi_chart(ctx: &ThermalContext, dir: RayDirection, x: f64) -> Result<f64> {
    let c = ctx.finite_beta().map(|b| TWO_PI / b)?;
    let s = dir.sign();
    Ok(s * (s * c * x).exp_m1() / c)
}

pub fn xi_inverse(ctx: &ThermalContext, dir: RayDirection, xi: f64) -> Result<f64> {
    let c = ctx.finite_beta().map(|b| TWO_PI / b)?;
    let s = dir.sign();
    // plus: c xi > -1, minus: c xi < 1
    let arg = s * c * xi;
    if !(arg > -1.0) || !xi.is_finite() {
        let range = match dir {
            RayDirection::Plus => format!("(-{}, inf)", 1.0 / c),
            RayDirection::Minus => format!("(-inf, {})", 1.0 / c),
        };
        return Err(Error::OutOfRange { value: xi, range });
    }
    Ok(s * arg.ln_1p() / c)
}

/// Modular flow of the positive half-line on a point, scale `lambda`.
fn phi_plus(c: f64, u: f64, x: f64) -> Option<f64> {
    if c == 0.0 {
        return Some((-TWO_PI * u).exp() * x);
    }
    if u == 0.0 {
        return Some(x);
    }
    let cx = c * x;
    let value = if cx > 1.0 {
        // x - beta u + log(1 + (e^{2 pi u} - 1) e^{-c x}) / c
        let q = (TWO_PI * u).exp_m1() * (-cx).exp();
        if !(q > -1.0) {
            return None;
        }
        x - TWO_PI * u / c + q.ln_1p() / c
    } else {
        let lambda = (-TWO_PI * u).exp();
        let q = lambda * cx.exp_m1();
        if q > -0.5 {
            q.ln_1p() / c
        } else {
            // (1 - lambda) + lambda e^{c x}: no cancellation while lambda <= 1
            let arg = -(-TWO_PI * u).exp_m1() + lambda * cx.exp();
            if !(arg > 0.0) {
                return None;
            }
            arg.ln() / c
        }
    };
    value.is_finite().then_some(value)
}

/// Positive-generator flow of the positive half-line.
fn psi_plus(c: f64, tau: f64, x: f64) -> Option<f64> {
    if c == 0.0 {
        return Some(x + tau);
    }
    if tau == 0.0 {
        return Some(x);
    }
    let cx = c * x;
    let ctau = c * tau;
    let value = if ctau > 0.0 && ctau.ln() > cx {
        // log(e^{c x} + c tau)/c without cancelling x against log e^{-c x}
        ctau.ln() / c + ((cx.exp()) / ctau).ln_1p() / c
    } else {
        let q = ctau * (-cx).exp();
        if !(q > -1.0) {
            return None;
        }
        x + q.ln_1p() / c
    };
    value.is_finite().then_some(value)
}

fn modular_violation(dir: RayDirection, u: f64, x: f64) -> Error {
    match dir {
        RayDirection::Plus => Error::domain(format!(
            "1 + exp(-2 pi u)[exp(2 pi x/beta) - 1] > 0 fails at u = {u}, x = {x}"
        )),
        RayDirection::Minus => Error::domain(format!(
            "1 + exp(2 pi u)[exp(-2 pi x/beta) - 1] > 0 fails at u = {u}, x = {x}"
        )),
    }
}

fn gamma_violation(dir: RayDirection, tau: f64, x: f64) -> Error {
    match dir {
        RayDirection::Plus => Error::domain(format!(
            "1 + (2 pi tau/beta) exp(-2 pi x/beta) > 0 fails at tau = {tau}, x = {x}"
        )),
        RayDirection::Minus => Error::domain(format!(
            "1 - (2 pi tau/beta) exp(2 pi x/beta) > 0 fails at tau = {tau}, x = {x}"
        )),
    }
}

/// `phi_+(u, x)` or `phi_-(u, x)`.
pub fn modular_flow_ray(ctx: &ThermalContext, dir: RayDirection, u: f64, x: f64) -> Result<f64> {
    let c = ctx.rate();
    let image = match dir {
        RayDirection::Plus => phi_plus(c, u, x),
        RayDirection::Minus => phi_plus(c, -u, -x).map(|y| -y),
    };
    image.ok_or_else(|| modular_violation(dir, u, x))
}

/// `psi_+(tau, x)` or `psi_-(tau, x)`.
pub fn gamma_flow_ray(ctx: &ThermalContext, dir: RayDirection, tau: f64, x: f64) -> Result<f64> {
    let c = ctx.rate();
    let image = match dir {
        RayDirection::Plus => psi_plus(c, tau, x),
        RayDirection::Minus => psi_plus(c, -tau, -x).map(|y| -y),
    };
    image.ok_or_else(|| gamma_violation(dir, tau, x))
}

/// Open interval of `u` for which `modular_flow_ray(u, x)` is defined.
pub fn modular_domain(ctx: &ThermalContext, dir: RayDirection, x: f64) -> (f64, f64) {
    let c = ctx.rate();
    let y = dir.sign() * x;
    if c == 0.0 || y >= 0.0 {
        return (f64::NEG_INFINITY, f64::INFINITY);
    }
    // lambda < 1/(1 - e^{c y})
    let bound = (-(c * y).exp()).ln_1p() / TWO_PI;
    match dir {
        RayDirection::Plus => (bound, f64::INFINITY),
        RayDirection::Minus => (f64::NEG_INFINITY, -bound),
    }
}

/// Open interval of `tau` for which `gamma_flow_ray(tau, x)` is defined.
pub fn gamma_domain(ctx: &ThermalContext, dir: RayDirection, x: f64) -> (f64, f64) {
    let c = ctx.rate();
    if c == 0.0 {
        return (f64::NEG_INFINITY, f64::INFINITY);
    }
    match dir {
        RayDirection::Plus => (-(c * x).exp() / c, f64::INFINITY),
        RayDirection::Minus => (f64::NEG_INFINITY, (-c * x).exp() / c),
    }
}

/// Largest deviation between the two sides of the translation/modular
/// commutation relation in point-map form,
/// `phi(u, phi(-u, x) + t)` versus `phi(v, x) + phi(u, t)` with
/// `v = (phi(u, t) - t)/beta`.
pub fn check_translation_commutation(ctx: &ThermalContext, u: f64, t: f64, grid: &[f64]) -> Result<f64> {
    let plus = RayDirection::Plus;
    let shift = modular_flow_ray(ctx, plus, u, t)?;
    let v = match ctx.beta {
        Beta::Finite(b) => (shift - t) / b,
        Beta::Infinite => 0.0,
    };
    let mut worst: f64 = 0.0;
    for &x in grid {
        let lhs = modular_flow_ray(ctx, plus, u, modular_flow_ray(ctx, plus, -u, x)? + t)?;
        let rhs = modular_flow_ray(ctx, plus, v, x)? + shift;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Point-map form of `T(t) Gamma(tau) T(-t) = Gamma(exp(2 pi t/beta) tau)`:
/// largest deviation between `psi(tau, x - t) + t` and `psi(exp(2 pi t/beta) tau, x)`.
pub fn check_gamma_translation(ctx: &ThermalContext, tau: f64, t: f64, grid: &[f64]) -> Result<f64> {
    let plus = RayDirection::Plus;
    let scaled = (ctx.rate() * t).exp() * tau;
    let mut worst: f64 = 0.0;
    for &x in grid {
        let lhs = gamma_flow_ray(ctx, plus, tau, x - t)? + t;
        let rhs = gamma_flow_ray(ctx, plus, scaled, x)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}
