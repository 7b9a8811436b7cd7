//! Two-dimensional modular and positive-generator flows.
//!
//! The forward light cone and the right wedge factorize into half-line
//! algebras on the light-cone coordinates `xL = x0 - x1` and `xR = x0 + x1`,
//! so their flows act componentwise. The backward cone and left wedge are
//! reached by reflecting coordinates.

mod figure;

pub use figure::{
    check_seed_translation, emit_flow_figure, figure_data, render_figure, write_atomic, write_figure, FigureData,
    FigureFormat, FigureLine, FigureSpec,
};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::flow_maps::{gamma_domain, gamma_flow_ray, modular_domain, modular_flow_ray};
use crate::{Error, RayDirection, Result, ThermalContext};

use RayDirection::{Minus, Plus};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub x0: f64,
    pub x1: f64,
}

impl SpacetimePoint {
    pub const ORIGIN: SpacetimePoint = SpacetimePoint { x0: 0.0, x1: 0.0 };

    pub fn new(x0: f64, x1: f64) -> Self {
        SpacetimePoint { x0, x1 }
    }

    pub fn from_light_cone(xl: f64, xr: f64) -> Self {
        SpacetimePoint { x0: 0.5 * (xr + xl), x1: 0.5 * (xr - xl) }
    }

    pub fn xr(&self) -> f64 {
        self.x0 + self.x1
    }

    pub fn xl(&self) -> f64 {
        self.x0 - self.x1
    }

    /// `(x0, x1) -> (-x0, -x1)`.
    pub fn reflect_total(self) -> Self {
        SpacetimePoint { x0: -self.x0, x1: -self.x1 }
    }

    /// `x1 -> -x1`.
    pub fn reflect_space(self) -> Self {
        SpacetimePoint { x0: self.x0, x1: -self.x1 }
    }

    pub fn distance(&self, other: &SpacetimePoint) -> f64 {
        (self.x0 - other.x0).hypot(self.x1 - other.x1)
    }
}

impl fmt::Display for SpacetimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x0, self.x1)
    }
}

impl FromStr for SpacetimePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b] = parts.as_slice() else {
            return Err(Error::invalid(format!("expected x0,x1 but got {s:?}")));
        };
        let parse = |v: &str| v.parse::<f64>().map_err(|_| Error::invalid(format!("bad coordinate {v:?}")));
        Ok(SpacetimePoint::new(parse(a)?, parse(b)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    ForwardCone,
    RightWedge,
    /// Total reflection of the forward cone.
    BackwardCone,
    /// Spatial reflection of the right wedge.
    LeftWedge,
}

impl Region {
    pub fn contains(&self, p: &SpacetimePoint) -> bool {
        let (l, r) = (p.xl(), p.xr());
        match self {
            Region::ForwardCone => l > 0.0 && r > 0.0,
            Region::RightWedge => r > 0.0 && l < 0.0,
            Region::BackwardCone => l < 0.0 && r < 0.0,
            Region::LeftWedge => r < 0.0 && l > 0.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Region::ForwardCone => "forward-cone",
            Region::RightWedge => "right-wedge",
            Region::BackwardCone => "backward-cone",
            Region::LeftWedge => "left-wedge",
        }
    }

    /// Ray directions acting on `(xL, xR)` in the two base regions.
    fn base_directions(self) -> (RayDirection, RayDirection) {
        match self {
            Region::ForwardCone | Region::BackwardCone => (Plus, Plus),
            Region::RightWedge | Region::LeftWedge => (Minus, Plus),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cone" | "forward-cone" | "v+" => Ok(Region::ForwardCone),
            "wedge" | "right-wedge" | "w" => Ok(Region::RightWedge),
            "backward-cone" | "v-" => Ok(Region::BackwardCone),
            "left-wedge" => Ok(Region::LeftWedge),
            _ => Err(Error::invalid(format!("unknown region {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlowKind {
    Modular,
    Gamma,
}

impl FlowKind {
    pub fn name(&self) -> &'static str {
        match self {
            FlowKind::Modular => "modular",
            FlowKind::Gamma => "gamma",
        }
    }
}

impl fmt::Display for FlowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FlowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "modular" => Ok(FlowKind::Modular),
            "gamma" => Ok(FlowKind::Gamma),
            _ => Err(Error::invalid(format!("unknown flow {s:?}"))),
        }
    }
}

fn component_error(name: &str, e: Error) -> Error {
    match e {
        Error::Domain(msg) => Error::Domain(format!("{name} component: {msg}")),
        other => other,
    }
}

/// Componentwise flow in a base region. The backward cone runs the forward
/// cone flow backwards in the reflected picture (the reflection reverses
/// time), the left wedge uses the plain spatial mirror.
fn flow_2d(ctx: &ThermalContext, region: Region, kind: FlowKind, s: f64, p: SpacetimePoint) -> Result<SpacetimePoint> {
    let ray = |dir, x| match kind {
        FlowKind::Modular => modular_flow_ray(ctx, dir, s, x),
        FlowKind::Gamma => gamma_flow_ray(ctx, dir, s, x),
    };
    match region {
        Region::BackwardCone => {
            flow_2d(ctx, Region::ForwardCone, kind, -s, p.reflect_total()).map(SpacetimePoint::reflect_total)
        }
        Region::LeftWedge => {
            flow_2d(ctx, Region::RightWedge, kind, s, p.reflect_space()).map(SpacetimePoint::reflect_space)
        }
        _ => {
            let (dl, dr) = region.base_directions();
            let xl = ray(dl, p.xl()).map_err(|e| component_error("xL", e))?;
            let xr = ray(dr, p.xr()).map_err(|e| component_error("xR", e))?;
            Ok(SpacetimePoint::from_light_cone(xl, xr))
        }
    }
}

pub fn modular_flow_2d(ctx: &ThermalContext, region: Region, u: f64, p: SpacetimePoint) -> Result<SpacetimePoint> {
    flow_2d(ctx, region, FlowKind::Modular, u, p)
}

pub fn gamma_flow_2d(ctx: &ThermalContext, region: Region, tau: f64, p: SpacetimePoint) -> Result<SpacetimePoint> {
    flow_2d(ctx, region, FlowKind::Gamma, tau, p)
}

pub fn flow_2d_by_kind(
    ctx: &ThermalContext,
    region: Region,
    kind: FlowKind,
    s: f64,
    p: SpacetimePoint,
) -> Result<SpacetimePoint> {
    flow_2d(ctx, region, kind, s, p)
}

/// Open parameter interval on which the flow through `p` is defined.
pub fn flow_domain(ctx: &ThermalContext, region: Region, kind: FlowKind, p: SpacetimePoint) -> (f64, f64) {
    let dom = |dir, x| match kind {
        FlowKind::Modular => modular_domain(ctx, dir, x),
        FlowKind::Gamma => gamma_domain(ctx, dir, x),
    };
    match region {
        Region::BackwardCone => {
            let (lo, hi) = flow_domain(ctx, Region::ForwardCone, kind, p.reflect_total());
            (-hi, -lo)
        }
        Region::LeftWedge => flow_domain(ctx, Region::RightWedge, kind, p.reflect_space()),
        _ => {
            let (dl, dr) = region.base_directions();
            let (a, b) = dom(dl, p.xl());
            let (c, d) = dom(dr, p.xr());
            (a.max(c), b.min(d))
        }
    }
}

/// Whether `tau` satisfies the stronger condition under which the gamma
/// flow maps the translated region at `p` into the region itself.
pub fn gamma_keeps_region(ctx: &ThermalContext, region: Region, tau: f64, p: SpacetimePoint) -> bool {
    let c = ctx.rate();
    if c == 0.0 {
        return match region {
            Region::ForwardCone => tau >= -p.xl().min(p.xr()),
            Region::RightWedge => tau >= -p.xr() && tau <= -p.xl(),
            Region::BackwardCone => gamma_keeps_region(ctx, Region::ForwardCone, -tau, p.reflect_total()),
            Region::LeftWedge => gamma_keeps_region(ctx, Region::RightWedge, tau, p.reflect_space()),
        };
    }
    match region {
        Region::ForwardCone => {
            let m = (c * p.xl()).min(c * p.xr());
            tau > -m.exp_m1() / c
        }
        Region::RightWedge => tau > -(c * p.xr()).exp_m1() / c && tau < (-c * p.xl()).exp_m1() / c,
        Region::BackwardCone => gamma_keeps_region(ctx, Region::ForwardCone, -tau, p.reflect_total()),
        Region::LeftWedge => gamma_keeps_region(ctx, Region::RightWedge, tau, p.reflect_space()),
    }
}

/// `(R0, R1)` with `modular_flow_2d(u, p) = (x0 - beta u + R0, x1 + R1)`.
pub fn remainder_terms(ctx: &ThermalContext, region: Region, u: f64, p: SpacetimePoint) -> Result<(f64, f64)> {
    ctx.finite_beta()?;
    let c = ctx.rate();
    // validates the domain and names the failing component
    modular_flow_2d(ctx, region, u, p)?;
    match region {
        Region::BackwardCone => {
            let (r0, r1) = remainder_terms(ctx, Region::ForwardCone, -u, p.reflect_total())?;
            Ok((-r0, -r1))
        }
        Region::LeftWedge => {
            let (r0, r1) = remainder_terms(ctx, Region::RightWedge, u, p.reflect_space())?;
            Ok((r0, -r1))
        }
        _ => {
            let g = (u * crate::TWO_PI).exp_m1();
            // log A_R with A_R = 1 + e^{-c(xR - beta u)} - e^{-c xR}
            let log_ar = ((-c * p.xr()).exp() * g).ln_1p();
            let log_second = if region == Region::ForwardCone {
                ((-c * p.xl()).exp() * g).ln_1p()
            } else {
                // log B_L with B_L = 1 + e^{c(xL - beta u)} - e^{c xL}
                ((c * p.xl()).exp() * (-u * crate::TWO_PI).exp_m1()).ln_1p()
            };
            Ok(match region {
                Region::ForwardCone => ((log_ar + log_second) / (2.0 * c), (log_ar - log_second) / (2.0 * c)),
                _ => ((log_ar - log_second) / (2.0 * c), (log_ar + log_second) / (2.0 * c)),
            })
        }
    }
}

/// `dx1/dx0` of the gamma flow at `p`.
pub fn velocity_field(ctx: &ThermalContext, region: Region, p: SpacetimePoint) -> f64 {
    let c = ctx.rate();
    match region {
        Region::ForwardCone => -(c * p.x1).tanh(),
        Region::RightWedge => -(c * p.x0).tanh(),
        Region::BackwardCone => (c * p.x1).tanh(),
        Region::LeftWedge => (c * p.x0).tanh(),
    }
}

fn ln_abs_sinh(z: f64) -> f64 {
    let a = z.abs();
    if a > 20.0 {
        a - std::f64::consts::LN_2 + (-(-2.0 * a).exp()).ln_1p()
    } else {
        a.sinh().ln()
    }
}

fn ln_cosh(z: f64) -> f64 {
    let a = z.abs();
    a - std::f64::consts::LN_2 + (-2.0 * a).exp().ln_1p()
}

/// Constant `C` labelling the gamma flow line through `p` at finite beta.
///
/// Cone lines satisfy `x0 + ln|sinh(c x1)|/c = C`, wedge lines
/// `x1 + ln cosh(c x0)/c = C`, with `c = 2 pi/beta`. Cone lines through the
/// time axis have `C = -inf`.
pub fn gamma_line_constant(ctx: &ThermalContext, region: Region, p: SpacetimePoint) -> Result<f64> {
    ctx.finite_beta()?;
    let c = ctx.rate();
    Ok(match region {
        Region::ForwardCone => p.x0 + ln_abs_sinh(c * p.x1) / c,
        Region::RightWedge => p.x1 + ln_cosh(c * p.x0) / c,
        Region::BackwardCone => -p.x0 + ln_abs_sinh(c * p.x1) / c,
        Region::LeftWedge => -p.x1 + ln_cosh(c * p.x0) / c,
    })
}

/// Sampled flow trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowLine {
    pub params: Vec<f64>,
    pub points: Vec<SpacetimePoint>,
}

/// Samples the flow through `seed` at `n` evenly spaced parameters in `range`.
pub fn flow_line(
    ctx: &ThermalContext,
    region: Region,
    kind: FlowKind,
    seed: SpacetimePoint,
    range: (f64, f64),
    n: usize,
) -> Result<FlowLine> {
    let (lo, hi) = flow_domain(ctx, region, kind, seed);
    let (a, b) = range;
    if !(a.is_finite() && b.is_finite()) || n == 0 {
        return Err(Error::invalid("flow line needs a finite range and at least one sample"));
    }
    for v in [a, b] {
        if !(v > lo && v < hi) {
            let exit = if v <= lo { lo } else { hi };
            return Err(Error::domain(format!(
                "{kind} flow of {region} through ({seed}) leaves its domain at parameter {exit} (requested {v})"
            )));
        }
    }
    let params = crate::numerics::linspace(a, b, n);
    let points = params
        .iter()
        .map(|&s| flow_2d(ctx, region, kind, s, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(FlowLine { params, points })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Calibration {
    TOfTau,
    TauOfT,
    TauOfProper,
    ProperOfTau,
}

/// Parameter relations along the gamma flow line through the origin.
///
/// In the cone the line is the time axis, so proper time and `t` coincide.
pub fn time_calibration(ctx: &ThermalContext, region: Region, value: f64, direction: Calibration) -> Result<f64> {
    let c = ctx.rate();
    if c == 0.0 {
        return Ok(value);
    }
    let range_err = |range: &str| Error::OutOfRange { value, range: range.to_string() };
    match region {
        Region::ForwardCone => match direction {
            Calibration::TOfTau => {
                if c * value > -1.0 {
                    Ok((c * value).ln_1p() / c)
                } else {
                    Err(range_err("2 pi tau/beta > -1"))
                }
            }
            Calibration::TauOfT | Calibration::TauOfProper => Ok((c * value).exp_m1() / c),
            Calibration::ProperOfTau => time_calibration(ctx, region, value, Calibration::TOfTau),
        },
        Region::RightWedge => match direction {
            Calibration::TOfTau => {
                if (c * value).abs() < 1.0 {
                    Ok((c * value).atanh() / c)
                } else {
                    Err(range_err("|2 pi tau/beta| < 1"))
                }
            }
            Calibration::TauOfT => Ok((c * value).tanh() / c),
            Calibration::TauOfProper => {
                if (c * value).abs() <= std::f64::consts::FRAC_PI_2 {
                    Ok((c * value).sin() / c)
                } else {
                    Err(range_err("|2 pi t/beta| <= pi/2"))
                }
            }
            Calibration::ProperOfTau => {
                if (c * value).abs() <= 1.0 {
                    Ok((c * value).asin() / c)
                } else {
                    Err(range_err("|2 pi tau/beta| <= 1"))
                }
            }
        },
        _ => Err(Error::invalid(format!("time calibration is defined for the forward cone and right wedge, not {region}"))),
    }
}

/// Glued chart `(xi_L, xi_R)` with `xi(x) = sign(x)(exp(sign(x) c x) - 1)/c`.
pub fn causal_chart(ctx: &ThermalContext, p: SpacetimePoint) -> Result<(f64, f64)> {
    ctx.finite_beta()?;
    let c = ctx.rate();
    let glue = |x: f64| if x >= 0.0 { (c * x).exp_m1() / c } else { -(-c * x).exp_m1() / c };
    Ok((glue(p.xl()), glue(p.xr())))
}
