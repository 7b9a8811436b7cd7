use serde::{Deserialize, Serialize};

use super::TestFunction;
use crate::flow_maps::{gamma_flow_ray, modular_flow_ray};
use crate::numerics::{cumulative_simpson, UniformCubic};
use crate::{Error, RayDirection, Result, ThermalContext};

use RayDirection::Plus;

/// One-parameter group acting on smearing functions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    /// `delta_u`, the modular group of the positive half-line.
    Modular(f64),
    /// `gamma_tau`, the positive-generator group, `tau >= 0`.
    Gamma(f64),
}

/// `L(u, x) = (beta/2pi) log(1 + exp(2 pi u)(exp(2 pi x/beta) - 1))`, the
/// point map pulled back by `delta_u`.
pub fn l_map(ctx: &ThermalContext, u: f64, x: f64) -> Result<f64> {
    modular_flow_ray(ctx, Plus, -u, x)
}

/// `f(x)` inside the declared support, zero outside.
fn eval_in_support(f: &TestFunction, x: f64) -> f64 {
    let (a, b) = f.support();
    if x < a || x > b {
        0.0
    } else {
        f.eval(x)
    }
}

/// `delta_u f (x) = f(L(u, x))`.
///
/// Without `clip` the support must stay where the flow is defined (fails for
/// some `u < 0`). With `clip` (only for `u >= 0`) supports reaching into the
/// negative half-line are allowed and the result vanishes where `L` is not
/// defined.
pub fn modular_transform(ctx: &ThermalContext, u: f64, f: &TestFunction, clip: bool) -> Result<TestFunction> {
    if clip && u < 0.0 {
        return Err(Error::domain(format!("clipped modular transform needs u >= 0, got u = {u}")));
    }
    if u == 0.0 {
        return Ok(f.clone());
    }
    let (a, b) = f.support();
    let lo = modular_flow_ray(ctx, Plus, u, a)?;
    let hi = modular_flow_ray(ctx, Plus, u, b)?;
    TestFunction::resampled((lo, hi), f.len(), |x| match l_map(ctx, u, x) {
        Ok(y) => eval_in_support(f, y),
        Err(_) => 0.0,
    })
}

/// `gamma_tau f (x) = f(x + (beta/2pi) log(1 - (2 pi tau/beta) exp(-2 pi x/beta)))`,
/// zero where the logarithm is undefined.
pub fn gamma_transform(ctx: &ThermalContext, tau: f64, f: &TestFunction) -> Result<TestFunction> {
    if tau < 0.0 {
        return Err(Error::domain(format!("gamma transform needs tau >= 0, got tau = {tau}")));
    }
    if tau == 0.0 {
        return Ok(f.clone());
    }
    let (a, b) = f.support();
    let lo = gamma_flow_ray(ctx, Plus, tau, a)?;
    let hi = gamma_flow_ray(ctx, Plus, tau, b)?;
    TestFunction::resampled((lo, hi), f.len(), |x| match gamma_flow_ray(ctx, Plus, -tau, x) {
        Ok(y) => eval_in_support(f, y),
        Err(_) => 0.0,
    })
}

fn transform0(ctx: &ThermalContext, which: Transform, f: &TestFunction) -> Result<TestFunction> {
    match which {
        Transform::Modular(u) => modular_transform(ctx, u, f, false),
        Transform::Gamma(tau) => gamma_transform(ctx, tau, f),
    }
}

/// Preimage of `x` under the transform, if defined.
fn preimage(ctx: &ThermalContext, which: Transform, x: f64) -> Option<f64> {
    match which {
        Transform::Modular(u) => l_map(ctx, u, x).ok(),
        Transform::Gamma(tau) => gamma_flow_ray(ctx, Plus, -tau, x).ok(),
    }
}

/// Action on the field of scaling dimension `n + 1`: the `n`-fold integral
/// from 0 of the `n = 0` action on `f^(n)`.
///
/// The result is sampled on `[0, 2 b']`, `b'` the right end of the
/// transformed support. Past `b'` it is a polynomial of degree `n - 1`, so it
/// is flagged as not compactly supported.
pub fn higher_transform(ctx: &ThermalContext, n: u32, which: Transform, f: &TestFunction) -> Result<TestFunction> {
    if n == 0 {
        return transform0(ctx, which, f);
    }
    if f.support().0 < 0.0 {
        return Err(Error::domain("higher transforms need a support in the positive half-line"));
    }
    let d = f.derivative(n)?;
    let image = transform0(ctx, which, &d)?;
    let (lo, hi) = image.support();
    let dx = image.dx().min(f.dx());
    let end = 2.0 * hi;
    let m = (end / dx).ceil() as usize + 1;
    let mut values: Vec<f64> = (0..m)
        .map(|k| {
            let x = dx * k as f64;
            if x < lo || x > hi {
                return 0.0;
            }
            preimage(ctx, which, x).map_or(0.0, |y| eval_in_support(&d, y))
        })
        .collect();
    for _ in 0..n {
        values = cumulative_simpson(&values, dx);
    }
    // simpson's end correction leaks round-off into nodes left of the support
    for (k, v) in values.iter_mut().enumerate() {
        if dx * (k as f64) < lo {
            *v = 0.0;
        }
    }
    TestFunction::open_ended(0.0, dx, values, (lo.max(0.0), dx * (m - 1) as f64))
}

/// `int_I delta_u(f^(n))`. Zero for every bounded `I` containing the image
/// support would mean the action keeps `f` localized; for `n >= 1` the value
/// generically stays nonzero. For `n = 0` it returns the integral of
/// `(delta_u f)'` over `I`, which vanishes once `I` covers the support.
pub fn localization_defect(
    ctx: &ThermalContext,
    n: u32,
    u: f64,
    f: &TestFunction,
    interval: (f64, f64),
) -> Result<f64> {
    if f.support().0 < 0.0 {
        return Err(Error::domain("localization defect needs a support in the positive half-line"));
    }
    let (lo, hi) = interval;
    if !(lo < hi) {
        return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
    }
    let integrand = if n == 0 {
        modular_transform(ctx, u, f, false)?.derivative(1)?
    } else {
        modular_transform(ctx, u, &f.derivative(n)?, false)?
    };
    let running = cumulative_simpson(integrand.samples(), integrand.dx());
    let total = *running.last().unwrap_or(&0.0);
    let at = |x: f64| {
        let start = integrand.x0();
        let end = integrand.grid_end();
        if x <= start {
            0.0
        } else if x >= end {
            total
        } else {
            UniformCubic::new(start, integrand.dx(), &running).eval(x)
        }
    };
    Ok(at(hi) - at(lo))
}
