//! Position-space forms of the dimension-one two-point function.
//!
//! These are cross-checks of the momentum-space forms. With
//! `W2(xi) = beta^-2 sinh^-2(pi xi/beta)` the momentum form with `exp(-eps p)`
//! damping equals `C int int f(x) g(y) W2(x - y + i eps)` for a fixed
//! constant `C`, found by [`calibrate_position_kernel`].

use num_complex::Complex64;

use super::kernels::position_kernel;
use super::{FieldSpec, Spectrum, TestFunction};
use crate::flow_maps::modular_flow_ray;
use crate::numerics::adaptive_gk;
use crate::{Error, RayDirection, Result, ThermalContext, TWO_PI};

/// `int int f(x) g(y) W2(x - y + i eps) dx dy` by the product trapezoid rule.
///
/// Accurate when the supports are apart or `eps` spans many grid cells.
pub fn omega2_position(ctx: &ThermalContext, f: &TestFunction, g: &TestFunction, eps: f64) -> Result<Complex64> {
    let beta = ctx.finite_beta()?;
    if !(eps > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let xs = f.nodes();
    let ys = g.nodes();
    let mut total = Complex64::new(0.0, 0.0);
    for (x, fx) in xs.iter().zip(f.samples()) {
        if *fx == 0.0 {
            continue;
        }
        let mut row = Complex64::new(0.0, 0.0);
        for (y, gy) in ys.iter().zip(g.samples()) {
            if *gy != 0.0 {
                row += position_kernel(beta, Complex64::new(x - y, eps)) * *gy;
            }
        }
        total += row * *fx;
    }
    Ok(total * (f.dx() * g.dx()))
}

/// Ratio of the damped momentum form to [`omega2_position`] on the pair `(f, g)`.
pub fn calibrate_position_kernel(
    ctx: &ThermalContext,
    f: &TestFunction,
    g: &TestFunction,
    eps: f64,
) -> Result<Complex64> {
    let spec = FieldSpec::new(0);
    let momentum = Spectrum::new(ctx, f).omega2_damped(ctx, spec, &Spectrum::new(ctx, g), eps)?;
    let position = omega2_position(ctx, f, g, eps)?;
    Ok(momentum / position)
}

/// Which ordering of the smeared pair a kernel represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KmsOrder {
    /// Kernel `W2(L(-u, y) - x + i eps) dL/dy`.
    Forward,
    /// Kernel `W2(x - L(-u, y) + i eps) dL/dy`.
    Swapped,
}

/// `L(-u, y)` and its `y`-derivative.
fn pulled_back(ctx: &ThermalContext, u: f64, y: f64) -> Result<(f64, f64)> {
    let l = modular_flow_ray(ctx, RayDirection::Plus, u, y)?;
    let c = ctx.rate();
    let dl = 1.0 / (1.0 + (-c * y).exp() * (TWO_PI * u).exp_m1());
    Ok((l, dl))
}

/// Kernel of the smeared modular two-point function, evaluated directly.
pub fn kms_direct(ctx: &ThermalContext, x: f64, y: f64, u: f64, eps: f64, order: KmsOrder) -> Result<Complex64> {
    let beta = ctx.finite_beta()?;
    let (l, dl) = pulled_back(ctx, u, y)?;
    let xi = match order {
        KmsOrder::Forward => l - x,
        KmsOrder::Swapped => x - l,
    };
    Ok(position_kernel(beta, Complex64::new(xi, eps)) * dl)
}

/// Closed form of the forward kernel as a function of complex `w`:
///
/// `4 E/beta^2 [exp(-pi w)(E - 1) exp(-b) - 2 exp(pi w) sinh b]^-2`,
/// `E = exp(2 pi y/beta)`, `b = pi x/beta`.
///
/// `eps` shifts `b` toward the strip interior: at real `w` this is the
/// forward kernel, at `w = u - i` it is the swapped kernel.
pub fn kms_closed_form(ctx: &ThermalContext, x: f64, y: f64, w: Complex64, eps: f64) -> Result<Complex64> {
    let beta = ctx.finite_beta()?;
    let c = ctx.rate();
    if c * y > 700.0 || c * x.abs() > 700.0 {
        return Err(Error::OutOfRange { value: x.max(y), range: format!("|x|, y < {}", 700.0 / c) });
    }
    Ok(closed_form(beta, x, y, w, eps))
}

fn closed_form(beta: f64, x: f64, y: f64, w: Complex64, eps: f64) -> Complex64 {
    let pi = std::f64::consts::PI;
    let side = if w.im >= -0.5 { -1.0 } else { 1.0 };
    let b = Complex64::new(pi * x / beta, side * pi * eps / beta);
    let e = (TWO_PI * y / beta).exp();
    let bracket = (-w * pi).exp() * (e - 1.0) * (-b).exp() - (w * pi).exp() * b.sinh() * 2.0;
    bracket.powi(-2) * (4.0 * e / (beta * beta))
}

/// The closed form at `w = u` (`side = -1`) or `w = u - i` (`side = +1`) with
/// the bracket factored around its zero at `x = L(-u, y)`. Since
/// `exp(-2 pi i) = 1` both points share
/// `[...]^2 = exp(2 pi u - 2b) exp(4 pi L/beta) expm1(2(b - pi L/beta))^2`,
/// which keeps full relative accuracy next to the peak.
fn factored_closed_form(beta: f64, x: f64, y: f64, l: f64, u: f64, side: f64, eps: f64) -> Complex64 {
    let pi = std::f64::consts::PI;
    let c = TWO_PI / beta;
    let d = Complex64::new(2.0 * pi * (x - l) / beta, 2.0 * side * pi * eps / beta);
    let half = d.im / 2.0;
    let m = Complex64::new(d.re.exp_m1() * d.im.cos() - 2.0 * half.sin() * half.sin(), d.re.exp() * d.im.sin());
    let log_scale = Complex64::new(c * (y + x) - 2.0 * c * l - TWO_PI * u + (4.0 / (beta * beta)).ln(), side * c * eps);
    log_scale.exp() / (m * m)
}

/// Smeared closed forms at `u` and at the continued point `u - i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KmsForms {
    /// `int int f(x) g(y) K(u)`.
    pub at_u: Complex64,
    /// `int int f(x) g(y) K(u - i)`.
    pub at_u_minus_i: Complex64,
    /// Summed quadrature error estimate.
    pub error: f64,
}

/// Smears [`kms_closed_form`] against `f(x) g(y)` at `u` and `u - i`.
///
/// The inner `x` integral is adaptive on each grid cell of `f` (the kernel
/// peaks with width `eps` where `x = L(-u, y)`); the outer one is the
/// trapezoid rule on `g`'s grid.
pub fn smeared_kms_forms(
    ctx: &ThermalContext,
    f: &TestFunction,
    g: &TestFunction,
    u: f64,
    eps: f64,
) -> Result<KmsForms> {
    let beta = ctx.finite_beta()?;
    if f.support().0 < 0.0 || g.support().0 < 0.0 {
        return Err(Error::domain("the KMS forms need supports in the positive half-line"));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let (a, b) = f.support();
    let mut at_u = Complex64::new(0.0, 0.0);
    let mut at_ui = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let c = ctx.rate();
    if c * b > 700.0 || c * g.support().1 > 700.0 {
        return Err(Error::OutOfRange { value: b.max(g.support().1), range: format!("supports below {}", 700.0 / c) });
    }
    let tol = 1e-10 * f.max_abs();
    // the interpolant of f is only C1 at its nodes, so panels end there
    let mut cells: Vec<f64> = f.nodes().into_iter().filter(|x| *x > a && *x < b).collect();
    cells.insert(0, a);
    cells.push(b);
    for (y, gy) in g.nodes().into_iter().zip(g.samples()) {
        if *gy == 0.0 {
            continue;
        }
        let l = modular_flow_ray(ctx, RayDirection::Plus, u, y)?;
        for (side, acc) in [(-1.0, &mut at_u), (1.0, &mut at_ui)] {
            for cell in cells.windows(2) {
                let share = tol * (cell[1] - cell[0]) / (b - a);
                let kernel = |x: f64| factored_closed_form(beta, x, y, l, u, side, eps) * f.eval(x);
                let (val, err) = adaptive_gk(kernel, cell[0], cell[1], share, 48);
                *acc += val * *gy;
                error += err * gy.abs();
            }
        }
    }
    let dy = g.dx();
    Ok(KmsForms { at_u: at_u * dy, at_u_minus_i: at_ui * dy, error: error * dy })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_form_matches_literal_bracket() {
        let ctx = ThermalContext::new(1.0).unwrap();
        let (y, u, eps) = (2.0, 0.3, 1e-4);
        let l = modular_flow_ray(&ctx, RayDirection::Plus, u, y).unwrap();
        for x in [0.4, 1.0, l - 0.05, l + 0.2, 2.5] {
            for (side, w) in [(-1.0, Complex64::new(u, 0.0)), (1.0, Complex64::new(u, -1.0))] {
                let literal = closed_form(1.0, x, y, w, eps);
                let factored = factored_closed_form(1.0, x, y, l, u, side, eps);
                assert!((literal - factored).norm() < 1e-10 * literal.norm(), "x = {x}: {literal} vs {factored}");
            }
        }
    }

    #[test]
    fn closed_form_equals_pulled_back_kernels() {
        let ctx = ThermalContext::new(1.0).unwrap();
        let (x, y, u, eps) = (1.0, 2.0, 0.3, 1e-4);
        let forward = kms_direct(&ctx, x, y, u, eps, KmsOrder::Forward).unwrap();
        let swapped = kms_direct(&ctx, x, y, u, eps, KmsOrder::Swapped).unwrap();
        let at_u = kms_closed_form(&ctx, x, y, Complex64::new(u, 0.0), eps).unwrap();
        let at_ui = kms_closed_form(&ctx, x, y, Complex64::new(u, -1.0), eps).unwrap();
        assert!((forward - at_u).norm() < 1e-10 * forward.norm());
        assert!((swapped - at_ui).norm() < 1e-10 * swapped.norm());
    }
}
