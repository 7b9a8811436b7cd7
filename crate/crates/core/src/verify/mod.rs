//! Checks of operator-level relations inside the dimension-one Weyl model.
//!
//! Weyl operators `W(f)` act on smearing functions, so statements about the
//! modular group, translations and the positive-generator group reduce to
//! identities between transformed test functions and Gaussian matrix
//! elements.

mod suites;

pub use suites::{run_suite, verification_context, CaseRecord, Suite, VerifyReport};

use num_complex::Complex64;
use serde::Serialize;

use crate::flow_maps::modular_flow_ray;
use crate::numerics::{linear_fit, linspace};
use crate::weyl_field::{
    calibrate_position_kernel, gamma_transform, modular_transform, smeared_kms_forms, FieldSpec, Spectrum,
    StateNormalization, TestFunction, TAIL_TOLERANCE,
};
use crate::{Error, RayDirection, Result, ThermalContext, TWO_PI};

fn require_dimension_one(spec: FieldSpec) -> Result<()> {
    if spec.n == 0 {
        Ok(())
    } else {
        Err(Error::invalid("operator checks run in the n = 0 model"))
    }
}

/// One evaluation of the matrix-element bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub u: f64,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// `max{|A Omega||B Omega|, |A* Omega||B* Omega|}`.
    pub m: f64,
    /// Whether both matrix elements passed the spectral tail check.
    pub resolved: bool,
}

/// `2 M min{|exp(2 pi u) - 1|/(exp(2 pi t/beta) - 1), 1}`.
pub fn bound_rhs(ctx: &ThermalContext, m: f64, u: f64, t: f64) -> Result<f64> {
    let beta = ctx.finite_beta()?;
    let ratio = (TWO_PI * u).exp_m1().abs() / (TWO_PI * t / beta).exp_m1();
    Ok(2.0 * m * ratio.min(1.0))
}

/// Norm of `W(h) Omega` from the Gaussian formula.
fn weyl_norm(ctx: &ThermalContext, spec: FieldSpec, norm: StateNormalization, s: &Spectrum) -> Result<f64> {
    Ok(s.weyl_inner(ctx, spec, norm, s)?.re.sqrt())
}

/// Matrix-element form of the modular/translation bound for `A = W(f(. - t))`
/// in the algebra of `[t, inf)` and `B = W(g)` in that of `(-inf, 0]`:
///
/// `|(B* Omega, delta_u A Omega) - (B* Omega, T(-beta u) A Omega)| <= rhs`.
pub fn modular_bound_check(
    ctx: &ThermalContext,
    spec: FieldSpec,
    norm: StateNormalization,
    f: &TestFunction,
    g: &TestFunction,
    u: f64,
    t: f64,
) -> Result<BoundReport> {
    let sf = Spectrum::new(ctx, f);
    let sg = Spectrum::new(ctx, g);
    bound_with_spectra(ctx, spec, norm, f, &sf, g, &sg, u, t)
}

#[allow(clippy::too_many_arguments)]
fn bound_with_spectra(
    ctx: &ThermalContext,
    spec: FieldSpec,
    norm: StateNormalization,
    f: &TestFunction,
    sf: &Spectrum,
    g: &TestFunction,
    sg: &Spectrum,
    u: f64,
    t: f64,
) -> Result<BoundReport> {
    require_dimension_one(spec)?;
    let beta = ctx.finite_beta()?;
    if !(t > 0.0) {
        return Err(Error::domain(format!("the bound needs t > 0, got {t}")));
    }
    if f.support().0 < 0.0 {
        return Err(Error::domain("f must be supported in [0, inf) so that f(. - t) lies in [t, inf)"));
    }
    if g.support().1 > 0.0 {
        return Err(Error::domain("g must be supported in (-inf, 0]"));
    }
    let s_hat = sf.translated(t);
    let s_mod = Spectrum::new(ctx, &modular_transform(ctx, u, &f.translate(t), false)?);
    let s_shift = s_hat.translated(-beta * u);
    let (a, ra) = sg.weyl_inner_unchecked(ctx, spec, norm, &s_mod)?;
    let (b, rb) = sg.weyl_inner_unchecked(ctx, spec, norm, &s_shift)?;
    let lhs = (a - b).norm();

    let minus_hat = s_hat.combine(-1.0, &s_hat, 0.0);
    let minus_g = sg.combine(-1.0, sg, 0.0);
    let m = (weyl_norm(ctx, spec, norm, &s_hat)? * weyl_norm(ctx, spec, norm, sg)?)
        .max(weyl_norm(ctx, spec, norm, &minus_hat)? * weyl_norm(ctx, spec, norm, &minus_g)?);
    let rhs = bound_rhs(ctx, m, u, t)?;
    let resolved = ra.max(rb) <= TAIL_TOLERANCE;
    // An unresolved spectrum only occurs for t < u, where delta_u compresses
    // f(. - t) by exp(2 pi (t - u)) and the bound is the trivial 2M; both
    // inner products stay unit-bounded, so lhs <= 2 still holds exactly.
    if !resolved && rhs < 2.0 * m {
        return Err(Error::Quadrature(format!(
            "bound at u = {u}, t = {t}: spectral tail {:.2e} above tolerance",
            ra.max(rb)
        )));
    }
    Ok(BoundReport { u, t, lhs, rhs, margin: rhs - lhs, m, resolved })
}

/// Bound reports over the product grid `us x ts`.
pub fn modular_bound_grid(
    ctx: &ThermalContext,
    spec: FieldSpec,
    norm: StateNormalization,
    f: &TestFunction,
    g: &TestFunction,
    us: &[f64],
    ts: &[f64],
) -> Result<Vec<BoundReport>> {
    let sf = Spectrum::new(ctx, f);
    let sg = Spectrum::new(ctx, g);
    let mut out = Vec::with_capacity(us.len() * ts.len());
    for &u in us {
        for &t in ts {
            out.push(bound_with_spectra(ctx, spec, norm, f, &sf, g, &sg, u, t)?);
        }
    }
    Ok(out)
}

/// Decay of `D(t) = |delta_u A(t) Omega - T(-beta u) A(t) Omega|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub u: f64,
    pub ts: Vec<f64>,
    pub deviations: Vec<f64>,
    /// Least-squares slope of `log D` against `t`; absent when some `D` vanishes.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// RMS residual of the fit.
    pub residual: Option<f64>,
    /// `-2 pi/beta`.
    pub expected_slope: f64,
}

impl RateReport {
    /// `|slope/expected - 1|`.
    pub fn relative_slope_error(&self) -> Option<f64> {
        self.slope.map(|s| (s / self.expected_slope - 1.0).abs())
    }
}

/// `delta_u(f(. - t)) - f(. - t + beta u)` sampled on the union of both supports.
///
/// With `r(x) = L(u, x) - x - beta u` the difference is
/// `f(y + r) - f(y)`, `y = x - t + beta u`; small `r` goes through a Taylor
/// expansion so the exponentially small result keeps its relative accuracy.
fn translation_defect(ctx: &ThermalContext, f: &TestFunction, u: f64, t: f64) -> Result<(TestFunction, TestFunction)> {
    let beta = ctx.finite_beta()?;
    let c = ctx.rate();
    let shift = t - beta * u;
    let (a, b) = f.support();
    let lo1 = modular_flow_ray(ctx, RayDirection::Plus, u, a + t)?;
    let hi1 = modular_flow_ray(ctx, RayDirection::Plus, u, b + t)?;
    let support = (lo1.min(a + shift), hi1.max(b + shift));
    let d1 = f.derivative(1)?;
    let d2 = f.derivative(2)?;
    let d3 = f.derivative(3)?;
    let g = (-TWO_PI * u).exp_m1();
    let n = 2 * f.len();
    let defect = TestFunction::resampled(support, n, |x| {
        let y = x - shift;
        let q = (-c * x).exp() * g;
        if !(q > -1.0) {
            return f64::NAN;
        }
        let r = q.ln_1p() / c;
        if r.abs() < 1e-3 * (b - a) {
            r * (d1.eval(y) + r / 2.0 * (d2.eval(y) + r / 3.0 * d3.eval(y)))
        } else {
            f.eval(y + r) - f.eval(y)
        }
    })?;
    if defect.samples().iter().any(|v| v.is_nan()) {
        return Err(Error::domain(format!("delta_u is undefined on the translated support at u = {u}, t = {t}")));
    }
    Ok((defect, f.translate(shift)))
}

/// Samples `D(t)` on `ts` and fits `log D` linearly.
pub fn convergence_rate(
    ctx: &ThermalContext,
    spec: FieldSpec,
    norm: StateNormalization,
    f: &TestFunction,
    u: f64,
    ts: &[f64],
) -> Result<RateReport> {
    require_dimension_one(spec)?;
    let beta = ctx.finite_beta()?;
    if ts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("t values must be increasing"));
    }
    if f.support().0 + ts.first().copied().unwrap_or(0.0) < 0.0 {
        return Err(Error::domain("translated support must lie in the positive half-line"));
    }
    let mut deviations = Vec::with_capacity(ts.len());
    for &t in ts {
        if u == 0.0 {
            deviations.push(0.0);
            continue;
        }
        let (defect, shifted) = translation_defect(ctx, f, u, t)?;
        let sd = Spectrum::new(ctx, &defect);
        let sh = Spectrum::new(ctx, &shifted);
        // (W(h2) Omega, W(h2 + d) Omega) = exp(K(h2, d)/2 - c omega2(d, d))
        let theta = sh.symplectic(spec, &sd)?.im / 2.0;
        let a = norm.c * sd.omega2(ctx, spec, &sd)?.re;
        let d2 = -2.0 * (-a).exp_m1() + 4.0 * (-a).exp() * (theta / 2.0).sin().powi(2);
        deviations.push(d2.max(0.0).sqrt());
    }
    let expected_slope = -TWO_PI / beta;
    let (slope, intercept, residual) = if deviations.iter().all(|d| *d > 0.0) && ts.len() >= 2 {
        let logs: Vec<f64> = deviations.iter().map(|d| d.ln()).collect();
        let (s, i, r) = linear_fit(ts, &logs);
        (Some(s), Some(i), Some(r))
    } else {
        (None, None, None)
    };
    Ok(RateReport { u, ts: ts.to_vec(), deviations, slope, intercept, residual, expected_slope })
}

/// Largest difference of two grid functions, sampled on a grid four times
/// finer than the coarser input over the union of their supports.
fn sup_distance(p: &TestFunction, q: &TestFunction) -> f64 {
    let lo = p.support().0.min(q.support().0);
    let hi = p.support().1.max(q.support().1);
    let n = 4 * p.len().max(q.len());
    linspace(lo, hi, n)
        .into_iter()
        .map(|x| (p.eval(x) - q.eval(x)).abs())
        .fold(0.0, f64::max)
}

/// Translation/modular exchange on smearing functions:
/// `delta_u((delta_{-u} f)(. - t))` against `(delta_v f)(. - phi(u, t))`,
/// `v = (phi(u, t) - t)/beta`. Returns the sup-norm gap.
pub fn translation_exchange_relation(ctx: &ThermalContext, f: &TestFunction, u: f64, t: f64) -> Result<f64> {
    let beta = ctx.finite_beta()?;
    let phi_t = modular_flow_ray(ctx, RayDirection::Plus, u, t)?;
    let v = (phi_t - t) / beta;
    let left = modular_transform(ctx, u, &modular_transform(ctx, -u, f, false)?.translate(t), false)?;
    let right = modular_transform(ctx, v, f, false)?.translate(phi_t);
    Ok(sup_distance(&left, &right))
}

/// Translation covariance of the positive-generator group on smearing
/// functions: `T(t) gamma_tau T(-t)` against `gamma_{exp(2 pi t/beta) tau}`.
pub fn gamma_scaling_relation(ctx: &ThermalContext, f: &TestFunction, tau: f64, t: f64) -> Result<f64> {
    let scaled = (ctx.rate() * t).exp() * tau;
    let left = gamma_transform(ctx, tau, &f.translate(-t))?.translate(t);
    let right = gamma_transform(ctx, scaled, f)?;
    Ok(sup_distance(&left, &right))
}

/// One `u` of the KMS boundary check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KmsCase {
    pub u: f64,
    /// `|C F(u - i) - omega2(delta_u g, f)|`, the KMS boundary statement.
    pub deviation: f64,
    /// `|C F(u) - omega2(f, delta_u g)|`, the undeformed side.
    pub lower_deviation: f64,
    /// Scale of the compared values.
    pub magnitude: f64,
    pub quadrature_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KmsReport {
    pub cases: Vec<KmsCase>,
    pub max_deviation: f64,
    /// Momentum-to-position constant used for the comparison.
    pub calibration: [f64; 2],
}

/// Reference pair for the position-kernel constant: two bumps a quarter
/// period apart, so the product trapezoid rule is spectrally accurate.
pub fn reference_calibration(ctx: &ThermalContext, eps: f64) -> Result<Complex64> {
    let beta = ctx.finite_beta()?;
    let f = TestFunction::bump(1.5 * beta, 0.5 * beta, 513)?;
    let g = TestFunction::bump(0.25 * beta, 0.5 * beta, 513)?;
    calibrate_position_kernel(ctx, &f, &g, eps)
}

/// Smears the closed-form kernel of `omega2(f, delta_w g)` at `w = u` and at
/// the continued point `w = u - i` and compares, after calibration, with the
/// momentum-space forms in both orders at the same regularization `eps`.
///
/// In the ordering convention of the momentum forms the unshifted kernel is
/// `omega2(delta_u g, f)` and the continued one is `omega2(f, delta_u g)`.
pub fn kms_boundary_check(
    ctx: &ThermalContext,
    f: &TestFunction,
    g: &TestFunction,
    us: &[f64],
    eps: f64,
) -> Result<KmsReport> {
    let spec = FieldSpec::new(0);
    let cal = reference_calibration(ctx, eps)?;
    let sf = Spectrum::new(ctx, f);
    let mut cases = Vec::with_capacity(us.len());
    for &u in us {
        let h = modular_transform(ctx, u, g, false)?;
        let sh = Spectrum::new(ctx, &h);
        let upper_target = sf.omega2_damped(ctx, spec, &sh, eps)?;
        let lower_target = sh.omega2_damped(ctx, spec, &sf, eps)?;
        let forms = smeared_kms_forms(ctx, f, g, u, eps)?;
        let upper = forms.at_u_minus_i * cal;
        let lower = forms.at_u * cal;
        cases.push(KmsCase {
            u,
            deviation: (upper - upper_target).norm(),
            lower_deviation: (lower - lower_target).norm(),
            magnitude: upper_target.norm().max(lower_target.norm()),
            quadrature_error: forms.error * cal.norm(),
        });
    }
    let max_deviation = cases.iter().map(|c| c.deviation).fold(0.0, f64::max);
    Ok(KmsReport { cases, max_deviation, calibration: [cal.re, cal.im] })
}
