use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FieldSpec, TestFunction};
use crate::flow_maps::Beta;
use crate::numerics::fourier_sum;
use crate::{Error, Result, ThermalContext};

/// Relative size of the momentum integrand at the cutoff above which a
/// quadrature is reported as unresolved.
pub const TAIL_TOLERANCE: f64 = 1e-9;

/// `W~2(p) = p Q(p^2)/(1 - exp(-beta p))`, with its limit at `p = 0`.
pub fn two_point_momentum(ctx: &ThermalContext, spec: FieldSpec, p: f64) -> f64 {
    let m = spec.symbol(p);
    match ctx.beta {
        Beta::Infinite => {
            if p > 0.0 {
                m
            } else {
                0.0
            }
        }
        Beta::Finite(beta) => {
            if p == 0.0 {
                if spec.n == 0 {
                    1.0 / beta
                } else {
                    0.0
                }
            } else if p > 0.0 {
                m / -(-beta * p).exp_m1()
            } else {
                m * (beta * p).exp() / (beta * p).exp_m1()
            }
        }
    }
}

/// `(1/beta^2) sinh^-2(pi (xi + i eps)/beta)`, the dimension-one kernel.
pub fn two_point_position(ctx: &ThermalContext, spec: FieldSpec, xi: f64, eps: f64) -> Result<Complex64> {
    if spec.n != 0 {
        return Err(Error::invalid("the position-space kernel is only available for n = 0"));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("epsilon must be positive, got {eps}")));
    }
    let beta = ctx.finite_beta()?;
    Ok(position_kernel(beta, Complex64::new(xi, eps)))
}

pub(crate) fn position_kernel(beta: f64, z: Complex64) -> Complex64 {
    let s = (z * (std::f64::consts::PI / beta)).sinh();
    (s * s * (beta * beta)).inv()
}

/// Samples of `f~` on the symmetric momentum grid of a context.
#[derive(Clone, Debug)]
pub struct Spectrum {
    p: Vec<f64>,
    weight: Vec<f64>,
    values: Vec<Complex64>,
}

impl Spectrum {
    /// Transform of `f`. Nodes are `p_k = (k - (np-1)/2) dp`, so `p` and `-p`
    /// are both nodes and the values obey `f~(-p) = conj f~(p)` exactly.
    pub fn new(ctx: &ThermalContext, f: &TestFunction) -> Self {
        let np = ctx.np;
        let dp = 2.0 * ctx.pmax / (np - 1) as f64;
        let mid = (np - 1) as f64 / 2.0;
        let p: Vec<f64> = (0..np).map(|k| (k as f64 - mid) * dp).collect();
        let mut weight = vec![dp; np];
        weight[0] *= 0.5;
        weight[np - 1] *= 0.5;
        let half = np.div_ceil(2);
        let mut values = fourier_sum(f.x0(), f.dx(), f.samples(), &p[..half]);
        values.resize(np, Complex64::new(0.0, 0.0));
        for k in half..np {
            values[k] = values[np - 1 - k].conj();
        }
        if np % 2 == 1 {
            values[np / 2].im = 0.0;
        }
        Spectrum { p, weight, values }
    }

    pub fn momenta(&self) -> &[f64] {
        &self.p
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Spectrum of `x -> f(x - t)`.
    pub fn translated(&self, t: f64) -> Spectrum {
        let values = self
            .p
            .iter()
            .zip(&self.values)
            .map(|(&p, &v)| v * Complex64::from_polar(1.0, -p * t))
            .collect();
        Spectrum { p: self.p.clone(), weight: self.weight.clone(), values }
    }

    /// `a f + b g` for spectra on the same grid.
    pub fn combine(&self, a: f64, other: &Spectrum, b: f64) -> Spectrum {
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x * a + y * b).collect();
        Spectrum { p: self.p.clone(), weight: self.weight.clone(), values }
    }

    /// Multiplies by `(i p)^n`: the spectrum of the `n`-th derivative.
    pub fn differentiated(&self, n: u32) -> Spectrum {
        let values = self
            .p
            .iter()
            .zip(&self.values)
            .map(|(&p, &v)| v * Complex64::new(0.0, p).powu(n))
            .collect();
        Spectrum { p: self.p.clone(), weight: self.weight.clone(), values }
    }

    /// `sum_k w_k m(p_k) conj(f~) g~` summed over mirror pairs, so integrands
    /// odd in `p` cancel exactly, and the size of the integrand at the cutoff
    /// relative to its peak.
    fn pair_sum(&self, other: &Spectrum, m: impl Fn(f64) -> f64) -> Result<(Complex64, f64)> {
        if self.p.len() != other.p.len() {
            return Err(Error::invalid("spectra on different momentum grids"));
        }
        let np = self.p.len();
        let term = |k: usize| self.values[k].conj() * other.values[k] * (self.weight[k] * m(self.p[k]));
        let mut total = Complex64::new(0.0, 0.0);
        let mut peak: f64 = 0.0;
        for k in 0..np / 2 {
            let (a, b) = (term(k), term(np - 1 - k));
            peak = peak.max(a.norm()).max(b.norm());
            total += a + b;
        }
        if np % 2 == 1 {
            let c = term(np / 2);
            peak = peak.max(c.norm());
            total += c;
        }
        let edge = term(0).norm().max(term(np - 1).norm());
        let ratio = if peak > 0.0 { edge / peak } else { 0.0 };
        Ok((total, ratio))
    }

    fn pair_form(&self, other: &Spectrum, m: impl Fn(f64) -> f64, what: &str) -> Result<Complex64> {
        let (total, ratio) = self.pair_sum(other, m)?;
        if ratio > TAIL_TOLERANCE {
            return Err(Error::Quadrature(format!("{what}: integrand at the cutoff is {ratio:.2e} of its peak")));
        }
        Ok(total)
    }

    /// [`Spectrum::weyl_inner`] without the tail check; also returns the
    /// larger of the two cutoff ratios.
    pub fn weyl_inner_unchecked(
        &self,
        ctx: &ThermalContext,
        spec: FieldSpec,
        norm: StateNormalization,
        other: &Spectrum,
    ) -> Result<(Complex64, f64)> {
        let (k, rk) = self.pair_sum(other, |p| spec.symbol(p))?;
        let diff = other.combine(1.0, self, -1.0);
        let (w, rw) = diff.pair_sum(&diff, |p| two_point_momentum(ctx, spec, p))?;
        Ok(((k * 0.5 - w.re * norm.c).exp(), rk.max(rw)))
    }

    pub fn symplectic(&self, spec: FieldSpec, other: &Spectrum) -> Result<Complex64> {
        self.pair_form(other, |p| spec.symbol(p), "symplectic form")
    }

    pub fn omega2(&self, ctx: &ThermalContext, spec: FieldSpec, other: &Spectrum) -> Result<Complex64> {
        self.pair_form(other, |p| two_point_momentum(ctx, spec, p), "two-point function")
    }

    /// Two-point form with `exp(-eps p)` damping, the transform of the
    /// kernel at `xi + i eps`.
    pub fn omega2_damped(&self, ctx: &ThermalContext, spec: FieldSpec, other: &Spectrum, eps: f64) -> Result<Complex64> {
        self.pair_form(other, |p| two_point_momentum(ctx, spec, p) * (-eps * p).exp(), "damped two-point function")
    }

    /// `(W(g) Omega, W(f) Omega)` with `self = g~`, `other = f~`.
    pub fn weyl_inner(
        &self,
        ctx: &ThermalContext,
        spec: FieldSpec,
        norm: StateNormalization,
        other: &Spectrum,
    ) -> Result<Complex64> {
        let k = self.symplectic(spec, other)?;
        let diff = other.combine(1.0, self, -1.0);
        let w = diff.omega2(ctx, spec, &diff)?;
        Ok((k * 0.5 - w.re * norm.c).exp())
    }
}

pub fn symplectic_k(ctx: &ThermalContext, spec: FieldSpec, f: &TestFunction, g: &TestFunction) -> Result<Complex64> {
    Spectrum::new(ctx, f).symplectic(spec, &Spectrum::new(ctx, g))
}

pub fn omega2(ctx: &ThermalContext, spec: FieldSpec, f: &TestFunction, g: &TestFunction) -> Result<Complex64> {
    Spectrum::new(ctx, f).omega2(ctx, spec, &Spectrum::new(ctx, g))
}

pub fn omega2_damped(
    ctx: &ThermalContext,
    spec: FieldSpec,
    f: &TestFunction,
    g: &TestFunction,
    eps: f64,
) -> Result<Complex64> {
    Spectrum::new(ctx, f).omega2_damped(ctx, spec, &Spectrum::new(ctx, g), eps)
}

/// Constant `c` in `omega(W(f)) = exp(-c omega2(f, f))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateNormalization {
    pub c: f64,
}

impl Default for StateNormalization {
    fn default() -> Self {
        StateNormalization { c: 1.0 }
    }
}

impl StateNormalization {
    /// The textbook quasi-free value.
    pub const HALF: StateNormalization = StateNormalization { c: 0.5 };

    pub fn new(c: f64) -> Result<Self> {
        if c > 0.0 && c.is_finite() {
            Ok(StateNormalization { c })
        } else {
            Err(Error::invalid(format!("normalization must be positive, got {c}")))
        }
    }

    /// Gram matrix `G_ij = (W(f_i) Omega, W(f_j) Omega)`.
    pub fn gram(&self, ctx: &ThermalContext, spec: FieldSpec, fs: &[TestFunction]) -> Result<Vec<Vec<Complex64>>> {
        let spectra: Vec<Spectrum> = fs.iter().map(|f| Spectrum::new(ctx, f)).collect();
        let mut g = vec![vec![Complex64::new(0.0, 0.0); fs.len()]; fs.len()];
        for i in 0..fs.len() {
            for j in 0..fs.len() {
                g[i][j] = spectra[i].weyl_inner(ctx, spec, *self, &spectra[j])?;
            }
        }
        Ok(g)
    }

    /// Smallest eigenvalue of the Gram matrix of `fs`.
    pub fn gram_min_eigenvalue(&self, ctx: &ThermalContext, spec: FieldSpec, fs: &[TestFunction]) -> Result<f64> {
        let g = self.gram(ctx, spec, fs)?;
        Ok(hermitian_min_eigenvalue(&g))
    }

    /// `c = 1` if its Gram matrices on `fs` are positive semidefinite to
    /// `1e-8`, else the quasi-free `c = 1/2`; the flag reports the fallback.
    pub fn validated(ctx: &ThermalContext, spec: FieldSpec, fs: &[TestFunction]) -> Result<(Self, bool)> {
        let default = Self::default();
        if default.gram_min_eigenvalue(ctx, spec, fs)? >= -1e-8 {
            Ok((default, false))
        } else {
            Ok((Self::HALF, true))
        }
    }
}

/// Smallest eigenvalue of a Hermitian matrix, via the real symmetric
/// embedding `[[A, -B], [B, A]]` and cyclic Jacobi rotations.
pub(crate) fn hermitian_min_eigenvalue(h: &[Vec<Complex64>]) -> f64 {
    let n = h.len();
    let m = 2 * n;
    let mut a = vec![vec![0.0; m]; m];
    for i in 0..n {
        for j in 0..n {
            let z = h[i][j];
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    let scale: f64 = a.iter().flatten().map(|v| v * v).sum::<f64>().max(1e-300);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    off += a[i][j] * a[i][j];
                }
            }
        }
        if off < 1e-30 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

/// `(W(g) Omega, W(f) Omega) = exp(K(g, f)/2) exp(-c omega2(f - g, f - g))`.
pub fn weyl_inner(
    ctx: &ThermalContext,
    spec: FieldSpec,
    norm: StateNormalization,
    g: &TestFunction,
    f: &TestFunction,
) -> Result<Complex64> {
    Spectrum::new(ctx, g).weyl_inner(ctx, spec, norm, &Spectrum::new(ctx, f))
}
