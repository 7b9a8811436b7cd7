//! Grid primitives shared by the field and verification modules.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Uniformly spaced values `x0 + i dx`, `i = 0..n`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect()
        }
    }
}

/// First-derivative estimates on a uniform grid: fourth-order central
/// differences in the interior, lower order near the ends.
fn node_slopes(y: &[f64], dx: f64) -> Vec<f64> {
    let n = y.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        if n == 2 {
            let s = (y[1] - y[0]) / dx;
            m[0] = s;
            m[1] = s;
        }
        return m;
    }
    for i in 0..n {
        m[i] = if i >= 2 && i + 2 < n {
            (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * dx)
        } else if i == 0 {
            (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dx)
        } else if i == n - 1 {
            (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dx)
        } else {
            (y[i + 1] - y[i - 1]) / (2.0 * dx)
        };
    }
    m
}

/// Piecewise cubic Hermite interpolant on a uniform grid, zero outside it.
#[derive(Clone, Debug)]
pub struct UniformCubic {
    x0: f64,
    dx: f64,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl UniformCubic {
    pub fn new(x0: f64, dx: f64, y: &[f64]) -> Self {
        UniformCubic { x0, dx, y: y.to_vec(), slope: node_slopes(y, dx) }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.y.len();
        if n == 0 || !x.is_finite() {
            return 0.0;
        }
        let s = (x - self.x0) / self.dx;
        let last = (n - 1) as f64;
        // tolerate rounding at the grid ends
        if s < -1e-9 || s > last + 1e-9 {
            return 0.0;
        }
        let s = s.clamp(0.0, last);
        let i = (s.floor() as usize).min(n.saturating_sub(2));
        if n == 1 {
            return self.y[0];
        }
        let t = s - i as f64;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.slope[i] * self.dx, self.slope[i + 1] * self.dx);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1
    }
}

/// Running integral from the first node: composite Simpson at even nodes,
/// a cubic-exact single-panel rule at odd ones.
pub fn cumulative_simpson(y: &[f64], dx: f64) -> Vec<f64> {
    let n = y.len();
    let mut out = vec![0.0; n];
    if n < 4 {
        for k in 1..n {
            out[k] = out[k - 1] + 0.5 * dx * (y[k - 1] + y[k]);
        }
        return out;
    }
    for k in 1..n {
        out[k] = if k % 2 == 0 {
            out[k - 2] + dx / 3.0 * (y[k - 2] + 4.0 * y[k - 1] + y[k])
        } else if k + 2 < n {
            out[k - 1] + dx / 24.0 * (9.0 * y[k - 1] + 19.0 * y[k] - 5.0 * y[k + 1] + y[k + 2])
        } else if k + 1 < n {
            out[k - 1] + dx / 24.0 * (-y[k - 2] + 13.0 * y[k - 1] + 13.0 * y[k] - y[k + 1])
        } else {
            out[k - 1] + dx / 24.0 * (y[k - 3] - 5.0 * y[k - 2] + 19.0 * y[k - 1] + 9.0 * y[k])
        };
    }
    out
}

/// Trapezoid rule on a uniform grid.
pub fn trapezoid(y: &[f64], dx: f64) -> f64 {
    match y.len() {
        0 | 1 => 0.0,
        n => dx * (y[1..n - 1].iter().sum::<f64>() + 0.5 * (y[0] + y[n - 1])),
    }
}

/// Result of a grid derivative together with the estimate that chose it.
#[derive(Clone, Debug)]
pub struct GridDerivative {
    pub values: Vec<f64>,
    pub spectral: bool,
    /// Spectral tail (relative) or FD disagreement (relative), whichever applied.
    pub noise: f64,
}

/// Relative spectral magnitude of the top frequency band below which the
/// spectral derivative is trusted.
pub const SPECTRAL_TAIL: f64 = 1e-12;

/// `order`-th derivative of samples that vanish at both grid ends.
///
/// Zero-pads to a power of two, multiplies by `(i k)^order` when the
/// spectrum has decayed below [`SPECTRAL_TAIL`], and falls back to repeated
/// fourth-order differences otherwise.
pub fn grid_derivative(y: &[f64], dx: f64, order: u32) -> GridDerivative {
    if order == 0 {
        return GridDerivative { values: y.to_vec(), spectral: true, noise: 0.0 };
    }
    let n = y.len();
    let m = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(m, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(m).process(&mut buf);

    let peak = buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let band = m / 16;
    let tail = (m / 2 - band..=m / 2 + band).map(|k| buf[k].norm()).fold(0.0, f64::max);
    let rel_tail = if peak > 0.0 { tail / peak } else { 0.0 };

    if rel_tail < SPECTRAL_TAIL {
        let scale = std::f64::consts::TAU / (m as f64 * dx);
        for (k, z) in buf.iter_mut().enumerate() {
            let freq = if k <= m / 2 { k as f64 } else { k as f64 - m as f64 };
            if k == m / 2 && order % 2 == 1 {
                *z = Complex64::new(0.0, 0.0);
                continue;
            }
            *z *= Complex64::new(0.0, freq * scale).powu(order);
        }
        planner.plan_fft_inverse(m).process(&mut buf);
        let values = buf[..n].iter().map(|z| z.re / m as f64).collect();
        return GridDerivative { values, spectral: true, noise: rel_tail };
    }

    let d4 = repeated_difference(y, dx, order, true);
    let d2 = repeated_difference(y, dx, order, false);
    let scale = d4.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let diff = d4.iter().zip(&d2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let noise = if scale > 0.0 { diff / scale } else { 0.0 };
    GridDerivative { values: d4, spectral: false, noise }
}

fn repeated_difference(y: &[f64], dx: f64, order: u32, fourth: bool) -> Vec<f64> {
    let mut cur = y.to_vec();
    let n = cur.len();
    let at = |v: &[f64], i: isize| -> f64 {
        if i < 0 || i as usize >= n {
            0.0
        } else {
            v[i as usize]
        }
    };
    for _ in 0..order {
        let next: Vec<f64> = (0..n as isize)
            .map(|i| {
                if fourth {
                    (at(&cur, i - 2) - 8.0 * at(&cur, i - 1) + 8.0 * at(&cur, i + 1) - at(&cur, i + 2))
                        / (12.0 * dx)
                } else {
                    (at(&cur, i + 1) - at(&cur, i - 1)) / (2.0 * dx)
                }
            })
            .collect();
        cur = next;
    }
    cur
}

/// `(1/2pi) sum_j w_j y_j exp(-i p x_j) dx` (trapezoid weights) at each `p`.
pub fn fourier_sum(x0: f64, dx: f64, y: &[f64], p: &[f64]) -> Vec<Complex64> {
    // trim exact zeros at both ends
    let first = y.iter().position(|&v| v != 0.0);
    let Some(first) = first else {
        return vec![Complex64::new(0.0, 0.0); p.len()];
    };
    let last = y.iter().rposition(|&v| v != 0.0).unwrap_or(first);
    let n = y.len();
    let weights: Vec<f64> = (first..=last)
        .map(|j| if j == 0 || j == n - 1 { 0.5 * y[j] } else { y[j] })
        .collect();
    let start = x0 + dx * first as f64;
    let norm = dx / std::f64::consts::TAU;
    p.iter()
        .map(|&pk| {
            let step = Complex64::from_polar(1.0, -pk * dx);
            let mut z = Complex64::from_polar(1.0, -pk * start);
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &w) in weights.iter().enumerate() {
                if j % 256 == 255 {
                    // reseed to stop the rotation recurrence from drifting
                    z = Complex64::from_polar(1.0, -pk * (start + dx * j as f64));
                }
                acc += z * w;
                z *= step;
            }
            acc * norm
        })
        .collect()
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod value, Kronrod/Gauss disagreement and `int |f|` over `[a, b]`.
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * GK_WK[7];
    let mut gauss = fc * GK_WG[3];
    let mut abs = fc.norm() * GK_WK[7];
    for i in 0..7 {
        let dx = h * GK_X[i];
        let (l, r) = (f(c - dx), f(c + dx));
        kron += (l + r) * GK_WK[i];
        abs += (l.norm() + r.norm()) * GK_WK[i];
        if i % 2 == 1 {
            gauss += (l + r) * GK_WG[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm(), abs * h.abs())
}

/// Adaptive 7/15-point Gauss-Kronrod quadrature of a complex integrand.
///
/// Bisects until each panel's Kronrod/Gauss disagreement is below its share
/// of `tol`, below the rounding level of `int |f|` on the panel, or
/// `max_depth` deep; the returned error is the summed disagreement.
pub fn adaptive_gk<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> (Complex64, f64) {
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    let width = b - a;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, e, abs) = gk15(&f, lo, hi);
        let budget = tol * (hi - lo) / width;
        let floor = 64.0 * f64::EPSILON * abs;
        if e <= budget || e <= floor || depth >= max_depth {
            total += val;
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    (total, err)
}

/// Least-squares line `y = slope x + intercept`; returns `(slope, intercept, rms residual)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum::<f64>() / n).sqrt();
    (slope, intercept, rms)
}
