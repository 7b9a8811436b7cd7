use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::numerics::{cumulative_simpson, grid_derivative, linspace, trapezoid, UniformCubic};
use crate::{Error, Result};

/// On-disk form of a [`TestFunction`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunctionFile {
    pub x0: f64,
    pub dx: f64,
    pub support: [f64; 2],
    pub samples: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compact_support: Option<bool>,
}

/// Real function sampled at `x0 + i dx`, vanishing outside `support`.
///
/// `compact` is false for results that keep growing past the right end of
/// the grid; those are only meaningful on the grid itself.
#[derive(Clone, Debug)]
pub struct TestFunction {
    x0: f64,
    dx: f64,
    samples: Vec<f64>,
    support: (f64, f64),
    compact: bool,
    interp: UniformCubic,
}

/// Relative slack for deciding whether a node lies inside the support.
const EDGE_SLACK: f64 = 1e-9;

impl TestFunction {
    pub fn new(x0: f64, dx: f64, samples: Vec<f64>, support: (f64, f64)) -> Result<Self> {
        Self::build(x0, dx, samples, support, true)
    }

    fn build(x0: f64, dx: f64, samples: Vec<f64>, support: (f64, f64), compact: bool) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite() && x0.is_finite()) {
            return Err(Error::invalid(format!("grid needs finite x0 and dx > 0, got x0 = {x0}, dx = {dx}")));
        }
        let (a, b) = support;
        if !(a <= b && a.is_finite() && b.is_finite()) {
            return Err(Error::invalid(format!("bad support [{a}, {b}]")));
        }
        if let Some(v) = samples.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite sample {v}")));
        }
        let n = samples.len();
        let end = x0 + dx * (n.saturating_sub(1)) as f64;
        let slack = EDGE_SLACK * dx;
        if a < x0 - slack || b > end + slack {
            return Err(Error::invalid(format!("support [{a}, {b}] not covered by grid [{x0}, {end}]")));
        }
        let interior = samples
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let x = x0 + dx * *i as f64;
                x > a + slack && x < b - slack
            })
            .count();
        if interior < 8 {
            return Err(Error::Resolution(format!("only {interior} grid nodes inside the support, need 8")));
        }
        for (i, v) in samples.iter().enumerate() {
            let x = x0 + dx * i as f64;
            if *v != 0.0 && (x < a - slack || x > b + slack) {
                return Err(Error::invalid(format!("sample {v} at x = {x} lies outside the support [{a}, {b}]")));
            }
        }
        let interp = UniformCubic::new(x0, dx, &samples);
        Ok(TestFunction { x0, dx, samples, support, compact, interp })
    }

    /// Samples `f` at `n` nodes spanning exactly `support`.
    pub fn from_fn(support: (f64, f64), n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let (a, b) = support;
        if n < 10 || !(b > a) {
            return Err(Error::invalid("need an interval with at least 10 nodes"));
        }
        let xs = linspace(a, b, n);
        let samples = xs.iter().map(|&x| f(x)).collect();
        Self::new(a, (b - a) / (n - 1) as f64, samples, support)
    }

    /// `exp(-1/(1 - ((x - center)/half_width)^2))` on `(center - w, center + w)`.
    pub fn bump(center: f64, half_width: f64, n: usize) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::invalid("bump half-width must be positive"));
        }
        Self::from_fn((center - half_width, center + half_width), n, |x| {
            bump_profile((x - center) / half_width)
        })
    }

    pub fn zero_like(other: &TestFunction) -> Self {
        let samples = vec![0.0; other.samples.len()];
        let mut z = other.clone();
        z.interp = UniformCubic::new(other.x0, other.dx, &samples);
        z.samples = samples;
        z
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn is_compact(&self) -> bool {
        self.compact
    }

    pub fn grid_end(&self) -> f64 {
        self.x0 + self.dx * (self.samples.len() - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.samples.len()).map(|i| self.x0 + self.dx * i as f64).collect()
    }

    /// Interpolated value; zero outside the grid.
    pub fn eval(&self, x: f64) -> f64 {
        self.interp.eval(x)
    }

    /// `x -> f(x - t)`, exact on the samples.
    pub fn translate(&self, t: f64) -> TestFunction {
        let mut out = self.clone();
        out.x0 += t;
        out.support = (self.support.0 + t, self.support.1 + t);
        out.interp = UniformCubic::new(out.x0, out.dx, &out.samples);
        out
    }

    pub fn scale(&self, k: f64) -> TestFunction {
        let samples: Vec<f64> = self.samples.iter().map(|v| k * v).collect();
        let mut out = self.clone();
        out.interp = UniformCubic::new(out.x0, out.dx, &samples);
        out.samples = samples;
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.samples, self.dx)
    }

    /// Running integral from the first grid node.
    pub fn cumulative_integral(&self) -> Vec<f64> {
        cumulative_simpson(&self.samples, self.dx)
    }

    /// `order`-th derivative on the same grid.
    ///
    /// Spectral when the samples are resolved, fourth-order differences
    /// otherwise; fails when the difference estimate is noisy.
    pub fn derivative(&self, order: u32) -> Result<TestFunction> {
        if order == 0 {
            return Ok(self.clone());
        }
        let d = grid_derivative(&self.samples, self.dx, order);
        if !d.spectral && d.noise > 1e-3 {
            return Err(Error::Resolution(format!(
                "derivative of order {order} is not resolved (difference noise {:.2e})",
                d.noise
            )));
        }
        // roundoff leaks outside the support; the exact derivative vanishes there
        let (a, b) = self.support;
        let slack = EDGE_SLACK * self.dx;
        let samples = d
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let x = self.x0 + self.dx * i as f64;
                if x < a - slack || x > b + slack {
                    0.0
                } else {
                    v
                }
            })
            .collect();
        Self::build(self.x0, self.dx, samples, self.support, self.compact)
    }

    /// Grid function whose support may extend to the right end of the grid.
    pub(crate) fn open_ended(x0: f64, dx: f64, samples: Vec<f64>, support: (f64, f64)) -> Result<Self> {
        Self::build(x0, dx, samples, support, false)
    }

    /// Resamples onto `n` nodes spanning `support`, with `value(x)` at each node.
    pub(crate) fn resampled(support: (f64, f64), n: usize, value: impl Fn(f64) -> f64) -> Result<Self> {
        let (a, b) = support;
        let xs = linspace(a, b, n);
        let samples = xs.iter().map(|&x| value(x)).collect();
        Self::new(a, (b - a) / (n - 1) as f64, samples, support)
    }

    pub fn to_file(&self) -> TestFunctionFile {
        TestFunctionFile {
            x0: self.x0,
            dx: self.dx,
            support: [self.support.0, self.support.1],
            samples: self.samples.clone(),
            compact_support: (!self.compact).then_some(false),
        }
    }

    pub fn from_file(file: TestFunctionFile) -> Result<Self> {
        let compact = file.compact_support.unwrap_or(true);
        Self::build(file.x0, file.dx, file.samples, (file.support[0], file.support[1]), compact)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// `exp(-1/(1 - s^2))` for `|s| < 1`, zero otherwise.
pub(crate) fn bump_profile(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}
