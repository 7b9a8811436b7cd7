use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{flow_2d, flow_domain, FlowKind, Region, SpacetimePoint};
use crate::numerics::linspace;
use crate::{Error, Result, ThermalContext};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureFormat {
    #[default]
    Csv,
    Json,
    Svg,
}

impl FromStr for FigureFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(FigureFormat::Csv),
            "json" => Ok(FigureFormat::Json),
            "svg" => Ok(FigureFormat::Svg),
            _ => Err(Error::invalid(format!("unknown figure format {s:?}"))),
        }
    }
}

/// Seeds and sampling for one family of flow lines, in units of beta.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureSpec {
    pub region: Region,
    pub flow: FlowKind,
    pub seeds: Vec<SpacetimePoint>,
    /// Parameter window: `u` for modular flows, `s/beta` for gamma flows with
    /// the per-line rescaling of [`figure_data`]. Clipped to the flow domain.
    pub range: (f64, f64),
    pub samples: usize,
}

impl FigureSpec {
    /// One of the four standard figures: modular cone, modular wedge, gamma
    /// cone, gamma wedge, each with `seeds` lines.
    pub fn standard(ctx: &ThermalContext, which: u8, seeds: usize) -> Result<Self> {
        let beta = ctx.finite_beta()?;
        if seeds == 0 {
            return Err(Error::invalid("a figure needs at least one seed"));
        }
        let spread = linspace(-2.2 * beta, 2.2 * beta, seeds);
        let (region, flow, seeds, range) = match which {
            1 => (
                Region::ForwardCone,
                FlowKind::Modular,
                spread.iter().map(|&x1| SpacetimePoint::new(2.5 * beta, x1)).collect(),
                (-0.3, 2.0),
            ),
            2 => (
                Region::RightWedge,
                FlowKind::Modular,
                spread.iter().map(|&x0| SpacetimePoint::new(x0, 2.5 * beta)).collect(),
                (-1.5, 1.5),
            ),
            3 => (
                Region::ForwardCone,
                FlowKind::Gamma,
                spread.iter().map(|&x1| SpacetimePoint::new(0.0, x1)).collect(),
                (-1.0, 2.0),
            ),
            4 => (
                Region::RightWedge,
                FlowKind::Gamma,
                spread.iter().map(|&x0| SpacetimePoint::new(x0, 0.0)).collect(),
                (-1.0, 1.0),
            ),
            _ => return Err(Error::invalid(format!("figure number must be 1-4, got {which}"))),
        };
        Ok(FigureSpec { region, flow, seeds, range, samples: 241 })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureLine {
    pub id: usize,
    pub seed: [f64; 2],
    #[serde(skip)]
    pub params: Vec<f64>,
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureData {
    pub region: String,
    pub flow: String,
    pub beta: f64,
    pub lines: Vec<FigureLine>,
}

/// Gamma-flow scale at a seed. The flows commute with translations up to the
/// rescaling `tau -> exp(c t) tau`, so parametrizing by `s = exp(-c t) tau`
/// makes translated seeds trace translated curves sample by sample.
fn gamma_scale(c: f64, region: Region, seed: SpacetimePoint) -> f64 {
    match region {
        Region::ForwardCone => (c * seed.x0).exp(),
        Region::BackwardCone => (-c * seed.x0).exp(),
        Region::RightWedge | Region::LeftWedge => (c * seed.x1).exp(),
    }
}

/// Samples every line of `spec`. Gamma lines use the rescaled parameter and
/// stop just inside the flow domain when the window reaches past it.
pub fn figure_data(ctx: &ThermalContext, spec: &FigureSpec) -> Result<FigureData> {
    let beta = ctx.finite_beta()?;
    let c = ctx.rate();
    let mut lines = Vec::with_capacity(spec.seeds.len());
    for (id, &seed) in spec.seeds.iter().enumerate() {
        let scale = match spec.flow {
            FlowKind::Modular => 1.0,
            FlowKind::Gamma => gamma_scale(c, spec.region, seed),
        };
        let unit = match spec.flow {
            FlowKind::Modular => 1.0,
            FlowKind::Gamma => beta,
        };
        let (lo, hi) = flow_domain(ctx, spec.region, spec.flow, seed);
        let shrink = |v: f64| if v.is_finite() { v - 1e-3 * v.abs() * v.signum() } else { v };
        let a = (spec.range.0 * unit).max(shrink(lo / scale));
        let b = (spec.range.1 * unit).min(shrink(hi / scale));
        if !(a < b) {
            return Err(Error::domain(format!("seed ({seed}) has an empty parameter window")));
        }
        let params = linspace(a, b, spec.samples);
        let points = params
            .iter()
            .map(|&s| flow_2d(ctx, spec.region, spec.flow, s * scale, seed).map(|q| [q.x0, q.x1]))
            .collect::<Result<Vec<_>>>()?;
        lines.push(FigureLine { id, seed: [seed.x0, seed.x1], params, points });
    }
    Ok(FigureData {
        region: spec.region.name().to_string(),
        flow: spec.flow.name().to_string(),
        beta,
        lines,
    })
}

/// Largest pointwise gap between the lines of `spec` and those of the same
/// spec with every seed moved by `delta`, after undoing the shift.
pub fn check_seed_translation(ctx: &ThermalContext, spec: &FigureSpec, delta: SpacetimePoint) -> Result<f64> {
    let mut moved = spec.clone();
    for s in &mut moved.seeds {
        s.x0 += delta.x0;
        s.x1 += delta.x1;
    }
    let base = figure_data(ctx, spec)?;
    let shifted = figure_data(ctx, &moved)?;
    let mut worst: f64 = 0.0;
    for (l0, l1) in base.lines.iter().zip(&shifted.lines) {
        let drift = l0.params.iter().zip(&l1.params).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if drift > 1e-9 * data_scale(&l0.params) {
            return Err(Error::Resolution("translated seeds produced different parameter windows".into()));
        }
        for (p, q) in l0.points.iter().zip(&l1.points) {
            worst = worst.max((q[0] - delta.x0 - p[0]).abs()).max((q[1] - delta.x1 - p[1]).abs());
        }
    }
    Ok(worst)
}

fn data_scale(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(1.0, f64::max)
}

fn render_csv(data: &FigureData) -> String {
    let mut out = String::from("line_id,param,x0,x1,xR,xL\n");
    for line in &data.lines {
        for (s, p) in line.params.iter().zip(&line.points) {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                line.id,
                s,
                p[0],
                p[1],
                p[0] + p[1],
                p[0] - p[1]
            );
        }
    }
    out
}

fn render_svg(data: &FigureData) -> String {
    let b = data.beta;
    let w = 3.0 * b;
    let stroke = 0.01 * b;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        -w,
        -w,
        2.0 * w,
        2.0 * w
    );
    for (x1, y1, x2, y2) in [(-w, w, w, -w), (-w, -w, w, w)] {
        let _ = writeln!(
            out,
            r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#999" stroke-width="{stroke}"/>"##
        );
    }
    let limit = 4.0 * w;
    for line in &data.lines {
        let pts: Vec<String> = line
            .points
            .iter()
            .filter(|p| p[0].abs() <= limit && p[1].abs() <= limit)
            .map(|p| format!("{},{}", p[1], -p[0]))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline id="line-{}" fill="none" stroke="black" stroke-width="{stroke}" points="{}"/>"#,
            line.id,
            pts.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn render_figure(data: &FigureData, format: FigureFormat) -> Result<String> {
    Ok(match format {
        FigureFormat::Csv => render_csv(data),
        FigureFormat::Json => serde_json::to_string_pretty(data)? + "\n",
        FigureFormat::Svg => render_svg(data),
    })
}

/// Writes `text` through a sibling temporary file renamed into place, so a
/// failed run leaves no partial file.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text)?;
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}

pub fn write_figure(data: &FigureData, format: FigureFormat, path: &Path) -> Result<()> {
    write_atomic(path, &render_figure(data, format)?)
}

pub fn emit_flow_figure(ctx: &ThermalContext, spec: &FigureSpec, format: FigureFormat, path: &Path) -> Result<FigureData> {
    let data = figure_data(ctx, spec)?;
    write_figure(&data, format, path)?;
    Ok(data)
}
