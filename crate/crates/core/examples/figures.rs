//! Writes the four standard flow-line figures as SVG into a directory
//! (default: the system temp directory).

use std::path::{Path, PathBuf};

use modular_flow::cone_wedge::{emit_flow_figure, FigureFormat, FigureSpec};
use modular_flow::{Result, ThermalContext};

pub fn run_example(dir: &Path) -> Result<Vec<PathBuf>> {
    let ctx = ThermalContext::new(1.0)?;
    let mut written = Vec::new();
    for which in 1..=4u8 {
        let spec = FigureSpec::standard(&ctx, which, 12)?;
        let path = dir.join(format!("figure{which}.svg"));
        let data = emit_flow_figure(&ctx, &spec, FigureFormat::Svg, &path)?;
        println!("{} {} flow, {} lines -> {}", data.region, data.flow, data.lines.len(), path.display());
        written.push(path);
    }
    Ok(written)
}

fn main() {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    if let Err(e) = run_example(&dir) {
        eprintln!("{e}");
    }
}
