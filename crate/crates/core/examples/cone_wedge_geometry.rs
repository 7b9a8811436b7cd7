//! Flows in the forward light cone and the right wedge: the deep interior
//! sees a time translation, the apex a dilation.

use std::fmt::Write as _;

use modular_flow::cone_wedge::{
    gamma_line_constant, modular_flow_2d, remainder_terms, velocity_field, Region, SpacetimePoint,
};
use modular_flow::{Result, ThermalContext};

pub fn run_example() -> Result<String> {
    let beta = 2.0;
    let ctx = ThermalContext::new(beta)?;
    let mut out = String::new();
    for (region, p) in [
        (Region::ForwardCone, SpacetimePoint::from_light_cone(20.0, 24.0)),
        (Region::ForwardCone, SpacetimePoint::from_light_cone(1e-3, 2e-3)),
        (Region::RightWedge, SpacetimePoint::from_light_cone(-0.7, 1.1)),
    ] {
        let u = 0.25;
        let q = modular_flow_2d(&ctx, region, u, p)?;
        let (r0, r1) = remainder_terms(&ctx, region, u, p)?;
        writeln!(out, "{region} ({p}) -> ({q}); remainder ({r0:.3e}, {r1:.3e})").unwrap();
        writeln!(out, "    gamma velocity {:.6}, line constant {:.6}", velocity_field(&ctx, region, p), gamma_line_constant(&ctx, region, p)?)
            .unwrap();
    }
    Ok(out)
}

fn main() {
    match run_example() {
        Ok(text) => print!("{text}"),
        Err(e) => eprintln!("{e}"),
    }
}
