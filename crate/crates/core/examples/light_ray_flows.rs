//! Modular and positive-generator flows on the two light rays, read off in
//! the chart where they become a dilation and a translation.

use std::fmt::Write as _;

use modular_flow::flow_maps::{gamma_domain, gamma_flow_ray, modular_domain, modular_flow_ray, xi_chart};
use modular_flow::{RayDirection, Result, ThermalContext};

/// Flow value, or `undefined` outside its domain.
fn show(value: Result<f64>) -> String {
    value.map_or_else(|_| "undefined".to_string(), |v| format!("{v:.12}"))
}

pub fn run_example() -> Result<String> {
    let ctx = ThermalContext::new(1.0)?;
    let mut out = String::from("dir,x,phi(0.1),psi(0.05),xi\n");
    for dir in [RayDirection::Plus, RayDirection::Minus] {
        for x in [-0.5, 0.0, 0.5, 1.0] {
            let phi = show(modular_flow_ray(&ctx, dir, 0.1, x));
            let psi = show(gamma_flow_ray(&ctx, dir, 0.05, x));
            writeln!(out, "{dir:?},{x},{phi},{psi},{:.12}", xi_chart(&ctx, dir, x)?).unwrap();
        }
    }
    let (lo, hi) = modular_domain(&ctx, RayDirection::Plus, -0.3);
    writeln!(out, "modular parameters defined at x = -0.3: ({lo:.6}, {hi})").unwrap();
    let (lo, hi) = gamma_domain(&ctx, RayDirection::Plus, -0.3);
    writeln!(out, "gamma parameters defined at x = -0.3: ({lo:.6}, {hi})").unwrap();

    // at tau = beta/2pi the whole line lands on the positive half-line
    let tau = 1.0 / modular_flow::TWO_PI;
    for x in [-30.0, -3.0, 0.0] {
        writeln!(out, "psi+({tau:.6}, {x}) = {:.6e}", gamma_flow_ray(&ctx, RayDirection::Plus, tau, x)?).unwrap();
    }
    Ok(out)
}

fn main() {
    match run_example() {
        Ok(text) => print!("{text}"),
        Err(e) => eprintln!("{e}"),
    }
}
