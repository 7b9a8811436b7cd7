//! The modular/translation bound on a small grid and the decay rate of the
//! deviation between the modular flow and a pure translation.

use std::fmt::Write as _;

use modular_flow::verify::{convergence_rate, modular_bound_grid, verification_context};
use modular_flow::weyl_field::{FieldSpec, StateNormalization, TestFunction};
use modular_flow::{Result, ThermalContext};

pub fn run_example() -> Result<String> {
    let beta = 1.0;
    let ctx = verification_context(&ThermalContext::new(beta)?)?;
    let spec = FieldSpec::new(0);
    let norm = StateNormalization::default();
    let f = TestFunction::bump(0.5, 0.45, 513)?;
    let g = TestFunction::bump(-0.5, 0.45, 513)?;
    let mut out = String::from("u,t,lhs,rhs\n");
    for r in modular_bound_grid(&ctx, spec, norm, &f, &g, &[-0.5, 0.2], &[1.0, 3.0])? {
        writeln!(out, "{},{},{:.6e},{:.6e}", r.u, r.t, r.lhs, r.rhs).unwrap();
    }
    let h = TestFunction::bump(0.5, 0.5, 513)?;
    let rate = convergence_rate(&ctx, spec, norm, &h, 0.3, &[3.0, 4.0, 5.0, 6.0])?;
    writeln!(out, "fitted slope {:.6} (expected {:.6})", rate.slope.unwrap_or(f64::NAN), rate.expected_slope).unwrap();
    Ok(out)
}

fn main() {
    match run_example() {
        Ok(text) => print!("{text}"),
        Err(e) => eprintln!("{e}"),
    }
}
