//! Thermal two-point function of the chiral current: momentum density,
//! regularized position kernel and the Gram matrix of a few Weyl vectors.

use std::fmt::Write as _;

use modular_flow::verify::verification_context;
use modular_flow::weyl_field::{
    omega2, two_point_momentum, two_point_position, FieldSpec, StateNormalization, TestFunction,
};
use modular_flow::{Result, ThermalContext};

pub fn run_example() -> Result<String> {
    let beta = 1.0;
    let ctx = verification_context(&ThermalContext::new(beta)?)?;
    let spec = FieldSpec::new(0);
    let mut out = String::from("p,W2(p),W2(-p)exp(beta p)\n");
    for p in [0.5, 1.0, 4.0] {
        let (a, b) = (two_point_momentum(&ctx, spec, p), two_point_momentum(&ctx, spec, -p));
        writeln!(out, "{p},{a:.15e},{:.15e}", b * (beta * p).exp()).unwrap();
    }
    for xi in [0.1, 0.5] {
        let w = two_point_position(&ctx, spec, xi, 1e-3)?;
        writeln!(out, "W2({xi} + i eps) = {:.9} {:+.9}i", w.re, w.im).unwrap();
    }

    let family: Vec<TestFunction> =
        [(0.0, 0.5), (0.4, 0.3), (-0.8, 0.6)].iter().map(|&(c, h)| TestFunction::bump(c, h, 513)).collect::<Result<_>>()?;
    let w = omega2(&ctx, spec, &family[0], &family[1])?;
    writeln!(out, "omega2(f0, f1) = {:.9} {:+.9}i", w.re, w.im).unwrap();
    let norm = StateNormalization::default();
    writeln!(out, "Gram minimum eigenvalue {:.6e}", norm.gram_min_eigenvalue(&ctx, spec, &family)?).unwrap();
    Ok(out)
}

fn main() {
    match run_example() {
        Ok(text) => print!("{text}"),
        Err(e) => eprintln!("{e}"),
    }
}
