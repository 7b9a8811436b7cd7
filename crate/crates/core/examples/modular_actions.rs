//! Modular and positive-generator actions on smearing functions, and the
//! defect that appears for the derivative fields.

use std::fmt::Write as _;

use modular_flow::weyl_field::{gamma_transform, higher_transform, localization_defect, modular_transform, TestFunction, Transform};
use modular_flow::{Result, ThermalContext, TWO_PI};

pub fn run_example() -> Result<String> {
    let beta = 1.0;
    let ctx = ThermalContext::new(beta)?;
    let f = TestFunction::bump(1.5, 0.5, 1025)?;
    let mut out = String::new();
    for u in [-0.2, 0.1, 0.3] {
        let g = modular_transform(&ctx, u, &f, false)?;
        let (a, b) = g.support();
        writeln!(out, "delta_{u} f: support [{a:.9}, {b:.9}], integral {:.9}", g.integral()).unwrap();
    }
    let left = TestFunction::bump(-1.0, 0.8, 1025)?;
    let moved = gamma_transform(&ctx, beta / TWO_PI, &left)?;
    writeln!(out, "gamma at beta/2pi: support [{:.3e}, {:.6}]", moved.support().0, moved.support().1).unwrap();

    let tail = higher_transform(&ctx, 1, Transform::Modular(0.2), &f)?;
    writeln!(out, "n = 1 transform compact: {}", tail.is_compact()).unwrap();
    let d = localization_defect(&ctx, 1, 0.2, &f, (0.0, 50.0))?;
    writeln!(out, "localization defect (n = 1, u = 0.2): {d:.9e}").unwrap();
    Ok(out)
}

fn main() {
    match run_example() {
        Ok(text) => print!("{text}"),
        Err(e) => eprintln!("{e}"),
    }
}
