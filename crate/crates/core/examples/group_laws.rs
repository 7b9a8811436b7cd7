//! Composition in the ax+b group and the exchange between its two modular
//! one-parameter subgroups.

use std::fmt::Write as _;

use modular_flow::axb_group::{decompose_pos, exchange_f, g_m, g_n, g_pos, Branch, GroupElement};
use modular_flow::Result;

pub fn run_example() -> Result<String> {
    let mut out = String::new();
    let a = GroupElement::new(2.0, 0.5)?;
    let b = GroupElement::new(0.25, -1.0)?;
    let ab = a * b;
    writeln!(out, "a b      = (lambda {}, tau {})", ab.lambda(), ab.tau()).unwrap();
    writeln!(out, "a b (5)  = {}", ab.apply(5.0)).unwrap();
    writeln!(out, "a(b(5))  = {}", a.apply(b.apply(5.0))).unwrap();

    // g_n(u) g_m(s) = g_m(f) g_n(s + u - f)
    let (u, s) = (0.3, -0.2);
    let f = exchange_f(u, s)?;
    let gap = (g_n(u) * g_m(s)).distance(&(g_m(f) * g_n(s + u - f)));
    writeln!(out, "exchange f({u}, {s}) = {f:.12}, gap {gap:.1e}").unwrap();

    for tau in [-0.1, 0.1] {
        for branch in [Branch::First, Branch::Second] {
            let d = decompose_pos(tau, branch)?;
            let gap = d.compose().distance(&g_pos(tau));
            writeln!(out, "g_pos({tau}) {branch:?}: s = {:.9}, u = {:.9}, gap {gap:.1e}", d.s, d.u).unwrap();
        }
    }
    Ok(out)
}

fn main() {
    match run_example() {
        Ok(text) => print!("{text}"),
        Err(e) => eprintln!("{e}"),
    }
}
