//! End-to-end acceptance run: one PASS/FAIL line per criterion on stderr.

use std::io::Write as _;
use std::time::{Duration, Instant};

use modular_flow::cone_wedge::*;
use modular_flow::flow_maps::{modular_flow_ray, xi_chart};
use modular_flow::verify::{run_suite, verification_context, CaseRecord, Suite, VerifyReport};
use modular_flow::weyl_field::{gamma_transform, localization_defect, modular_transform, TestFunction};
use modular_flow::{RayDirection, ThermalContext, TWO_PI};

/// Failed checks of one criterion, as readable strings.
#[derive(Default)]
struct Criterion {
    failures: Vec<String>,
}

impl Criterion {
    fn check(&mut self, name: &str, ok: bool, detail: impl std::fmt::Display) {
        if !ok {
            self.failures.push(format!("{name}: {detail}"));
        }
    }

    fn below(&mut self, name: &str, value: f64, tol: f64) {
        self.check(name, value < tol, format!("{value:.3e} >= {tol:.0e}"));
    }

    fn cases(&mut self, report: &VerifyReport, filter: impl Fn(&CaseRecord) -> bool) {
        let mut seen = 0;
        for c in report.cases.iter().filter(|c| filter(c)) {
            seen += 1;
            self.check(&c.check, c.pass, format!("lhs {:.3e} rhs {:.3e} {}", c.lhs, c.rhs, c.params));
        }
        self.check(&report.suite, seen > 0, "no cases selected");
    }
}

fn report(id: usize, title: &str, c: &Criterion, elapsed: Duration) -> bool {
    let verdict = if c.failures.is_empty() { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{verdict} criterion {id} ({title}) in {:.1} s", elapsed.as_secs_f64());
    for f in &c.failures {
        let _ = writeln!(err, "    {f}");
    }
    c.failures.is_empty()
}

fn lc(xl: f64, xr: f64) -> SpacetimePoint {
    SpacetimePoint::from_light_cone(xl, xr)
}

fn geometry(c: &mut Criterion) {
    let beta = 1.0;
    let ctx = ThermalContext::new(beta).unwrap();
    let regions = [Region::ForwardCone, Region::RightWedge, Region::BackwardCone, Region::LeftWedge];

    let mut remainder: f64 = 0.0;
    for region in regions {
        for (xl, xr) in [(0.5, 0.5), (0.1, 2.0), (3.0, 0.05), (-0.4, 0.9), (0.9, -0.4), (-1.0, -0.3)] {
            let p = lc(xl, xr);
            if !region.contains(&p) {
                continue;
            }
            for u in [-0.2, 0.2, 0.7] {
                let Ok(q) = modular_flow_2d(&ctx, region, u, p) else { continue };
                let (r0, r1) = remainder_terms(&ctx, region, u, p).unwrap();
                let scale = 1.0 + p.x0.abs() + p.x1.abs() + u.abs();
                remainder = remainder.max((p.x0 - beta * u + r0 - q.x0).abs().max((p.x1 + r1 - q.x1).abs()) / scale);
            }
        }
    }
    c.below("remainder-reconstruction", remainder, 1e-12);

    let mut deep: f64 = 0.0;
    for (region, sl) in [(Region::ForwardCone, 1.0), (Region::RightWedge, -1.0)] {
        for (xl, xr) in [(8.0, 8.0), (8.0, 15.0), (20.0, 9.5)] {
            let p = lc(sl * xl, xr);
            for u in [-1.0, -0.4, 0.3, 1.0] {
                let q = modular_flow_2d(&ctx, region, u, p).unwrap();
                deep = deep.max((q.x0 - (p.x0 - beta * u)).hypot(q.x1 - p.x1));
            }
        }
    }
    c.below("deep-interior", deep, 1e-6 * beta);

    // O(|x|/beta) window around the apex and the wedge edge
    let mut apex: f64 = 0.0;
    for u in [-0.2, 0.1, 0.2] {
        let lam = (-TWO_PI * u).exp();
        let p = lc(1e-3, 6e-4);
        let q = modular_flow_2d(&ctx, Region::ForwardCone, u, p).unwrap();
        apex = apex.max((q.xl() / (lam * p.xl()) - 1.0).abs()).max((q.xr() / (lam * p.xr()) - 1.0).abs());
        let p = lc(-1e-3, 6e-4);
        let q = modular_flow_2d(&ctx, Region::RightWedge, u, p).unwrap();
        apex = apex.max((q.xl() * lam / p.xl() - 1.0).abs()).max((q.xr() / (lam * p.xr()) - 1.0).abs());
    }
    c.below("apex-and-edge", apex, 1e-2);

    let mut velocity: f64 = 0.0;
    let mut constant: f64 = 0.0;
    for region in regions {
        for x0 in [-1.5, -0.5, 0.5, 1.5] {
            for x1 in [-1.0, 0.0, 1.0] {
                let p = SpacetimePoint::new(x0, x1);
                if !region.contains(&p) {
                    continue;
                }
                let h = 1e-5;
                let (lo, hi) = flow_domain(&ctx, region, FlowKind::Gamma, p);
                if lo < -h && hi > h {
                    let a = gamma_flow_2d(&ctx, region, h, p).unwrap();
                    let z = gamma_flow_2d(&ctx, region, -h, p).unwrap();
                    let fd = (a.x1 - z.x1) / (a.x0 - z.x0);
                    velocity = velocity.max((fd - velocity_field(&ctx, region, p)).abs());
                }
                let Ok(line) = flow_line(&ctx, region, FlowKind::Gamma, p, (-0.1, 0.5), 21) else { continue };
                let c0 = gamma_line_constant(&ctx, region, p).unwrap();
                for q in &line.points {
                    constant = constant.max((gamma_line_constant(&ctx, region, *q).unwrap() - c0).abs());
                }
            }
        }
    }
    c.below("velocity-field", velocity, 1e-6);
    c.below("gamma-line-constant", constant, 1e-8);

    let fig3 = FigureSpec::standard(&ctx, 3, 12).unwrap();
    c.below("figure-3-x0-translation", check_seed_translation(&ctx, &fig3, SpacetimePoint::new(0.37, 0.0)).unwrap(), 1e-10);
    let fig4 = FigureSpec::standard(&ctx, 4, 12).unwrap();
    c.below("figure-4-x1-translation", check_seed_translation(&ctx, &fig4, SpacetimePoint::new(0.0, -0.61)).unwrap(), 1e-10);
}

fn sup_gap(a: &TestFunction, b: &TestFunction) -> f64 {
    let (lo, hi) = a.support();
    (0..=200).map(|k| lo + (hi - lo) * k as f64 / 200.0).map(|x| (a.eval(x) - b.eval(x)).abs()).fold(0.0, f64::max)
}

fn modular_actions(c: &mut Criterion, kernels: &VerifyReport, kms: &VerifyReport) {
    let beta = 1.0;
    let ctx = ThermalContext::new(beta).unwrap();
    let f = TestFunction::bump(1.5, 0.5, 513).unwrap();
    let mut group: f64 = 0.0;
    for (u, v) in [(0.2, -0.1), (-0.25, 0.3), (0.1, 0.15)] {
        let both = modular_transform(&ctx, u + v, &f, false).unwrap();
        let step = modular_transform(&ctx, v, &modular_transform(&ctx, u, &f, false).unwrap(), false).unwrap();
        group = group.max(sup_gap(&both, &step));
    }
    c.below("delta-group-law", group, 1e-8);

    // the chart compresses the left edge; 513 nodes leave ~1e-7 interpolation error
    let g = TestFunction::bump(0.5, 0.5, 1025).unwrap();
    let mut additive: f64 = 0.0;
    for (s, t) in [(0.05, 0.1), (0.2, 0.03)] {
        let both = gamma_transform(&ctx, s + t, &g).unwrap();
        let step = gamma_transform(&ctx, t, &gamma_transform(&ctx, s, &g).unwrap()).unwrap();
        additive = additive.max(sup_gap(&both, &step));
    }
    c.below("gamma-additivity", additive, 1e-8);

    c.cases(kernels, |r| r.check == "modular-unitarity" || r.check == "symplectic-invariance");
    c.cases(kms, |_| true);

    // support edges move by the chart scaling
    let plus = RayDirection::Plus;
    let mut chart: f64 = 0.0;
    for u in [-0.3, 0.25, 0.6] {
        let (lo, hi) = modular_transform(&ctx, u, &f, false).unwrap().support();
        for (edge, image) in [(1.0, lo), (2.0, hi)] {
            let want = (-TWO_PI * u).exp() * xi_chart(&ctx, plus, edge).unwrap();
            chart = chart.max((xi_chart(&ctx, plus, image).unwrap() - want).abs() / (1.0 + want.abs()));
            chart = chart.max((modular_flow_ray(&ctx, plus, u, edge).unwrap() - image).abs());
        }
    }
    c.below("support-mapping", chart, 1e-12);

    let wide = TestFunction::bump(1.5, 0.5, 2049).unwrap();
    let d50 = localization_defect(&ctx, 1, 0.2, &wide, (0.0, 50.0)).unwrap();
    let d100 = localization_defect(&ctx, 1, 0.2, &wide, (0.0, 100.0)).unwrap();
    c.check("defect-nonzero", d50.abs() > 1e-4, format!("{d50:.3e}"));
    c.below("defect-stabilized", (d50 - d100).abs(), 1e-8);
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let ctx = ThermalContext::new(1.0).unwrap();
    let mut all = true;

    let t = Instant::now();
    let mut c = Criterion::default();
    let laws = run_suite(&ctx, Suite::GroupLaws).unwrap();
    c.cases(&laws, |_| true);
    c.check("runtime", t.elapsed() < Duration::from_secs(5), format!("{:?}", t.elapsed()));
    all &= report(1, "group laws", &c, t.elapsed());

    let t = Instant::now();
    let mut c = Criterion::default();
    c.cases(&run_suite(&ctx, Suite::Flows).unwrap(), |_| true);
    all &= report(2, "flow maps", &c, t.elapsed());

    let t = Instant::now();
    let mut c = Criterion::default();
    geometry(&mut c);
    all &= report(3, "cone and wedge geometry", &c, t.elapsed());

    let t = Instant::now();
    let mut c = Criterion::default();
    let kernels = run_suite(&ctx, Suite::Kernels).unwrap();
    c.cases(&kernels, |r| r.check != "modular-unitarity" && r.check != "symplectic-invariance");
    all &= report(4, "two-point kernels", &c, t.elapsed());

    let t = Instant::now();
    let mut c = Criterion::default();
    let kms = run_suite(&ctx, Suite::Kms).unwrap();
    modular_actions(&mut c, &kernels, &kms);
    all &= report(5, "modular actions", &c, t.elapsed());

    let t = Instant::now();
    let mut c = Criterion::default();
    let bound = run_suite(&ctx, Suite::Bound).unwrap();
    c.cases(&bound, |_| true);
    let grid = bound.cases.iter().filter(|r| r.check == "modular-bound").count();
    c.check("bound-grid", grid == 21 * 12, format!("{grid} points"));
    c.cases(&run_suite(&verification_context(&ctx).unwrap(), Suite::Rates).unwrap(), |_| true);
    c.check("total-runtime", start.elapsed() < Duration::from_secs(600), format!("{:?}", start.elapsed()));
    all &= report(6, "operator bound and rate", &c, t.elapsed());

    assert!(all, "acceptance criteria failed");
}
