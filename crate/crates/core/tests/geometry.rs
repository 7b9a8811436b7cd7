use modular_flow::cone_wedge::*;
use modular_flow::flow_maps::xi_chart;
use modular_flow::{Error, RayDirection, ThermalContext, TWO_PI};
use proptest::prelude::*;

const REGIONS: [Region; 4] = [Region::ForwardCone, Region::RightWedge, Region::BackwardCone, Region::LeftWedge];

fn ctx(beta: f64) -> ThermalContext {
    ThermalContext::new(beta).unwrap()
}

fn lc(xl: f64, xr: f64) -> SpacetimePoint {
    SpacetimePoint::from_light_cone(xl, xr)
}

fn rk4(v: impl Fn(f64) -> f64, y0: f64, t0: f64, t1: f64, steps: usize) -> f64 {
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for _ in 0..steps {
        let k1 = v(y);
        let k2 = v(y + 0.5 * h * k1);
        let k3 = v(y + 0.5 * h * k2);
        let k4 = v(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y
}

#[test]
fn light_cone_coordinates() {
    let p = SpacetimePoint::new(1.5, -0.5);
    assert_eq!((p.xr(), p.xl()), (1.0, 2.0));
    let q = lc(p.xl(), p.xr());
    assert!(q.distance(&p) < 1e-15);
    assert!(Region::ForwardCone.contains(&SpacetimePoint::new(1.0, 0.5)));
    assert!(Region::RightWedge.contains(&SpacetimePoint::new(0.5, 1.0)));
    assert!(Region::BackwardCone.contains(&SpacetimePoint::new(-1.0, 0.5)));
    assert!(Region::LeftWedge.contains(&SpacetimePoint::new(0.5, -1.0)));
    assert!(!Region::ForwardCone.contains(&SpacetimePoint::new(1.0, 1.0)));
    assert_eq!("cone".parse::<Region>().unwrap(), Region::ForwardCone);
    assert_eq!("1,-2".parse::<SpacetimePoint>().unwrap(), SpacetimePoint::new(1.0, -2.0));
    assert!("1;2".parse::<SpacetimePoint>().is_err());
}

#[test]
fn flow_spot_values() {
    let b = ctx(TWO_PI);
    let u = 2f64.ln() / TWO_PI;
    let q = modular_flow_2d(&b, Region::ForwardCone, u, lc(3f64.ln(), 3f64.ln())).unwrap();
    assert!((q.xl() - 2f64.ln()).abs() < 1e-14 && (q.xr() - 2f64.ln()).abs() < 1e-14);

    for beta in [1.0, TWO_PI] {
        let b = ctx(beta);
        let c = TWO_PI / beta;
        for tau in [0.1, 1.0, 7.0] {
            let q = gamma_flow_2d(&b, Region::ForwardCone, tau, SpacetimePoint::new(0.0, 0.0)).unwrap();
            assert!((q.x0 - (c * tau).ln_1p() / c).abs() < 1e-14);
            assert_eq!(q.x1, 0.0);
        }
    }

    // upper end of the two-sided wedge range is excluded
    let b = ctx(1.0);
    let p = SpacetimePoint::new(0.0, 0.7);
    let (_, hi) = flow_domain(&b, Region::RightWedge, FlowKind::Gamma, p);
    let err = gamma_flow_2d(&b, Region::RightWedge, hi, p).unwrap_err();
    assert!(matches!(err, Error::Domain(ref m) if m.contains("xL")));
    assert!(gamma_flow_2d(&b, Region::RightWedge, hi * (1.0 - 1e-9), p).is_ok());
}

#[test]
fn remainder_reconstructs_flow() {
    for beta in [1.0, 3.0] {
        let b = ctx(beta);
        for region in REGIONS {
            for (xl, xr) in [(0.5, 0.5), (0.1, 2.0), (3.0, 0.05), (-0.4, 0.9), (0.9, -0.4), (-1.0, -0.3)] {
                let p = lc(xl * beta, xr * beta);
                if !region.contains(&p) {
                    continue;
                }
                for u in [-0.2, 0.0, 0.2, 0.7] {
                    let Ok(q) = modular_flow_2d(&b, region, u, p) else { continue };
                    let (r0, r1) = remainder_terms(&b, region, u, p).unwrap();
                    let scale = 1.0 + p.x0.abs() + p.x1.abs() + beta * u.abs();
                    assert!((p.x0 - beta * u + r0 - q.x0).abs() < 1e-12 * scale, "{region} u={u} p=({p})");
                    assert!((p.x1 + r1 - q.x1).abs() < 1e-12 * scale, "{region} u={u} p=({p})");
                    if u == 0.0 {
                        assert_eq!((r0, r1), (0.0, 0.0));
                    }
                }
            }
        }
    }
    let b = ctx(1.0);
    let (r0, r1) = remainder_terms(&b, Region::ForwardCone, 0.5, lc(11.0, 12.0)).unwrap();
    assert!(r0.abs() < 1e-8 && r1.abs() < 1e-8);
    assert!(remainder_terms(&ThermalContext::vacuum(), Region::ForwardCone, 0.1, lc(1.0, 1.0)).is_err());
}

#[test]
fn deep_interior_is_time_translation() {
    let beta = 2.0;
    let b = ctx(beta);
    for (region, sl) in [(Region::ForwardCone, 1.0), (Region::RightWedge, -1.0)] {
        for (xl, xr) in [(9.0, 9.0), (9.0, 15.0), (20.0, 9.5)] {
            let p = lc(sl * xl * beta, xr * beta);
            for u in [-1.0, -0.4, 0.3, 1.0] {
                let q = modular_flow_2d(&b, region, u, p).unwrap();
                let dev = (q.x0 - (p.x0 - beta * u)).hypot(q.x1 - p.x1);
                assert!(dev < 1e-6 * beta, "{region} u={u}: {dev}");
            }
        }
    }
}

#[test]
fn apex_and_edge_limits() {
    let beta = 1.5;
    let b = ctx(beta);
    for x in [1e-3, 4e-4, -7e-4] {
        for u in [-0.2, 0.1, 0.2] {
            let lam = (-TWO_PI * u).exp();
            let p = lc((x * beta).abs(), 0.6e-3 * beta);
            let q = modular_flow_2d(&b, Region::ForwardCone, u, p).unwrap();
            assert!((q.xl() - lam * p.xl()).abs() < 1e-2 * lam * p.xl());
            assert!((q.xr() - lam * p.xr()).abs() < 1e-2 * lam * p.xr());

            let p = lc(-(x * beta).abs(), 0.6e-3 * beta);
            let q = modular_flow_2d(&b, Region::RightWedge, u, p).unwrap();
            assert!((q.xr() - lam * p.xr()).abs() < 1e-2 * lam * p.xr());
            assert!((q.xl() - p.xl() / lam).abs() < 1e-2 * (p.xl() / lam).abs());
        }
    }
}

#[test]
fn velocity_matches_differentiated_trajectories() {
    let beta = 1.0;
    let b = ctx(beta);
    let grid: Vec<f64> = (0..7).map(|k| -1.5 + 0.5 * k as f64).collect();
    for region in REGIONS {
        for &x0 in &grid {
            for &x1 in &grid {
                let p = SpacetimePoint::new(x0 * beta, x1 * beta);
                if !region.contains(&p) {
                    continue;
                }
                let (lo, hi) = flow_domain(&b, region, FlowKind::Gamma, p);
                let h = 1e-5 * beta;
                if !(lo < -h && hi > h) {
                    continue;
                }
                let a = gamma_flow_2d(&b, region, h, p).unwrap();
                let z = gamma_flow_2d(&b, region, -h, p).unwrap();
                let fd = (a.x1 - z.x1) / (a.x0 - z.x0);
                let v = velocity_field(&b, region, p);
                assert!(v.abs() < 1.0);
                assert!((fd - v).abs() < 1e-6, "{region} ({p}): fd {fd} v {v}");
            }
        }
    }
    let b = ctx(TWO_PI);
    assert!((velocity_field(&b, Region::ForwardCone, SpacetimePoint::new(2.0, 1.0)) + 1f64.tanh()).abs() < 1e-15);
    assert_eq!(velocity_field(&b, Region::RightWedge, SpacetimePoint::new(0.0, 1.0)), 0.0);
}

#[test]
fn gamma_lines_follow_velocity_field() {
    // integrate dx1/dx0 = v independently and compare with the sampled line
    let beta = 1.0;
    let b = ctx(beta);
    for (region, seed) in [
        (Region::ForwardCone, SpacetimePoint::new(1.0, 0.4)),
        (Region::ForwardCone, SpacetimePoint::new(2.0, -1.2)),
        (Region::RightWedge, SpacetimePoint::new(0.3, 1.0)),
        (Region::RightWedge, SpacetimePoint::new(-0.8, 2.0)),
    ] {
        let line = flow_line(&b, region, FlowKind::Gamma, seed, (-0.1, 0.5), 21).unwrap();
        let c0 = gamma_line_constant(&b, region, seed).unwrap();
        for q in &line.points {
            assert!(region.contains(q));
            assert!((gamma_line_constant(&b, region, *q).unwrap() - c0).abs() < 1e-8);
            let x1 = match region {
                Region::ForwardCone => {
                    rk4(|x1| -(TWO_PI * x1 / beta).tanh(), seed.x1, seed.x0, q.x0, 4000)
                }
                _ => {
                    // v depends on x0 only: a plain quadrature in x0
                    let v = |x0: f64| -(TWO_PI * x0 / beta).tanh();
                    let n = 4000;
                    let h = (q.x0 - seed.x0) / n as f64;
                    let mut acc = seed.x1;
                    for k in 0..n {
                        let t = seed.x0 + h * k as f64;
                        acc += h / 6.0 * (v(t) + 4.0 * v(t + 0.5 * h) + v(t + h));
                    }
                    acc
                }
            };
            assert!((x1 - q.x1).abs() < 1e-9, "{region} seed ({seed})");
        }
    }
}

#[test]
fn modular_line_through_time_axis_stays_on_it() {
    let b = ctx(1.0);
    let line = flow_line(&b, Region::ForwardCone, FlowKind::Modular, SpacetimePoint::new(0.7, 0.0), (-0.5, 1.0), 31).unwrap();
    assert!(line.points.iter().all(|q| q.x1.abs() < 1e-15 && q.x0 > 0.0));
    let err = flow_line(&b, Region::RightWedge, FlowKind::Gamma, SpacetimePoint::new(0.0, 0.5), (0.0, 10.0), 5).unwrap_err();
    assert!(matches!(err, Error::Domain(ref m) if m.contains("leaves its domain")));
}

#[test]
fn time_calibration_relations() {
    let b = ctx(TWO_PI);
    let tau = time_calibration(&b, Region::ForwardCone, 2f64.ln(), Calibration::TauOfT).unwrap();
    assert!((tau - 1.0).abs() < 1e-15);
    // against the gamma flow through the origin
    let q = gamma_flow_2d(&b, Region::ForwardCone, 1.0, SpacetimePoint::new(0.0, 0.0)).unwrap();
    assert!((q.x0 - 2f64.ln()).abs() < 1e-15);

    let b = ctx(1.0);
    for region in [Region::ForwardCone, Region::RightWedge] {
        for dir in [Calibration::TOfTau, Calibration::TauOfT, Calibration::TauOfProper, Calibration::ProperOfTau] {
            assert_eq!(time_calibration(&b, region, 0.0, dir).unwrap(), 0.0);
        }
        for v in [-0.1, 0.05, 0.12] {
            let t = time_calibration(&b, region, v, Calibration::TOfTau).unwrap();
            let back = time_calibration(&b, region, t, Calibration::TauOfT).unwrap();
            assert!((back - v).abs() < 1e-12);
            let p = time_calibration(&b, region, v, Calibration::ProperOfTau).unwrap();
            let back = time_calibration(&b, region, p, Calibration::TauOfProper).unwrap();
            assert!((back - v).abs() < 1e-12);
        }
    }
    // wedge: the two scales agree to first order at the origin
    let h = 1e-6;
    let slope = (time_calibration(&b, Region::RightWedge, h, Calibration::TauOfProper).unwrap()
        - time_calibration(&b, Region::RightWedge, -h, Calibration::TauOfProper).unwrap())
        / (2.0 * h);
    assert!((slope - 1.0).abs() < 1e-9);
    // wedge gamma line through the origin: x0 = t(tau)
    for tau in [-0.1, 0.1] {
        let q = gamma_flow_2d(&b, Region::RightWedge, tau, SpacetimePoint::new(0.0, 0.0)).unwrap();
        let t = time_calibration(&b, Region::RightWedge, tau, Calibration::TOfTau).unwrap();
        assert!((q.x0 - t).abs() < 1e-14);
        // the line bends towards negative x1 off the origin
        assert!(q.x1 < 0.0);
    }
    assert!(time_calibration(&b, Region::RightWedge, 0.2, Calibration::TOfTau).is_err());
    assert!(time_calibration(&b, Region::LeftWedge, 0.1, Calibration::TOfTau).is_err());
}

#[test]
fn causal_chart_is_c1_with_curvature_jump() {
    let beta = 2.0;
    let b = ctx(beta);
    let c = TWO_PI / beta;
    assert_eq!(causal_chart(&b, SpacetimePoint::new(0.0, 0.0)).unwrap(), (0.0, 0.0));
    let (_, xr) = causal_chart(&b, lc(-0.3, 0.8)).unwrap();
    assert!((xr - xi_chart(&b, RayDirection::Plus, 0.8).unwrap()).abs() < 1e-15);
    let (xl, _) = causal_chart(&b, lc(-0.3, 0.8)).unwrap();
    assert!((xl - xi_chart(&b, RayDirection::Minus, -0.3).unwrap()).abs() < 1e-15);

    let f = |x: f64| causal_chart(&b, lc(0.4, x)).unwrap().1;
    let h = 1e-4;
    let right = (f(h) - f(0.0)) / h;
    let left = (f(0.0) - f(-h)) / h;
    assert!((right - left).abs() < 2.0 * c * h);
    let h = 1e-4;
    let d2r = (f(2.0 * h) - 2.0 * f(h) + f(0.0)) / (h * h);
    let d2l = (f(0.0) - 2.0 * f(-h) + f(-2.0 * h)) / (h * h);
    assert!((d2r - d2l - 2.0 * c).abs() < 1e-2);
    // order preserving
    let xs = [-1.0, -0.2, 0.0, 0.3, 2.0];
    assert!(xs.windows(2).all(|w| f(w[0]) < f(w[1])));
}

#[test]
fn standard_figures() {
    let b = ctx(1.0);
    for which in 1..=4u8 {
        let spec = FigureSpec::standard(&b, which, 12).unwrap();
        let data = figure_data(&b, &spec).unwrap();
        assert_eq!(data.lines.len(), 12);
        if spec.flow == FlowKind::Gamma {
            // translation invariant families necessarily leave the region
            continue;
        }
        for line in &data.lines {
            for p in &line.points {
                assert!(spec.region.contains(&SpacetimePoint::new(p[0], p[1])), "figure {which} line {} at {p:?}", line.id);
            }
        }
    }
    let fig3 = FigureSpec::standard(&b, 3, 12).unwrap();
    assert!(check_seed_translation(&b, &fig3, SpacetimePoint::new(0.37, 0.0)).unwrap() < 1e-10);
    let fig4 = FigureSpec::standard(&b, 4, 12).unwrap();
    assert!(check_seed_translation(&b, &fig4, SpacetimePoint::new(0.0, -0.61)).unwrap() < 1e-10);
    assert!(FigureSpec::standard(&b, 5, 12).is_err());
    assert!(FigureSpec::standard(&ThermalContext::vacuum(), 1, 12).is_err());
}

#[test]
fn figure_rendering_and_files() {
    let b = ctx(1.0);
    let spec = FigureSpec::standard(&b, 1, 3).unwrap();
    let data = figure_data(&b, &spec).unwrap();
    let csv = render_figure(&data, FigureFormat::Csv).unwrap();
    assert!(csv.starts_with("line_id,param,x0,x1,xR,xL\n"));
    assert_eq!(csv.lines().count(), 1 + 3 * spec.samples);
    let json: serde_json::Value = serde_json::from_str(&render_figure(&data, FigureFormat::Json).unwrap()).unwrap();
    assert_eq!(json["lines"].as_array().unwrap().len(), 3);
    assert_eq!(json["region"], "forward-cone");
    let svg = render_figure(&data, FigureFormat::Svg).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.svg");
    emit_flow_figure(&b, &spec, FigureFormat::Svg, &path).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), svg);
    let bad = dir.path().join("missing").join("fig.csv");
    assert!(matches!(write_figure(&data, FigureFormat::Csv, &bad), Err(Error::Io(_))));
    assert!(!dir.path().join("missing").exists());
}

fn region() -> impl Strategy<Value = Region> {
    prop_oneof![
        Just(Region::ForwardCone),
        Just(Region::RightWedge),
        Just(Region::BackwardCone),
        Just(Region::LeftWedge)
    ]
}

fn point_in(region: Region, a: f64, b: f64) -> SpacetimePoint {
    let (sl, sr) = match region {
        Region::ForwardCone => (1.0, 1.0),
        Region::RightWedge => (-1.0, 1.0),
        Region::BackwardCone => (-1.0, -1.0),
        Region::LeftWedge => (1.0, -1.0),
    };
    lc(sl * a, sr * b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn modular_flow_preserves_regions(r in region(), a in 1e-3f64..4.0, b in 1e-3f64..4.0, u in -2.0f64..2.0, beta in 0.5f64..4.0) {
        let c = ctx(beta);
        let p = point_in(r, a * beta, b * beta);
        let (lo, hi) = flow_domain(&c, r, FlowKind::Modular, p);
        prop_assert!(lo == f64::NEG_INFINITY && hi == f64::INFINITY);
        let q = modular_flow_2d(&c, r, u, p).unwrap();
        prop_assert!(r.contains(&q), "{} -> {}", p, q);
        let back = modular_flow_2d(&c, r, -u, q).unwrap();
        prop_assert!(back.distance(&p) < 1e-9 * (1.0 + a + b) * beta);
    }

    #[test]
    fn gamma_flow_keeps_region_when_allowed(r in region(), a in 1e-2f64..3.0, b in 1e-2f64..3.0, tau in -1.0f64..1.0, beta in 0.5f64..4.0) {
        let c = ctx(beta);
        let p = point_in(r, a * beta, b * beta);
        let tau = tau * beta;
        prop_assume!(gamma_keeps_region(&c, r, tau, p));
        let q = gamma_flow_2d(&c, r, tau, p).unwrap();
        prop_assert!(r.contains(&q), "{} -> {}", p, q);
    }

    #[test]
    fn translated_apex_flows_componentwise(xl in -2.0f64..2.0, xr in -2.0f64..2.0, u in -0.3f64..0.3) {
        let c = ctx(1.0);
        let p = lc(xl, xr);
        let ql = modular_flow_2d(&c, Region::ForwardCone, u, p);
        let rl = modular_flow_ray_pair(&c, u, xl, xr);
        match (ql, rl) {
            (Ok(q), Some((l, rr))) => {
                prop_assert!((q.xl() - l).abs() < 1e-12 * (1.0 + l.abs()));
                prop_assert!((q.xr() - rr).abs() < 1e-12 * (1.0 + rr.abs()));
            }
            (Err(_), None) => {}
            (q, r) => prop_assert!(false, "mismatch {:?} {:?}", q, r),
        }
    }
}

fn modular_flow_ray_pair(c: &ThermalContext, u: f64, xl: f64, xr: f64) -> Option<(f64, f64)> {
    use modular_flow::flow_maps::modular_flow_ray;
    let l = modular_flow_ray(c, RayDirection::Plus, u, xl).ok()?;
    let r = modular_flow_ray(c, RayDirection::Plus, u, xr).ok()?;
    Some((l, r))
}
