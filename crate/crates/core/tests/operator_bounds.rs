use modular_flow::verify::*;
use modular_flow::weyl_field::*;
use modular_flow::{Error, ThermalContext, TWO_PI};

const N0: FieldSpec = FieldSpec { n: 0 };

fn ctx(beta: f64) -> ThermalContext {
    verification_context(&ThermalContext::new(beta).unwrap()).unwrap()
}

#[test]
fn bound_rhs_spot_values() {
    let c = ctx(1.0);
    let want = 2.0 * ((0.2 * std::f64::consts::PI).exp() - 1.0) / ((10.0 * std::f64::consts::PI).exp() - 1.0);
    let got = bound_rhs(&c, 1.0, 0.1, 5.0).unwrap();
    assert!((got - want).abs() < 1e-14 * want);
    // saturates at 2M once the ratio exceeds one
    assert_eq!(bound_rhs(&c, 0.7, 2.0, 0.1).unwrap(), 1.4);
    assert_eq!(bound_rhs(&c, 1.0, 0.0, 1.0).unwrap(), 0.0);
    assert!(bound_rhs(&ThermalContext::vacuum(), 1.0, 0.1, 1.0).is_err());
}

#[test]
fn bound_holds_with_unit_weyl_norms() {
    let beta = 1.0;
    let c = ctx(beta);
    let f = TestFunction::bump(0.5, 0.45, 513).unwrap();
    let g = TestFunction::bump(-0.5, 0.45, 513).unwrap();
    for (u, t) in [(0.2, 1.0), (-0.3, 2.0), (0.5, 4.0)] {
        let r = modular_bound_check(&c, N0, StateNormalization::default(), &f, &g, u, t * beta).unwrap();
        assert!(r.lhs <= r.rhs + 1e-9, "u={u} t={t}: {} > {}", r.lhs, r.rhs);
        assert!((r.m - 1.0).abs() < 1e-12);
        assert!(r.resolved);
    }
}

#[test]
fn bound_preconditions() {
    let c = ctx(1.0);
    let norm = StateNormalization::default();
    let f = TestFunction::bump(0.5, 0.45, 257).unwrap();
    let g = TestFunction::bump(-0.5, 0.45, 257).unwrap();
    let check = |f: &TestFunction, g: &TestFunction, t: f64| modular_bound_check(&c, N0, norm, f, g, 0.1, t);
    assert!(matches!(check(&f, &g, 0.0), Err(Error::Domain(_))));
    assert!(matches!(check(&g, &g, 1.0), Err(Error::Domain(_))));
    assert!(matches!(check(&f, &f, 1.0), Err(Error::Domain(_))));
    assert!(modular_bound_check(&c, FieldSpec::new(1), norm, &f, &g, 0.1, 1.0).is_err());
}

#[test]
fn deviation_decays_at_the_thermal_rate() {
    let beta = 1.0;
    let c = ctx(beta);
    let f = TestFunction::bump(0.5, 0.5, 513).unwrap();
    let ts = [3.0, 4.0, 5.0, 6.0];
    let r = convergence_rate(&c, N0, StateNormalization::default(), &f, 0.3, &ts).unwrap();
    assert_eq!(r.expected_slope, -TWO_PI / beta);
    assert!(r.relative_slope_error().unwrap() < 0.05);
    assert!(r.deviations.windows(2).all(|w| w[1] < w[0]));
    let zero = convergence_rate(&c, N0, StateNormalization::default(), &f, 0.0, &ts).unwrap();
    assert!(zero.deviations.iter().all(|d| *d == 0.0));
    assert!(convergence_rate(&c, N0, StateNormalization::default(), &f, 0.3, &[4.0, 3.0]).is_err());
}

#[test]
fn smearing_function_relations() {
    let beta = 1.0;
    let c = ctx(beta);
    let h = TestFunction::bump(1.0, 0.5, 513).unwrap();
    assert!(translation_exchange_relation(&c, &h, 0.25, 0.5).unwrap() < 1e-8);
    let t = 2f64.ln() / TWO_PI;
    assert!(gamma_scaling_relation(&c, &h, 0.1, t).unwrap() < 1e-8);
}

#[test]
fn l_map_is_an_involution_pair() {
    let c = ctx(2.0);
    for y in [0.01, 0.3, 1.7, 9.0] {
        for u in [-0.4, 0.1, 0.35] {
            let back = l_map(&c, u, l_map(&c, -u, y).unwrap()).unwrap();
            assert!((back - y).abs() < 1e-12 * (1.0 + y));
        }
    }
}

#[test]
fn suites_parse_and_group_laws_pass() {
    for s in Suite::PARTS {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
    assert!("everything".parse::<Suite>().is_err());
    let report = run_suite(&ThermalContext::new(1.0).unwrap(), Suite::GroupLaws).unwrap();
    assert!(report.pass);
    assert_eq!(report.suite, "group-laws");
    assert!(report.cases.iter().all(|c| c.lhs <= c.rhs));
}
