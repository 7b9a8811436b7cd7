use modular_flow::axb_group::*;
use modular_flow::TWO_PI;
use proptest::prelude::*;

type Mat = [[f64; 2]; 2];

fn matmul(x: Mat, y: Mat) -> Mat {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

fn mat(g: GroupElement) -> Mat {
    [[g.lambda(), g.tau()], [0.0, 1.0]]
}

/// Matrix exponential of `r [[a, b], [0, 0]]` by a truncated Taylor series.
fn expm(a: f64, b: f64, r: f64) -> Mat {
    let gen = [[a * r, b * r], [0.0, 0.0]];
    let mut term = [[1.0, 0.0], [0.0, 1.0]];
    let mut sum = term;
    for k in 1..60 {
        term = matmul(term, gen);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                sum[i][j] += term[i][j];
            }
        }
    }
    sum
}

fn mat_close(x: Mat, y: Mat, tol: f64) -> bool {
    let scale = 1.0 + x.iter().flatten().chain(y.iter().flatten()).fold(0.0f64, |m, v| m.max(v.abs()));
    x.iter().flatten().zip(y.iter().flatten()).all(|(a, b)| (a - b).abs() <= tol * scale)
}

#[test]
fn spot_values_against_matrix_oracle() {
    let g = GroupElement::new(0.5, 2.0).unwrap();
    assert_eq!(mat(g * g), matmul(mat(g), mat(g)));
    assert_eq!(mat(inverse(g)), [[2.0, -4.0], [0.0, 1.0]]);

    let u = 2f64.ln() / TWO_PI;
    let s = -3f64.ln() / TWO_PI;
    let f = exchange_f(u, s).unwrap();
    assert!((f + 2f64.ln() / TWO_PI).abs() < 1e-14);

    let tau = (TWO_PI.exp() - 1.0) / TWO_PI;
    let d = decompose_pos(tau, Branch::First).unwrap();
    assert!((d.s + 1.0).abs() < 1e-13 && (d.u - 1.0).abs() < 1e-13);
    let product = matmul(mat(g_m(d.s)), mat(g_n(d.u)));
    assert!(mat_close(product, mat(g_pos(tau)), 1e-13));
}

#[test]
fn distinguished_subgroups_are_matrix_exponentials() {
    for r in [-0.8, -0.1, 0.0, 0.3, 1.1] {
        assert!(mat_close(mat(g_n(r)), expm(-TWO_PI, 0.0, r), 1e-13));
        assert!(mat_close(mat(g_pos(r)), expm(0.0, 1.0, r), 1e-14));
        assert!(mat_close(mat(g_m(r)), expm(-TWO_PI, -1.0, r), 1e-13));
    }
}

fn element() -> impl Strategy<Value = GroupElement> {
    (-3.0f64..3.0, -5.0f64..5.0).prop_map(|(u, t)| GroupElement::from_log_scale(u / TWO_PI, t).unwrap())
}

fn rel_gap(x: GroupElement, y: GroupElement) -> f64 {
    x.distance(&y) / (1.0 + x.lambda().max(x.tau().abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn associativity(a in element(), b in element(), c in element()) {
        prop_assert!(rel_gap((a * b) * c, a * (b * c)) < 1e-12);
    }

    #[test]
    fn compose_matches_matrices(a in element(), b in element()) {
        prop_assert!(mat_close(mat(a * b), matmul(mat(a), mat(b)), 1e-14));
    }

    #[test]
    fn inverse_is_two_sided(a in element()) {
        prop_assert!(rel_gap(a * inverse(a), GroupElement::IDENTITY) < 1e-12);
        prop_assert!(rel_gap(inverse(a) * a, GroupElement::IDENTITY) < 1e-12);
    }

    #[test]
    fn subgroup_additivity(a in -3.0f64..3.0, b in -2.0f64..2.0, r1 in -1.0f64..1.0, r2 in -1.0f64..1.0) {
        prop_assume!(a != 0.0 || b != 0.0);
        let p = SubgroupParams::new(a, b).unwrap();
        let lhs = subgroup_element(p, r1) * subgroup_element(p, r2);
        prop_assert!(rel_gap(lhs, subgroup_element(p, r1 + r2)) < 1e-12);
        prop_assert!(mat_close(mat(subgroup_element(p, r1)), expm(a, b, r1), 1e-12));
    }

    #[test]
    fn exchange_identity(u in -0.5f64..0.5, s in -0.5f64..0.5) {
        // only pairs inside the domain of F
        prop_assume!(1.0 + (-TWO_PI * u).exp() * (-TWO_PI * s).exp_m1() > 1e-3);
        let f = exchange_f(u, s).unwrap();
        let lhs = g_n(u) * g_m(s);
        let rhs = g_m(f) * g_n(s + u - f);
        prop_assert!(rel_gap(lhs, rhs) < 1e-12);
    }

    #[test]
    fn positive_group_factorizes(tau in -0.15f64..3.0, second in -3.0f64..0.15) {
        let d = decompose_pos(tau, Branch::First).unwrap();
        prop_assert!(rel_gap(d.compose(), g_pos(tau)) < 1e-12);
        let d = decompose_pos(second, Branch::Second).unwrap();
        prop_assert!(rel_gap(d.compose(), g_pos(second)) < 1e-12);
    }

    #[test]
    fn conjugation_scales_translations(r in -0.6f64..0.6, tau in -4.0f64..4.0) {
        for p in [SubgroupParams::MODULAR_N, SubgroupParams::MODULAR_M] {
            let conj = subgroup_element(p, r) * g_pos(tau) * subgroup_element(p, -r);
            prop_assert!((conj.lambda() - 1.0).abs() < 1e-12);
            let expected = conjugate_pos(p, r, tau);
            prop_assert!((conj.tau() - expected).abs() < 1e-12 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn action_is_a_homomorphism(a in element(), b in element(), x in -10.0f64..10.0) {
        let lhs = (a * b).apply(x);
        let rhs = a.apply(b.apply(x));
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
    }
}
