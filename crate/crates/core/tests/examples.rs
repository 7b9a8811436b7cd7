#[allow(dead_code)]
#[path = "../examples/group_laws.rs"]
mod group_laws;
#[allow(dead_code)]
#[path = "../examples/light_ray_flows.rs"]
mod light_ray_flows;
#[allow(dead_code)]
#[path = "../examples/cone_wedge_geometry.rs"]
mod cone_wedge_geometry;
#[allow(dead_code)]
#[path = "../examples/figures.rs"]
mod figures;
#[allow(dead_code)]
#[path = "../examples/weyl_kernels.rs"]
mod weyl_kernels;
#[allow(dead_code)]
#[path = "../examples/modular_actions.rs"]
mod modular_actions;
#[allow(dead_code)]
#[path = "../examples/operator_bounds.rs"]
mod operator_bounds;

#[test]
fn group_laws_example() {
    let text = group_laws::run_example().unwrap();
    assert!(text.contains("exchange"));
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn light_ray_flows_example() {
    let text = light_ray_flows::run_example().unwrap();
    assert!(text.starts_with("dir,x,"));
    assert!(text.contains("Minus,1,undefined,undefined"));
}

#[test]
fn cone_wedge_geometry_example() {
    let text = cone_wedge_geometry::run_example().unwrap();
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn figures_example() {
    let dir = tempfile::tempdir().unwrap();
    let paths = figures::run_example(dir.path()).unwrap();
    assert_eq!(paths.len(), 4);
    assert!(paths.iter().all(|p| std::fs::read_to_string(p).unwrap().contains("<svg")));
}

#[test]
fn weyl_kernels_example() {
    let text = weyl_kernels::run_example().unwrap();
    assert!(text.contains("Gram minimum eigenvalue"));
}

#[test]
fn modular_actions_example() {
    let text = modular_actions::run_example().unwrap();
    assert!(text.contains("compact: false"));
}

#[test]
fn operator_bounds_example() {
    let text = operator_bounds::run_example().unwrap();
    assert_eq!(text.lines().count(), 6);
}
