use morselab::complex::cubes::pile_of_cubes;
use morselab::complex::generators;
use morselab::morse::{DepthStatus, SearchConfig};
use morselab::recognition::*;
use morselab::Error;

fn cfg(budget: u64) -> SearchConfig {
    SearchConfig { budget, ..SearchConfig::default() }
}

#[test]
fn simplex_report() {
    let r = hierarchy_report(&generators::simplex(3), &cfg(100_000)).unwrap();
    assert!(r.shellable.is_yes() && r.constructible.is_yes() && r.endo_collapsible.is_yes() && r.locally_constructible.is_yes());
    assert_eq!((r.cdepth.value, r.cdepth.status, r.adepth), (3, DepthStatus::Exact, 3));
    assert_eq!(r.hdepth.value, 3);
    assert!(r.violations().is_empty());
}

#[test]
fn tetrahedron_boundary_is_yes_throughout() {
    let r = hierarchy_report(&generators::simplex_boundary(3), &cfg(100_000)).unwrap();
    assert!(r.shellable.is_yes() && r.constructible.is_yes() && r.endo_collapsible.is_yes() && r.locally_constructible.is_yes());
    assert!(r.h1_vanishes && r.cohen_macaulay);
    assert_eq!((r.hdepth.value, r.hdepth.status), (2, DepthStatus::Exact));
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["shellable"]["status"], "yes");
    assert!(json["shellable"]["evidence"].is_string());
}

#[test]
fn pile_minus_center_is_lc_but_not_endo_collapsible() {
    let pile = pile_of_cubes(3, 3, 3, &[[1, 1, 1]]).unwrap().complex;
    let r = hierarchy_report(&pile, &cfg(20_000)).unwrap();
    assert!(r.locally_constructible.is_yes());
    assert!(r.endo_collapsible.is_no());
    assert!(r.shellable.is_no() && r.constructible.is_no());
    assert_eq!(r.cdepth.value, 2);
    assert!(r.adepth < 3);
    let c = certify_ball_or_sphere(&pile, &cfg(20_000)).unwrap();
    assert_eq!(c.label, ShapeLabel::Indeterminate);
    assert!(c.obstruction.is_some());
    assert_eq!(c.homology.betti(2), 1);
}

#[test]
fn shape_labels() {
    let s = certify_ball_or_sphere(&generators::simplex_boundary(4), &cfg(100_000)).unwrap();
    assert_eq!(s.label, ShapeLabel::Sphere);
    let b = certify_ball_or_sphere(&generators::stacked_ball(3, 6, 7).unwrap(), &cfg(100_000)).unwrap();
    assert_eq!(b.label, ShapeLabel::Ball);
    assert!(b.certificate.is_some());
    let t = certify_ball_or_sphere(&generators::torus(), &cfg(100_000)).unwrap();
    assert_eq!(t.label, ShapeLabel::Indeterminate);
}

#[test]
fn non_pseudo_manifolds_are_rejected() {
    let k = morselab::SimplicialComplex::from_facets([[1, 2, 3], [1, 4, 5]]).unwrap();
    assert!(matches!(hierarchy_report(&k, &cfg(100)), Err(Error::NotPseudoManifold(_))));
}

#[test]
fn impure_input_is_an_error() {
    let k = morselab::SimplicialComplex::from_facets(vec![vec![1, 2, 3], vec![3, 4]]).unwrap();
    assert_eq!(find_shelling(&k, 10).unwrap_err(), Error::Impure);
    assert_eq!(is_constructible(&k, 10).unwrap_err(), Error::Impure);
}

#[test]
fn tiny_budget_is_indeterminate() {
    let k = generators::stacked_sphere(3, 12, 3).unwrap();
    assert!(matches!(is_constructible(&k, 2).unwrap(), morselab::morse::Verdict::Indeterminate { .. }));
}

#[test]
fn strict_implications_on_small_corpus() {
    let corpus = vec![
        generators::bipyramid(3),
        generators::cross_polytope_boundary(2),
        generators::torus(),
        generators::projective_plane(),
        generators::annulus(),
        generators::mobius_strip(),
        generators::stacked_ball(3, 5, 1).unwrap(),
        generators::stacked_sphere(2, 6, 2).unwrap(),
    ];
    for k in corpus {
        let r = hierarchy_report(&k, &cfg(50_000)).unwrap();
        assert!(r.violations().is_empty());
    }
    let torus = hierarchy_report(&generators::torus(), &cfg(50_000)).unwrap();
    assert!(torus.shellable.is_no() && !torus.h1_vanishes);
}
