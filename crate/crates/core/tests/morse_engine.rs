use morselab::complex::cubes::pile_of_cubes;
use morselab::complex::generators::{self, simplex, simplex_boundary};
use morselab::morse::*;
use morselab::{Coefficients, FacePoset, SimplicialComplex};

fn cfg() -> SearchConfig {
    SearchConfig { budget: 200_000, seed: 1, ..Default::default() }
}

#[test]
fn single_simplex_is_endo_collapsible_with_no_steps() {
    let v = is_endo_collapsible(&simplex(3), &cfg()).unwrap();
    let w = v.witness().unwrap();
    assert!(w.sequence.pairs.is_empty());
}

#[test]
fn sphere_boundaries_are_endo_collapsible() {
    for d in 3..=5 {
        let k = simplex_boundary(d);
        let v = is_endo_collapsible(&k, &cfg()).unwrap();
        let w = v.witness().expect("endo-collapsible");
        w.certificate.validate_on(&k).unwrap();
        w.sequence.replay(&FacePoset::from_complex(&k)).unwrap();
    }
}

#[test]
fn pile_minus_center_obstruction_and_depth() {
    let pile = pile_of_cubes(3, 3, 3, &[[1, 1, 1]]).unwrap().complex;
    match is_endo_collapsible(&pile, &cfg()).unwrap() {
        Verdict::No { obstruction: Obstruction::Homology { degree, forces_critical_dim, .. } } => {
            assert_eq!((degree, forces_critical_dim), (2, 1));
        }
        other => panic!("expected a homology obstruction, got {other:?}"),
    }
    let dc = collapse_depth(&pile, &cfg()).unwrap();
    assert_eq!(dc.k, 2);
    assert_eq!(dc.status, DepthStatus::Exact);
    dc.witness.unwrap().certificate.validate_on(&pile).unwrap();
}

#[test]
fn collapsibility() {
    assert!(is_collapsible(&simplex(3), &cfg()).unwrap().is_yes());
    assert!(is_collapsible(&simplex(3).barycentric_subdivision(), &cfg()).unwrap().is_yes());
    assert!(is_collapsible(&simplex_boundary(3), &cfg()).unwrap().is_no());
}

#[test]
fn boundary_critical_on_balls() {
    let tet = simplex(3);
    let m = boundary_critical_morse(&tet, &[0, 1, 2, 3], None).unwrap();
    assert_eq!(m.c_int(), &[0, 0, 0, 1]);
    assert_eq!(m.critical().len(), 15);
    let cone = simplex_boundary(3).cone("apex").unwrap();
    for f in cone.facets().to_vec() {
        let m = boundary_critical_morse(&cone, &f, None).unwrap();
        assert!(m.is_equatorial());
        assert_eq!(m.c_int(), &[0, 0, 0, 1]);
    }
    assert!(matches!(
        boundary_critical_morse(&simplex_boundary(3), &[0, 1, 2], None),
        Err(morselab::Error::ClosedInput)
    ));
}

#[test]
fn polar_on_tetrahedron_boundary() {
    let k = simplex_boundary(3);
    let m = polar_morse(&k, &[0, 1, 2], 3, None).unwrap();
    assert_eq!(m.c(), &[1, 0, 1]);
    let f = matching_to_function(&FacePoset::from_complex(&k), &m);
    let mut pairs = morse_function_pairs(&FacePoset::from_complex(&k), &f).unwrap();
    pairs.sort_unstable();
    assert_eq!(pairs, m.pairs());
}

#[test]
fn inequalities_on_torus_and_ball() {
    let t = generators::torus();
    let m = polar_morse(&t, &t.facets()[0].clone(), 0, None).unwrap();
    let r = verify_morse_inequalities(&t, &m, false, Coefficients::Q).unwrap();
    assert!(r.holds);
    assert!(m.c_at(1) >= 2);
    let ball = SimplicialComplex::from_facets([[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 4, 6]]).unwrap();
    let m = boundary_critical_morse(&ball, &[0, 1, 2, 3], None).unwrap();
    let r = verify_morse_inequalities(&ball, &m, true, Coefficients::Q).unwrap();
    assert!(r.holds);
}
