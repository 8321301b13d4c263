use morselab::calculus::*;
use morselab::complex::generators::{self, simplex, simplex_boundary};
use morselab::morse::*;
use morselab::{FacePoset, SimplicialComplex};
use std::collections::HashMap;

fn collapsible_matching(k: &SimplicialComplex) -> MorseMatching {
    let p = FacePoset::from_complex(k);
    let (out, _) = collapse_search(&p, &CollapseProblem::onto_vertex(), Strategy::Lex, u64::MAX, 0).unwrap();
    validate_matching(&p, &out.found().expect("collapsible").pairs).unwrap()
}

fn first_facet(k: &SimplicialComplex) -> Vec<u32> {
    k.facets()[0].clone()
}

#[test]
fn polar_sphere_dualizes_and_reverses_back() {
    let k = simplex_boundary(3);
    let p = FacePoset::from_complex(&k);
    let f = polar_morse(&k, &first_facet(&k), 3, None).unwrap();
    let dual = dual_block_complex(&k).unwrap();
    let g = dualize_matching(&p, &dual, &f, DualizeMode::BcToPlain).unwrap();
    assert_eq!(g.c(), &[1, 0, 1]);
    let back = undualize_closed(&p, &g).unwrap();
    assert_eq!(back.pairs(), f.pairs());
}

#[test]
fn equatorial_ball_dualizes_to_a_collapse() {
    let k = simplex(3);
    let p = FacePoset::from_complex(&k);
    let f = boundary_critical_morse(&k, &first_facet(&k), None).unwrap();
    let dual = dual_block_complex(&k).unwrap();
    let g = dualize_matching(&p, &dual, &f, DualizeMode::BcToPlain).unwrap();
    assert_eq!(g.critical(), &[dual.star(k.face_id(&first_facet(&k)).unwrap())]);
}

#[test]
fn collapsible_ball_dualizes_to_endo_collapsible() {
    let k = generators::bipyramid(3);
    let p = FacePoset::from_complex(&k);
    let f = collapsible_matching(&k);
    let dual = dual_block_complex(&k).unwrap();
    let g = dualize_matching(&p, &dual, &f, DualizeMode::PlainToBc).unwrap();
    assert!(g.is_boundary_critical());
    assert_eq!(g.c_int(), &[0, 0, 0, 1]);
}

#[test]
fn dualizing_twice_restores_interior_counts() {
    let k = generators::bipyramid(3);
    let p = FacePoset::from_complex(&k);
    let f = boundary_critical_morse(&k, &first_facet(&k), Some(3)).unwrap();
    let dual = dual_block_complex(&k).unwrap();
    let g = dualize_matching(&p, &dual, &f, DualizeMode::BcToPlain).unwrap();
    let dd = dual_block_poset(dual.poset());
    let h = dualize_matching(dual.poset(), &dd, &g, DualizeMode::PlainToBc).unwrap();
    assert_eq!(h.c_int(), f.c_int());
}

#[test]
fn mode_one_rejects_boundary_pairs() {
    let k = simplex(2);
    let p = FacePoset::from_complex(&k);
    let f = collapsible_matching(&k);
    let dual = dual_block_complex(&k).unwrap();
    assert!(dualize_matching(&p, &dual, &f, DualizeMode::BcToPlain).is_err());
}

#[test]
fn cone_over_equatorial_triangle() {
    let k = simplex(2);
    let f = boundary_critical_morse(&k, &first_facet(&k), None).unwrap();
    let (_, g) = cone_morse(&k, &f, "v").unwrap();
    assert_eq!(g.c_int(), &[0, 0, 0, 1]);
}

#[test]
fn two_triangles_patch_to_an_endo_collapsible_disk() {
    let m1 = SimplicialComplex::from_facets([[1, 2, 3]]).unwrap();
    let m2 = SimplicialComplex::from_facets([[1, 2, 4]]).unwrap();
    let inter = patch_interface(&m1, &m2).unwrap();
    let f = pin_critical(&m1, &first_facet(&m1), None).unwrap();
    let g = pin_critical(&m2, &first_facet(&m2), None).unwrap();
    let h = pin_critical(&inter, &first_facet(&inter), None).unwrap();
    let (_, u) = patch_morse(&m1, &m2, &f, &g, &h, &["1", "2"]).unwrap();
    assert_eq!(u.c_int(), &[0, 0, 1]);
}

#[test]
fn subdivided_simplex_is_collapsible() {
    let k = simplex(3);
    let f = boundary_critical_morse(&k, &first_facet(&k), None).unwrap();
    let t = subdivide_morse(&k, &f, DualizeMode::BcToPlain, &HashMap::new(), 0).unwrap();
    assert_eq!(t.matching.c(), &[1, 0, 0, 0]);
    let cert = Certificate::from_matching(&t.matching, CertificateKind::Collapsible);
    cert.validate_on(&t.complex).unwrap();
}

#[test]
fn subdivided_collapsible_simplex_is_endo_collapsible() {
    let k = simplex(3);
    let f = collapsible_matching(&k);
    let t = subdivide_morse(&k, &f, DualizeMode::PlainToBc, &HashMap::new(), 0).unwrap();
    assert_eq!(t.matching.c_int(), &[0, 0, 0, 1]);
    let cert = Certificate::from_matching(&t.matching, CertificateKind::EndoCollapsible);
    cert.validate_on(&t.complex).unwrap();
}

#[test]
fn subdivision_counts_follow_interior_critical_cells() {
    let k = generators::stacked_ball(3, 4, 7).unwrap();
    let p = FacePoset::from_complex(&k);
    for seed in 0..5 {
        let f = boundary_critical_morse(&k, &first_facet(&k), Some(seed)).unwrap();
        let t = subdivide_morse(&k, &f, DualizeMode::BcToPlain, &HashMap::new(), seed).unwrap();
        let d = 3;
        for j in 0..=d {
            assert_eq!(t.matching.c_at(j), f.c_int_at(d - j) + t.link_excess[j]);
        }
        let g = collapsible_matching(&k);
        let t2 = subdivide_morse(&k, &g, DualizeMode::PlainToBc, &HashMap::new(), seed).unwrap();
        assert!(t2.matching.is_boundary_critical());
        let _ = &p;
    }
}
