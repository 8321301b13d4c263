use morselab::complex::{canonical_form, generators, is_isomorphic, SimplicialComplex};
use morselab::lc::*;
use morselab::morse::{boundary_critical_morse, polar_morse, validate_matching};
use morselab::{Error, FacePoset};
use num_bigint::BigUint;

#[test]
fn tree_counts_for_triangles() {
    let counts: Vec<usize> = (1..=4).map(|n| enumerate_trees(2, n, 1_000_000).unwrap().len()).collect();
    assert_eq!(&counts[..3], &[1, 1, 1]);
    assert!(BigUint::from(counts[3]) <= fuss_catalan(2, 4));
}

#[test]
fn enumerated_trees_respect_fuss_catalan_and_boundary_count() {
    for d in 2..=3 {
        for n in 1..=5 {
            let trees = enumerate_trees(d, n, 1_000_000).unwrap();
            assert!(BigUint::from(trees.len()) <= fuss_catalan(d as u64, n as u64), "d={d} N={n}");
            for t in &trees {
                assert_eq!(t.boundary_ridges().len(), d * n - n + 2);
            }
        }
    }
}

#[test]
fn tree_enumeration_budget() {
    assert_eq!(enumerate_trees(3, 5, 10).unwrap_err(), Error::BudgetExhausted);
}

#[test]
fn octahedron_from_eight_triangles() {
    let k = generators::cross_polytope_boundary(2);
    let facet = k.facets()[0].clone();
    let f = polar_morse(&k, &facet, facet[0], None).unwrap();
    assert_eq!(f.c(), &[1, 0, 1]);
    let script = lc_disassemble(&k, &f).unwrap();
    assert_eq!(script.tree.num_facets(), 8);
    assert!(script.phase_a.is_empty());
    assert_eq!(script.phase_b.len(), 5);
    let out = lc_assemble(&script, true).unwrap();
    assert!(is_isomorphic(&out.complex, &k));
    assert_eq!(out.matching.unwrap().c_int_at(1), 0);
}

#[test]
fn round_trip_on_seeded_three_manifolds() {
    for seed in 0..100u64 {
        let n = 3 + (seed % 9) as usize;
        let (k, f) = if seed % 2 == 0 {
            let k = generators::stacked_sphere(3, n, seed).unwrap();
            let facet = k.facets()[0].clone();
            let f = polar_morse(&k, &facet, facet[0], Some(seed)).unwrap();
            (k, f)
        } else {
            let k = generators::stacked_ball(3, n, seed).unwrap();
            let facet = k.facets()[0].clone();
            let f = boundary_critical_morse(&k, &facet, Some(seed)).unwrap();
            (k, f)
        };
        let script = lc_disassemble(&k, &f).unwrap();
        assert_eq!(script.tree.boundary_ridges().len(), tree_boundary_count(3, k.num_facets()));
        assert_eq!(script.phase_a.len(), f.c_int_at(2));
        let json = serde_json::to_string(&script).unwrap();
        let script: GluingScript = serde_json::from_str(&json).unwrap();
        let out = lc_assemble(&script, true).unwrap();
        assert_eq!(canonical_form(&out.complex), canonical_form(&k), "seed {seed}");
        assert_eq!(out.matching.unwrap().c_int_at(2), script.phase_a.len());
    }
}

#[test]
fn free_gluings_leave_critical_ridges() {
    // Torus: no polar matching, so the facet tree leaves free gluings.
    let k = generators::torus();
    let facet = k.facets()[0].clone();
    let f = polar_morse(&k, &facet, facet[0], None).unwrap();
    assert_eq!(f.c(), &[1, 2, 1]);
    let script = lc_disassemble(&k, &f).unwrap();
    assert_eq!(script.phase_a.len(), 2);
    let out = lc_assemble(&script, true).unwrap();
    assert!(is_isomorphic(&out.complex, &k));
    assert_eq!(out.matching.unwrap().c_int_at(1), 2);
}

#[test]
fn disassembly_needs_one_critical_facet() {
    let k = generators::simplex_boundary(2);
    let p = FacePoset::from_complex(&k);
    let f = validate_matching(&p, &[]).unwrap();
    assert!(matches!(lc_disassemble(&k, &f), Err(Error::Precondition(_))));
    let edge = k.face_id(&[0, 1]).unwrap();
    assert!(validate_matching(&p, &[(edge, edge)]).is_err());
}

#[test]
fn strict_mode_rejects_pinched_quotients() {
    // Gluing the two ends of a strip of three triangles along a free pair
    // that shares a vertex creates a repeated vertex.
    let tree = TreeOfSimplices::from_facet_labels(&[vec!["1", "2", "3"], vec!["2", "3", "4"], vec!["3", "4", "5"]]).unwrap();
    let g = Gluing {
        pair: [vec!["1".into(), "3".into()], vec!["3".into(), "5".into()]],
        bijection: vec![["1".into(), "3".into()], ["3".into(), "5".into()]],
        shared_ridge: None,
    };
    let script = GluingScript { tree, phase_a: vec![g], phase_b: vec![] };
    assert!(matches!(lc_assemble(&script, true), Err(Error::Gluing(_))));
    let loose = lc_assemble(&script, false).unwrap();
    assert!(!loose.simplicial);
}

#[test]
fn census_of_closed_triangle_surfaces() {
    let cfg = CensusConfig { d: 2, n: 4, predicate: CensusPredicate::LcClosed, max_free: 0, budget: 1_000_000 };
    let r = census(&cfg, None).unwrap();
    assert!(r.complete);
    assert_eq!(r.types, 1);
    let tetra = canonical_form(&generators::simplex_boundary(3));
    let one = SimplicialComplex::from_facets([[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]).unwrap();
    assert_eq!(canonical_form(&one), tetra);
    for n in [6, 8] {
        let cfg = CensusConfig { d: 2, n, predicate: CensusPredicate::LcClosed, max_free: 0, budget: 5_000_000 };
        let r = census(&cfg, None).unwrap();
        assert!(r.complete);
        assert!(r.types >= 1);
        assert!(r.labeled >= r.types as u64);
    }
}

#[test]
fn census_counts_stay_below_bounds() {
    for (d, n, m) in [(2, 4, 1), (2, 5, 0), (3, 3, 0), (3, 4, 1)] {
        let cfg = CensusConfig { d, n, predicate: CensusPredicate::Lc, max_free: m, budget: 2_000_000 };
        let r = census(&cfg, None).unwrap();
        assert!(r.complete, "d={d} N={n}");
        assert!(r.bound.parse::<BigUint>().unwrap() >= BigUint::from(r.types));
    }
}

#[test]
fn enumeration_bound_is_monotone_and_positive() {
    let e = e_upper();
    for n in 1..20 {
        assert!(enumeration_bound(3, n + 1, 1, &e).unwrap() >= enumeration_bound(3, n, 1, &e).unwrap());
    }
    for d in 2..=5 {
        for n in 1..=10 {
            assert!(enumeration_bound(d, n, 1, &e).unwrap() > num_rational::BigRational::from_integer(0.into()));
        }
    }
}
