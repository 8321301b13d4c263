//! Standard small triangulations and random stacked balls and spheres.

use super::SimplicialComplex;
use crate::error::{Error, Result};
use crate::rng;
use rand::Rng;

fn sc(facets: Vec<Vec<u32>>) -> SimplicialComplex {
    SimplicialComplex::from_facets(facets).expect("generator facets are valid")
}

/// The solid `d`-simplex on vertices `1..=d+1`.
pub fn simplex(d: usize) -> SimplicialComplex {
    sc(vec![(1..=d as u32 + 1).collect()])
}

/// Boundary of the `d`-simplex, a `(d-1)`-sphere (`d >= 1`).
pub fn simplex_boundary(d: usize) -> SimplicialComplex {
    let all: Vec<u32> = (1..=d as u32 + 1).collect();
    sc((0..all.len()).map(|skip| all.iter().copied().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v).collect()).collect())
}

/// Boundary of the `(d+1)`-dimensional cross-polytope, a `d`-sphere.
pub fn cross_polytope_boundary(d: usize) -> SimplicialComplex {
    let n = d + 1;
    let mut facets = Vec::new();
    for signs in 0u32..(1 << n) {
        facets.push((0..n as u32).map(|i| 2 * i + 1 + (signs >> i & 1)).collect());
    }
    sc(facets)
}

/// Seven-vertex torus.
pub fn torus() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7u32 {
        facets.push(vec![i + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1]);
        facets.push(vec![i + 1, (i + 2) % 7 + 1, (i + 3) % 7 + 1]);
    }
    sc(facets)
}

/// Six-vertex real projective plane.
pub fn projective_plane() -> SimplicialComplex {
    sc(vec![
        vec![1, 2, 3],
        vec![1, 3, 4],
        vec![1, 4, 5],
        vec![1, 5, 6],
        vec![1, 2, 6],
        vec![2, 3, 5],
        vec![3, 4, 6],
        vec![2, 4, 5],
        vec![3, 5, 6],
        vec![2, 4, 6],
    ])
}

/// Annulus with outer cycle 1,2,3 and inner cycle 4,5,6.
pub fn annulus() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..3u32 {
        let (a, a1, b, b1) = (i + 1, (i + 1) % 3 + 1, i + 4, (i + 1) % 3 + 4);
        facets.push(vec![a, a1, b]);
        facets.push(vec![a1, b, b1]);
    }
    sc(facets)
}

/// Five-vertex Möbius strip.
pub fn mobius_strip() -> SimplicialComplex {
    sc((0..5u32).map(|i| vec![i + 1, (i + 1) % 5 + 1, (i + 2) % 5 + 1]).collect())
}

/// Two `d`-simplices sharing a ridge.
pub fn bipyramid(d: usize) -> SimplicialComplex {
    let base: Vec<u32> = (1..=d as u32).collect();
    let mut a = base.clone();
    a.push(d as u32 + 1);
    let mut b = base;
    b.push(d as u32 + 2);
    sc(vec![a, b])
}

/// Random stacked `d`-ball with `n` facets: each new simplex is glued onto a
/// uniformly chosen boundary ridge through one new vertex. Its dual graph is
/// a tree.
pub fn stacked_ball(d: usize, n: usize, seed: u64) -> Result<SimplicialComplex> {
    if d == 0 || n == 0 {
        return Err(Error::Precondition("stacked balls need d >= 1 and N >= 1".into()));
    }
    let mut r = rng::stream(seed, 0);
    let mut facets: Vec<Vec<u32>> = vec![(0..=d as u32).collect()];
    let mut free: Vec<Vec<u32>> = Vec::new();
    for skip in 0..=d {
        free.push(facets[0].iter().copied().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v).collect());
    }
    let mut next = d as u32 + 1;
    for _ in 1..n {
        let ridge = free.swap_remove(r.gen_range(0..free.len()));
        let mut f = ridge.clone();
        f.push(next);
        for skip in 0..ridge.len() {
            let mut g: Vec<u32> = ridge.iter().copied().enumerate().filter(|&(i, _)| i != skip).map(|(_, v)| v).collect();
            g.push(next);
            free.push(g);
        }
        facets.push(f);
        next += 1;
    }
    let labels = (1..=next).map(|v| v.to_string()).collect();
    Ok(SimplicialComplex::from_parts(labels, facets))
}

/// Boundary of a random stacked `(d+1)`-ball with `n` facets: a stacked `d`-sphere.
pub fn stacked_sphere(d: usize, n: usize, seed: u64) -> Result<SimplicialComplex> {
    stacked_ball(d + 1, n, seed)?.boundary_complex()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_characteristics() {
        assert_eq!(simplex_boundary(3).euler_characteristic(), 2);
        assert_eq!(simplex_boundary(4).euler_characteristic(), 0);
        assert_eq!(cross_polytope_boundary(2).f_vector(), vec![6, 12, 8]);
        assert_eq!(torus().euler_characteristic(), 0);
        assert_eq!(projective_plane().euler_characteristic(), 1);
        assert_eq!(annulus().euler_characteristic(), 0);
        assert_eq!(mobius_strip().euler_characteristic(), 0);
    }

    #[test]
    fn closed_surfaces_are_pseudomanifolds() {
        for k in [torus(), projective_plane(), cross_polytope_boundary(2)] {
            let info = k.pseudomanifold_check();
            assert!(info.is_pseudo_manifold && info.is_closed);
        }
    }

    #[test]
    fn stacked_ball_counts() {
        for seed in 0..5 {
            let b = stacked_ball(3, 6, seed).unwrap();
            assert_eq!(b.num_facets(), 6);
            assert_eq!(b.num_vertices(), 9);
            assert_eq!(b.boundary_complex().unwrap().num_facets(), 3 * 6 - 6 + 2);
            let s = stacked_sphere(2, 5, seed).unwrap();
            assert_eq!(s.euler_characteristic(), 2);
        }
    }
}
