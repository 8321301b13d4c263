//! Hamiltonian depth: the largest `k` for which some collapsible
//! `k`-subcomplex contains the whole `(k-1)`-skeleton.

use super::constructible::any_combination;
use crate::complex::SimplicialComplex;
use crate::error::Result;
use crate::morse::{is_collapsible, DepthStatus, SearchConfig, Verdict};
use crate::rng;
use rand::seq::SliceRandom;
use serde::Serialize;
use std::collections::HashSet;

#[derive(Debug, Clone, Serialize)]
pub struct HamiltonianDepth {
    pub value: usize,
    pub status: DepthStatus,
    /// Facets of the witnessing subcomplex.
    pub witness: Option<Vec<Vec<String>>>,
    pub expansions: u64,
}

enum Level {
    Found(SimplicialComplex),
    None,
    Unknown,
}

fn boundary(f: &[u32]) -> impl Iterator<Item = Vec<u32>> + '_ {
    (0..f.len()).map(move |i| [&f[..i], &f[i + 1..]].concat())
}

/// Grows a collapsible `dim`-subcomplex containing the `(dim-1)`-skeleton by
/// elementary expansions, one dimension at a time: every added `j`-face
/// brings exactly one new `(j-1)`-face, so the reversed sequence is a
/// collapse onto a vertex. Returns the faces added, or `None` when stuck.
fn grow(k: &SimplicialComplex, dim: usize, rng: &mut rng::Rng, used: &mut u64) -> Option<Vec<Vec<u32>>> {
    let mut present: HashSet<Vec<u32>> = HashSet::new();
    present.insert(k.faces(0).choose(rng)?.clone());
    for j in 1..=dim {
        let lower = k.faces(j - 1).len();
        let mut pool: Vec<&Vec<u32>> = k.faces(j).iter().collect();
        pool.shuffle(rng);
        while present.iter().filter(|f| f.len() == j).count() < lower {
            *used += 1;
            let pick = pool.iter().position(|f| {
                let mut missing = boundary(f).filter(|b| !present.contains(b));
                missing.next().is_some() && missing.next().is_none()
            })?;
            let f = pool.swap_remove(pick);
            present.extend(boundary(f));
            present.insert(f.clone());
        }
    }
    Some(present.into_iter().collect())
}

fn binomial_at_most(n: usize, s: usize, cap: u64) -> bool {
    let mut c: u128 = 1;
    for i in 0..s.min(n - s) {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > cap as u128 {
            return false;
        }
    }
    true
}

/// Searches the `k`-subcomplexes spanned by the `(k-1)`-skeleton and `s`
/// of the `k`-faces, where `s` is forced by the Euler characteristic of a
/// collapsible complex. Seeded greedy growth runs first; the exhaustive
/// subset enumeration runs only when it fits in the remaining budget, each
/// candidate getting a greedy-then-exhaustive collapsibility test.
fn level(k: &SimplicialComplex, dim: usize, cfg: &SearchConfig, used: &mut u64) -> Result<Level> {
    let skeleton = k.skeleton(dim - 1);
    let chi = skeleton.euler_characteristic();
    let sign = if dim % 2 == 0 { 1 } else { -1 };
    let s = (1 - chi) * sign;
    let tops = k.faces(dim);
    if s < 0 || s as usize > tops.len() {
        return Ok(Level::None);
    }
    for r in 0..cfg.restarts.max(1) as u64 {
        let mut stream = rng::stream(cfg.seed, (dim as u64) << 32 | r);
        if let Some(faces) = grow(k, dim, &mut stream, used) {
            return Ok(Level::Found(k.generated_by(faces)));
        }
    }
    if !binomial_at_most(tops.len(), s as usize, cfg.budget.saturating_sub(*used)) {
        return Ok(Level::Unknown);
    }
    let per_candidate = (cfg.budget / 16).max(1);
    let mut outcome = Ok(Level::None);
    any_combination(tops.len(), s as usize, |pick| {
        if *used >= cfg.budget {
            outcome = Ok(Level::Unknown);
            return true;
        }
        *used += 1;
        let mut faces: Vec<Vec<u32>> = skeleton.facets().iter().filter(|f| !f.is_empty()).cloned().collect();
        faces.extend(pick.iter().map(|&i| tops[i].clone()));
        let h = k.generated_by(faces);
        let local = SearchConfig { budget: per_candidate.min(cfg.budget.saturating_sub(*used)).max(1), ..*cfg };
        match is_collapsible(&h, &local) {
            Ok(Verdict::Yes { witness }) => {
                *used += witness.sequence.pairs.len() as u64;
                outcome = Ok(Level::Found(h));
                true
            }
            Ok(Verdict::No { .. }) => false,
            Ok(Verdict::Indeterminate { expansions }) => {
                *used += expansions;
                if !matches!(outcome, Ok(Level::Unknown)) {
                    outcome = Ok(Level::Unknown);
                }
                false
            }
            Err(e) => {
                outcome = Err(e);
                true
            }
        }
    });
    outcome
}

/// Hamiltonian depth of a complex. Disconnected inputs get 0. A value is
/// exact when it equals the dimension or every larger level was searched
/// to completion without a witness.
pub fn hamiltonian_depth(k: &SimplicialComplex, cfg: &SearchConfig) -> Result<HamiltonianDepth> {
    let d = k.dim().max(0) as usize;
    if !k.is_connected() {
        return Ok(HamiltonianDepth { value: 0, status: DepthStatus::Exact, witness: None, expansions: 0 });
    }
    let mut used = 0;
    let mut higher_unknown = false;
    for dim in (1..=d).rev() {
        match level(k, dim, cfg, &mut used)? {
            Level::Found(h) => {
                let status = if higher_unknown { DepthStatus::LowerBoundProved } else { DepthStatus::Exact };
                return Ok(HamiltonianDepth { value: dim, status, witness: Some(h.facet_labels()), expansions: used });
            }
            Level::None => {}
            Level::Unknown => higher_unknown = true,
        }
    }
    if d == 0 {
        return Ok(HamiltonianDepth { value: 0, status: DepthStatus::Exact, witness: Some(k.facet_labels()), expansions: 0 });
    }
    Ok(HamiltonianDepth { value: 0, status: DepthStatus::Indeterminate, witness: None, expansions: used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generators;

    #[test]
    fn sphere_and_path() {
        let cfg = SearchConfig::default();
        let h = hamiltonian_depth(&generators::simplex_boundary(3), &cfg).unwrap();
        assert_eq!((h.value, h.status), (2, DepthStatus::Exact));
        let path = SimplicialComplex::from_facets([[1, 2], [2, 3]]).unwrap();
        assert_eq!(hamiltonian_depth(&path, &cfg).unwrap().value, 1);
        let ball = generators::simplex(3);
        assert_eq!(hamiltonian_depth(&ball, &cfg).unwrap().value, 3);
    }

    #[test]
    fn grown_witnesses_are_collapsible_and_hamiltonian() {
        let cfg = SearchConfig::default();
        for seed in 0..10 {
            let k = generators::stacked_sphere(3, 6, seed).unwrap();
            let h = hamiltonian_depth(&k, &SearchConfig { seed, ..cfg }).unwrap();
            let w = SimplicialComplex::from_facets(h.witness.unwrap()).unwrap();
            assert!(is_collapsible(&w, &cfg).unwrap().is_yes());
            assert_eq!(w.skeleton(h.value - 1).num_facets(), k.faces(h.value - 1).len());
        }
    }
}
