//! Exhaustive census of trees of simplices and of the manifolds reachable
//! from them by gluing boundary ridges.

use super::bounds::{ceiling, e_upper, enumeration_bound, fuss_catalan};
use super::quotient::{Copy, Quotient};
use super::tree::{enumerate_trees, TreeOfSimplices};
use crate::complex::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

/// What the census counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusPredicate {
    /// Trees of simplices.
    Trees,
    /// Every simplicial pseudo-manifold reachable by gluings.
    Lc,
    /// Reachable pseudo-manifolds without boundary.
    LcClosed,
}

#[derive(Debug, Clone)]
pub struct CensusConfig {
    pub d: usize,
    pub n: usize,
    pub predicate: CensusPredicate,
    /// Maximum number of free (non-adjacent) gluings before the adjacent ones.
    pub max_free: usize,
    /// Cap on the number of explored states (and tree candidates).
    pub budget: u64,
}

/// Progress after one tree has been processed.
#[derive(Debug, Clone, Serialize)]
pub struct CensusProgress {
    pub tree: usize,
    pub trees: usize,
    pub labeled: u64,
    pub types: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub d: usize,
    pub n: usize,
    pub predicate: CensusPredicate,
    pub max_free: usize,
    pub trees: usize,
    /// Distinct labeled outcomes summed over the trees.
    pub labeled: u64,
    /// Distinct combinatorial types.
    pub types: usize,
    /// False when the budget ran out; counts are then lower bounds.
    pub complete: bool,
    /// Ceiling of the closed-form bound the type count is checked against.
    pub bound: String,
}

fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Gluings available from `q` as `(face, target facet, vertex map)`: every
/// pair with every bijection in lex order when `free`, else the adjacent
/// pairs with the bijection fixing a shared ridge.
fn moves(q: &mut Quotient, free: bool) -> Vec<(Copy, usize, Vec<(u32, u32)>)> {
    let ridges = q.boundary_copies();
    let mut out = Vec::new();
    for i in 0..ridges.len() {
        for j in i + 1..ridges.len() {
            let (a, b) = (ridges[i], ridges[j]);
            let (va, vb) = (q.vertices(a), q.vertices(b));
            if free {
                let mut img = vb.clone();
                img.sort_unstable();
                loop {
                    out.push((a, b.facet, va.iter().copied().zip(img.iter().copied()).collect()));
                    if !next_permutation(&mut img) {
                        break;
                    }
                }
                continue;
            }
            for &x in &va {
                for &y in &vb {
                    let ra = Copy { facet: a.facet, mask: a.mask & !(1 << q.pos(a.facet, x)) };
                    let rb = Copy { facet: b.facet, mask: b.mask & !(1 << q.pos(b.facet, y)) };
                    let shared = ra.mask == 0 || q.class(ra) == q.class(rb);
                    if !shared {
                        continue;
                    }
                    let mut map = vec![(x, y)];
                    for &u in va.iter().filter(|&&u| u != x) {
                        let cu = q.vertex_class(a.facet, u);
                        let w = vb.iter().copied().find(|&w| w != y && q.vertex_class(b.facet, w) == cu);
                        match w {
                            Some(w) => map.push((u, w)),
                            None => break,
                        }
                    }
                    if map.len() == va.len() {
                        out.push((a, b.facet, map));
                    }
                }
            }
        }
    }
    out
}

struct Shared {
    types: Mutex<BTreeSet<CanonicalForm>>,
    spent: AtomicU64,
    exhausted: AtomicBool,
}

fn explore(tree: &TreeOfSimplices, cfg: &CensusConfig, shared: &Shared) -> u64 {
    let mut seen: HashSet<(Vec<usize>, usize, bool)> = HashSet::new();
    let mut outcomes: HashSet<Vec<usize>> = HashSet::new();
    let mut stack = vec![(Quotient::new(tree), 0usize, false)];
    while let Some((mut q, used, adjacent_phase)) = stack.pop() {
        let key = q.key();
        if !seen.insert((key.clone(), used, adjacent_phase)) {
            continue;
        }
        if shared.spent.fetch_add(1, Ordering::Relaxed) >= cfg.budget {
            shared.exhausted.store(true, Ordering::Relaxed);
            break;
        }
        let accept = match cfg.predicate {
            CensusPredicate::LcClosed => q.boundary_copies().is_empty(),
            _ => true,
        };
        if accept && !outcomes.contains(&key) && q.is_simplicial() {
            outcomes.insert(key);
            shared.types.lock().unwrap().insert(canonical_form(&q.complex().0));
        }
        let mut next = Vec::new();
        if !adjacent_phase && used < cfg.max_free {
            next.extend(moves(&mut q, true).into_iter().map(|m| (m, used + 1, false)));
        }
        next.extend(moves(&mut q, false).into_iter().map(|m| (m, used, true)));
        for ((a, fb, map), u, phase) in next {
            let mut g = q.clone();
            g.union_faces(a, fb, &map);
            if g.check_facets().is_ok() {
                stack.push((g, u, phase));
            }
        }
    }
    outcomes.len() as u64
}

/// Runs the census. Trees are processed in parallel and share one
/// deduplication set, so totals do not depend on scheduling. The type
/// count is checked against the closed-form bound; exceeding it is an
/// internal error.
pub fn census(cfg: &CensusConfig, progress: Option<&(dyn Fn(CensusProgress) + Sync)>) -> Result<CensusReport> {
    let trees = match enumerate_trees(cfg.d, cfg.n, cfg.budget) {
        Ok(t) => t,
        Err(Error::BudgetExhausted) => {
            return Ok(CensusReport {
                d: cfg.d,
                n: cfg.n,
                predicate: cfg.predicate,
                max_free: cfg.max_free,
                trees: 0,
                labeled: 0,
                types: 0,
                complete: false,
                bound: String::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let (labeled, types, complete, bound) = if cfg.predicate == CensusPredicate::Trees {
        let bound = fuss_catalan(cfg.d as u64, cfg.n as u64);
        if num_bigint::BigUint::from(trees.len()) > bound {
            return Err(Error::Internal(format!("{} tree types exceed the bound {bound}", trees.len())));
        }
        if let Some(cb) = progress {
            cb(CensusProgress { tree: trees.len(), trees: trees.len(), labeled: trees.len() as u64, types: trees.len() });
        }
        (trees.len() as u64, trees.len(), true, bound.to_string())
    } else {
        let shared = Shared { types: Mutex::new(BTreeSet::new()), spent: AtomicU64::new(0), exhausted: AtomicBool::new(false) };
        let done = AtomicU64::new(0);
        let labeled: u64 = trees
            .par_iter()
            .map(|t| {
                let l = explore(t, cfg, &shared);
                let finished = done.fetch_add(1, Ordering::Relaxed) as usize + 1;
                if let Some(cb) = progress {
                    let types = shared.types.lock().unwrap().len();
                    cb(CensusProgress { tree: finished, trees: trees.len(), labeled: l, types });
                }
                l
            })
            .sum();
        let types = shared.types.into_inner().unwrap().len();
        let e = e_upper();
        let mut bound = BigRational::zero();
        for m in 0..=cfg.max_free {
            bound += enumeration_bound(cfg.d as u64, cfg.n as u64, m as i64, &e)?;
        }
        if BigRational::from_integer(types.into()) > bound {
            return Err(Error::Internal(format!("{types} types exceed the enumeration bound")));
        }
        (labeled, types, !shared.exhausted.into_inner(), ceiling(&bound).to_string())
    };
    Ok(CensusReport { d: cfg.d, n: cfg.n, predicate: cfg.predicate, max_free: cfg.max_free, trees: trees.len(), labeled, types, complete, bound })
}
