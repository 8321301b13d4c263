//! Shelling search by backtracking over facet orders.

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::{algebraic_depth, Coefficients};
use crate::morse::{Obstruction, Verdict};
use serde::Serialize;
use std::collections::HashSet;

/// A shelling order, as facet label lists.
#[derive(Debug, Clone, Serialize)]
pub struct Shelling {
    pub order: Vec<Vec<String>>,
}

/// Whether a pure complex fails to be Cohen-Macaulay over ℚ or F₂, which
/// rules out shellability and constructibility.
pub(crate) fn cm_obstruction(k: &SimplicialComplex) -> Result<Option<Obstruction>> {
    let d = k.dim().max(0) as usize;
    for field in [Coefficients::Q, Coefficients::F2] {
        let a = algebraic_depth(k, field)?;
        if a.adepth < d {
            return Ok(Some(Obstruction::NotCohenMacaulay { field: field.to_string(), adepth: a.adepth }));
        }
    }
    Ok(None)
}

/// Whether `f` may follow the facets in `placed`: its intersection with
/// their union must be a nonempty union of ridges of `f`.
pub fn extends_shelling(f: &[u32], placed: &[&[u32]]) -> bool {
    if placed.is_empty() {
        return true;
    }
    let missing: Vec<Vec<u32>> = placed.iter().map(|g| f.iter().copied().filter(|v| !g.contains(v)).collect()).collect();
    let ridges: Vec<u32> = missing.iter().filter(|m| m.len() == 1).map(|m| m[0]).collect();
    !ridges.is_empty() && missing.iter().all(|m| m.iter().any(|v| ridges.contains(v)))
}

/// Checks a full shelling order.
pub fn is_shelling(order: &[Vec<u32>]) -> bool {
    (0..order.len()).all(|j| {
        let placed: Vec<&[u32]> = order[..j].iter().map(|f| f.as_slice()).collect();
        extends_shelling(&order[j], &placed)
    })
}

struct Search<'a> {
    facets: &'a [Vec<u32>],
    failed: HashSet<Vec<u64>>,
    expansions: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn key(chosen: &[usize], n: usize) -> Vec<u64> {
        let mut bits = vec![0u64; n.div_ceil(64)];
        for &i in chosen {
            bits[i / 64] |= 1 << (i % 64);
        }
        bits
    }

    fn extend(&mut self, chosen: &mut Vec<usize>) -> bool {
        let n = self.facets.len();
        if chosen.len() == n {
            return true;
        }
        let key = Self::key(chosen, n);
        if self.failed.contains(&key) {
            return false;
        }
        if self.expansions >= self.budget {
            self.exhausted = true;
            return false;
        }
        self.expansions += 1;
        let placed: Vec<&[u32]> = chosen.iter().map(|&i| self.facets[i].as_slice()).collect();
        let candidates: Vec<usize> = (0..n).filter(|i| !chosen.contains(i) && extends_shelling(&self.facets[*i], &placed)).collect();
        for c in candidates {
            chosen.push(c);
            if self.extend(chosen) {
                return true;
            }
            chosen.pop();
            if self.exhausted {
                return false;
            }
        }
        self.failed.insert(key);
        false
    }
}

/// Searches for a shelling by depth-first extension of facet prefixes.
/// Failed prefixes are memoized by facet set, which is exact because the
/// extension condition depends only on the set.
pub fn find_shelling(k: &SimplicialComplex, budget: u64) -> Result<Verdict<Shelling>> {
    if !k.is_pure() {
        return Err(Error::Impure);
    }
    if k.num_facets() > 1 {
        if let Some(o) = cm_obstruction(k)? {
            return Ok(Verdict::No { obstruction: o });
        }
    }
    let facets = k.facets();
    let mut s = Search { facets, failed: HashSet::new(), expansions: 0, budget, exhausted: false };
    let mut chosen = Vec::new();
    if s.extend(&mut chosen) {
        let order = chosen.iter().map(|&i| k.labels_of(&facets[i])).collect();
        return Ok(Verdict::Yes { witness: Shelling { order } });
    }
    if s.exhausted {
        Ok(Verdict::Indeterminate { expansions: s.expansions })
    } else {
        Ok(Verdict::No { obstruction: Obstruction::Exhaustion { expansions: s.expansions } })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{for_each_permutation, generators};

    #[test]
    fn every_order_shells_the_tetrahedron_boundary() {
        let k = generators::simplex_boundary(3);
        let mut all = true;
        let mut idx = [0usize, 1, 2, 3];
        let mut count = 0;
        for_each_permutation(&mut idx, &mut |p| {
            let order: Vec<Vec<u32>> = p.iter().map(|&i| k.facets()[i].clone()).collect();
            all &= is_shelling(&order);
            count += 1;
        });
        assert_eq!(count, 24);
        assert!(all);
        assert!(find_shelling(&k, 100).unwrap().is_yes());
    }

    #[test]
    fn two_triangles_on_a_vertex_do_not_shell() {
        let k = SimplicialComplex::from_facets([[1, 2, 3], [1, 4, 5]]).unwrap();
        assert!(find_shelling(&k, 100).unwrap().is_no());
    }
}
