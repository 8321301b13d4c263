//! Trees of simplices: balls built by gluing simplices along a dual tree.

use crate::complex::{canonical_form, CanonicalForm, SimplicialComplex};
use crate::error::{Error, Result};
use crate::rng;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};

/// Tree edge: `child` is glued to `parent` along `ridge` (vertex ids).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    pub ridge: Vec<u32>,
}

/// A pure `d`-complex whose dual graph is a tree. Facets are listed root
/// first in breadth-first order; `facets[i]` holds vertex ids of `complex`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct TreeOfSimplices {
    d: usize,
    complex: SimplicialComplex,
    facets: Vec<Vec<u32>>,
    edges: Vec<TreeEdge>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    facets: Vec<Vec<String>>,
}

impl TryFrom<TreeJson> for TreeOfSimplices {
    type Error = Error;
    fn try_from(t: TreeJson) -> Result<Self> {
        TreeOfSimplices::from_facet_labels(&t.facets)
    }
}

impl From<TreeOfSimplices> for TreeJson {
    fn from(t: TreeOfSimplices) -> Self {
        TreeJson { facets: t.facet_labels() }
    }
}

impl TreeOfSimplices {
    /// Builds a tree from facet label lists; the first facet is the root.
    pub fn from_facet_labels<S: AsRef<str>>(facets: &[Vec<S>]) -> Result<Self> {
        let complex = SimplicialComplex::from_facets(facets.iter().map(|f| f.iter().map(|s| s.as_ref().to_string())))?;
        let first: Vec<String> = facets[0].iter().map(|s| s.as_ref().to_string()).collect();
        let root = complex.face_from_labels(&first).ok_or(Error::NotAFace(first))?;
        if complex.num_facets() != facets.len() {
            return Err(Error::Precondition("facet lists repeat or contain one another".into()));
        }
        Self::from_complex(&complex, &root)
    }

    /// Reads a complex as a tree rooted at `root`, which must be a facet.
    pub fn from_complex(k: &SimplicialComplex, root: &[u32]) -> Result<Self> {
        if !k.is_pure() || k.dim() < 1 {
            return Err(Error::Precondition("a tree of simplices is a pure complex of dimension at least 1".into()));
        }
        let d = k.dim() as usize;
        let n = k.num_facets();
        let root_idx = k.facets().iter().position(|f| f.as_slice() == root).ok_or_else(|| Error::NotAFace(k.labels_of(root)))?;
        let g = k.dual_graph()?;
        if g.arcs.len() + 1 != n || !g.is_connected() {
            return Err(Error::Precondition("the dual graph is not a tree".into()));
        }
        let parents = g.bfs_tree(root_idx);
        let mut order = Vec::with_capacity(n);
        let mut pos = vec![usize::MAX; n];
        let mut queue = VecDeque::from([root_idx]);
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, p) in parents.iter().enumerate() {
            if let Some(a) = *p {
                if a != usize::MAX {
                    children[g.neighbor(a, v)].push(v);
                }
            }
        }
        while let Some(u) = queue.pop_front() {
            pos[u] = order.len();
            order.push(u);
            queue.extend(children[u].iter().copied());
        }
        let facets: Vec<Vec<u32>> = order.iter().map(|&i| k.facets()[i].clone()).collect();
        let mut edges: Vec<TreeEdge> = order
            .iter()
            .skip(1)
            .map(|&c| {
                let a = parents[c].unwrap();
                TreeEdge { parent: pos[g.neighbor(a, c)], child: pos[c], ridge: g.arcs[a].2.clone() }
            })
            .collect();
        edges.sort_by_key(|e| e.child);
        let tree = TreeOfSimplices { d, complex: k.clone(), facets, edges };
        let expected = (d - 1) * n + 2;
        if tree.boundary_ridges().len() != expected {
            return Err(Error::Internal(format!("tree has {} boundary ridges, expected {expected}", tree.boundary_ridges().len())));
        }
        Ok(tree)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn facet_labels(&self) -> Vec<Vec<String>> {
        self.facets.iter().map(|f| self.complex.labels_of(f)).collect()
    }

    /// Ridges lying in exactly one facet, as `(facet index, ridge)`.
    pub fn boundary_ridges(&self) -> Vec<(usize, Vec<u32>)> {
        let mut count: BTreeMap<Vec<u32>, (usize, usize)> = BTreeMap::new();
        for (i, f) in self.facets.iter().enumerate() {
            for skip in 0..f.len() {
                let r: Vec<u32> = f.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                count.entry(r).or_insert((i, 0)).1 += 1;
            }
        }
        count.into_iter().filter(|(_, (_, c))| *c == 1).map(|(r, (i, _))| (i, r)).collect()
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canonical_form(&self.complex)
    }
}

/// Number of boundary ridges of any tree of `n` `d`-simplices.
pub fn tree_boundary_count(d: usize, n: usize) -> usize {
    (d - 1) * n + 2
}

fn grow(facets: &[Vec<u32>], ridge: &[u32], apex: u32) -> Vec<Vec<u32>> {
    let mut next = facets.to_vec();
    let mut f = ridge.to_vec();
    f.push(apex);
    next.push(f);
    next
}

fn from_ids(d: usize, facets: Vec<Vec<u32>>) -> Result<TreeOfSimplices> {
    let k = SimplicialComplex::from_facets(facets.iter().map(|f| f.iter().map(|v| v.to_string())))?;
    let root = k.face_from_labels(&(1..=d as u32 + 1).map(|v| v.to_string()).collect::<Vec<_>>()).expect("root simplex present");
    TreeOfSimplices::from_complex(&k, &root)
}

/// Random tree of `n` `d`-simplices: each new simplex is glued with a fresh
/// vertex onto a uniformly chosen boundary ridge. Labels are `1..=n+d`.
pub fn random_tree_of_simplices(d: usize, n: usize, seed: u64) -> Result<TreeOfSimplices> {
    if d < 1 || n < 1 {
        return Err(Error::Precondition("trees need d ≥ 1 and N ≥ 1".into()));
    }
    let mut r = rng::stream(seed, 0);
    let first: Vec<u32> = (1..=d as u32 + 1).collect();
    let mut boundary: Vec<Vec<u32>> = (0..=d).map(|s| first.iter().enumerate().filter(|&(j, _)| j != s).map(|(_, &v)| v).collect()).collect();
    let mut facets = vec![first];
    for i in 1..n {
        let apex = (d + 1 + i) as u32;
        let ridge = boundary.swap_remove(r.gen_range(0..boundary.len()));
        for skip in 0..ridge.len() {
            let mut nr: Vec<u32> = ridge.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
            nr.push(apex);
            boundary.push(nr);
        }
        facets = grow(&facets, &ridge, apex);
    }
    from_ids(d, facets)
}

/// All combinatorial types of trees of `n` `d`-simplices, sorted by
/// canonical form. `budget` caps the number of candidate trees examined.
pub fn enumerate_trees(d: usize, n: usize, budget: u64) -> Result<Vec<TreeOfSimplices>> {
    if d < 1 || n < 1 {
        return Err(Error::Precondition("trees need d ≥ 1 and N ≥ 1".into()));
    }
    let mut level: Vec<Vec<Vec<u32>>> = vec![vec![(1..=d as u32 + 1).collect()]];
    let mut spent = 0u64;
    for i in 1..n {
        let apex = (d + 1 + i) as u32;
        let candidates: Vec<Vec<Vec<u32>>> = level
            .iter()
            .flat_map(|facets| {
                let t = from_ids(d, facets.clone()).expect("level trees are valid");
                t.boundary_ridges()
                    .into_iter()
                    .map(|(_, r)| {
                        let labels: Vec<u32> = r.iter().map(|&v| t.complex.label(v).parse().unwrap()).collect();
                        grow(facets, &labels, apex)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        spent += candidates.len() as u64;
        if spent > budget {
            return Err(Error::BudgetExhausted);
        }
        let mut keyed: Vec<(CanonicalForm, Vec<Vec<u32>>)> = candidates
            .into_par_iter()
            .map(|f| {
                let k = SimplicialComplex::from_facets(f.iter().map(|f| f.iter().map(|v| v.to_string()))).unwrap();
                (canonical_form(&k), f)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        keyed.dedup_by(|a, b| a.0 == b.0);
        level = keyed.into_iter().map(|(_, f)| f).collect();
    }
    let mut trees: Vec<(CanonicalForm, TreeOfSimplices)> = level
        .into_iter()
        .map(|f| {
            let t = from_ids(d, f)?;
            Ok((t.canonical_form(), t))
        })
        .collect::<Result<_>>()?;
    trees.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(trees.into_iter().map(|(_, t)| t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_simplex_and_pairs() {
        let t = random_tree_of_simplices(3, 1, 0).unwrap();
        assert_eq!(t.boundary_ridges().len(), 4);
        assert_eq!(enumerate_trees(3, 2, 1000).unwrap().len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let t = random_tree_of_simplices(2, 6, 3).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        let back: TreeOfSimplices = serde_json::from_str(&s).unwrap();
        assert_eq!(back.facet_labels(), t.facet_labels());
        assert_eq!(back.edges(), t.edges());
    }

    #[test]
    fn cyclic_dual_graph_is_rejected() {
        let k = crate::complex::generators::simplex_boundary(2);
        assert!(TreeOfSimplices::from_complex(&k, &k.facets()[0].clone()).is_err());
    }
}
