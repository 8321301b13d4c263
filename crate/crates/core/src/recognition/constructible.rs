//! Constructibility search over facet bipartitions.

use super::shelling::cm_obstruction;
use crate::complex::{canonical_form, CanonicalForm, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::{reduced_homology, Coefficients};
use crate::morse::{Obstruction, Verdict};
use serde::Serialize;
use std::collections::HashMap;

/// Recursion tree proving constructibility.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "node", rename_all = "kebab-case")]
pub enum Construction {
    /// A single simplex.
    Simplex { facet: Vec<String> },
    /// A set of points.
    Points { vertices: Vec<String> },
    /// `left ∪ right` with constructible intersection `meet`.
    Split { left: Box<Construction>, right: Box<Construction>, meet: Box<Construction> },
    /// Isomorphic to a complex proved constructible elsewhere in the tree.
    SameTypeAs { facets: Vec<Vec<String>>, canonical: String },
}

impl Construction {
    /// Facets of the complex this node proves constructible.
    pub fn facets(&self) -> Vec<Vec<String>> {
        match self {
            Construction::Simplex { facet } => vec![facet.clone()],
            Construction::Points { vertices } => vertices.iter().map(|v| vec![v.clone()]).collect(),
            Construction::Split { left, right, .. } => {
                let mut f = left.facets();
                f.extend(right.facets());
                f
            }
            Construction::SameTypeAs { facets, .. } => facets.clone(),
        }
    }

    /// Independent check: every split is a union of two complexes of the
    /// same dimension whose intersection is the `meet` node, one dimension
    /// lower; every `SameTypeAs` node matches a proved node's canonical form.
    pub fn verify(&self) -> bool {
        let mut proved = Vec::new();
        self.verify_into(&mut proved) && self.pending_types().iter().all(|c| proved.contains(c))
    }

    fn complex(&self) -> Option<SimplicialComplex> {
        SimplicialComplex::from_facets(self.facets()).ok()
    }

    fn pending_types(&self) -> Vec<String> {
        match self {
            Construction::SameTypeAs { canonical, .. } => vec![canonical.clone()],
            Construction::Split { left, right, meet } => {
                let mut v = left.pending_types();
                v.extend(right.pending_types());
                v.extend(meet.pending_types());
                v
            }
            _ => Vec::new(),
        }
    }

    fn verify_into(&self, proved: &mut Vec<String>) -> bool {
        let Some(k) = self.complex() else { return false };
        let ok = match self {
            Construction::Simplex { facet } => k.num_facets() == 1 && k.facets()[0].len() == facet.len(),
            Construction::Points { .. } => k.dim() == 0,
            Construction::SameTypeAs { canonical, .. } => return canonical_form(&k).to_hex() == *canonical,
            Construction::Split { left, right, meet } => {
                let (Some(l), Some(r), Some(m)) = (left.complex(), right.complex(), meet.complex()) else { return false };
                l.dim() == k.dim()
                    && r.dim() == k.dim()
                    && l.is_pure()
                    && r.is_pure()
                    && l.intersection(&r) == m
                    && m.dim() + 1 == k.dim()
                    && left.verify_into(proved)
                    && right.verify_into(proved)
                    && meet.verify_into(proved)
            }
        };
        if ok {
            proved.push(canonical_form(&k).to_hex());
        }
        ok
    }
}

enum Found {
    Yes(Construction),
    No,
    Unknown,
}

struct Search {
    memo: HashMap<CanonicalForm, bool>,
    expansions: u64,
    budget: u64,
}

fn facets_connected(facets: &[&Vec<u32>]) -> bool {
    let n = facets.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && facets[i].iter().filter(|v| facets[j].contains(v)).count() + 1 == facets[i].len() {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Calls `f` on every `s`-subset of `0..n` in lex order until it returns true.
pub(crate) fn any_combination(n: usize, s: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if s > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..s).collect();
    loop {
        if f(&idx) {
            return true;
        }
        let Some(i) = (0..s).rev().find(|&i| idx[i] != i + n - s) else {
            return false;
        };
        idx[i] += 1;
        for j in i + 1..s {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl Search {
    fn run(&mut self, k: &SimplicialComplex) -> Found {
        if k.dim() == 0 {
            return Found::Yes(Construction::Points { vertices: k.labels().to_vec() });
        }
        if k.num_facets() == 1 {
            return Found::Yes(Construction::Simplex { facet: k.labels_of(&k.facets()[0]) });
        }
        let form = canonical_form(k);
        match self.memo.get(&form) {
            Some(true) => return Found::Yes(Construction::SameTypeAs { facets: k.facet_labels(), canonical: form.to_hex() }),
            Some(false) => return Found::No,
            None => {}
        }
        let facets: Vec<&Vec<u32>> = k.facets().iter().collect();
        let d = k.dim();
        let acyclic_below_top = reduced_homology(k, Coefficients::Q).first_nonzero().is_none_or(|z| z >= d);
        if !k.is_pure() || !facets_connected(&facets) || !acyclic_below_top {
            self.memo.insert(form, false);
            return Found::No;
        }
        let n = facets.len();
        let mut unknown = false;
        let mut result = None;
        for s in 1..=n / 2 {
            let hit = any_combination(n, s, |right| {
                if 2 * s == n && right[0] != 0 {
                    return false;
                }
                if self.expansions >= self.budget {
                    unknown = true;
                    return true;
                }
                self.expansions += 1;
                let (r, l): (Vec<&Vec<u32>>, Vec<&Vec<u32>>) = {
                    let mut r = Vec::new();
                    let mut l = Vec::new();
                    for (i, f) in facets.iter().enumerate() {
                        if right.contains(&i) {
                            r.push(*f);
                        } else {
                            l.push(*f);
                        }
                    }
                    (r, l)
                };
                if !facets_connected(&l) || !facets_connected(&r) {
                    return false;
                }
                let left = k.generated_by(l.into_iter().cloned().collect());
                let right = k.generated_by(r.into_iter().cloned().collect());
                let meet = left.intersection(&right);
                if meet.dim() + 1 != d || !meet.is_pure() {
                    return false;
                }
                let mut parts = Vec::with_capacity(3);
                for c in [&meet, &left, &right] {
                    match self.run(c) {
                        Found::Yes(x) => parts.push(x),
                        Found::No => return false,
                        Found::Unknown => {
                            unknown = true;
                            return false;
                        }
                    }
                }
                let (right, left, meet) = (parts.pop().unwrap(), parts.pop().unwrap(), parts.pop().unwrap());
                result = Some(Construction::Split { left: Box::new(left), right: Box::new(right), meet: Box::new(meet) });
                true
            });
            if hit {
                break;
            }
        }
        if let Some(c) = result {
            self.memo.insert(form, true);
            return Found::Yes(c);
        }
        if unknown {
            return Found::Unknown;
        }
        self.memo.insert(form, false);
        Found::No
    }
}

/// Decides constructibility by recursive search over facet bipartitions
/// into two strongly connected parts meeting in a pure complex of one
/// dimension less. Results are memoized by canonical form.
pub fn is_constructible(k: &SimplicialComplex, budget: u64) -> Result<Verdict<Construction>> {
    if !k.is_pure() {
        return Err(Error::Impure);
    }
    if k.num_facets() > 1 && k.dim() > 0 {
        if let Some(o) = cm_obstruction(k)? {
            return Ok(Verdict::No { obstruction: o });
        }
        if !facets_connected(&k.facets().iter().collect::<Vec<_>>()) {
            return Ok(Verdict::No { obstruction: Obstruction::NotStronglyConnected });
        }
    }
    let mut s = Search { memo: HashMap::new(), expansions: 0, budget };
    Ok(match s.run(k) {
        Found::Yes(c) => Verdict::Yes { witness: c },
        Found::No => Verdict::No { obstruction: Obstruction::Exhaustion { expansions: s.expansions } },
        Found::Unknown => Verdict::Indeterminate { expansions: s.expansions },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generators;

    #[test]
    fn small_cases() {
        let one = generators::simplex(3);
        assert!(is_constructible(&one, 10).unwrap().is_yes());
        let bip = generators::bipyramid(3);
        let v = is_constructible(&bip, 1000).unwrap();
        assert!(v.witness().unwrap().verify());
        let sphere = generators::simplex_boundary(3);
        assert!(is_constructible(&sphere, 1000).unwrap().witness().unwrap().verify());
    }

    #[test]
    fn combinations_in_lex_order() {
        let mut seen = Vec::new();
        any_combination(4, 2, |c| {
            seen.push(c.to_vec());
            false
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 2]);
    }
}
