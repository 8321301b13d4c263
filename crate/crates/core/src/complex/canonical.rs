//! Canonical labeling by colour refinement on the vertex–facet incidence
//! graph with individualization. Exact, exponential in the worst case.

use super::SimplicialComplex;
use std::collections::HashMap;

/// Relabeling-invariant encoding of a complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn hash64(&self) -> u64 {
        super::poset::fnv1a(self.0.iter().copied())
    }

    pub fn to_hex(&self) -> String {
        format!("{:016x}", self.hash64())
    }
}

struct Graph {
    n: usize,
    facets: Vec<Vec<u32>>,
    incident: Vec<Vec<usize>>,
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> (Vec<u32>, usize) {
    let mut uniq: Vec<T> = sigs.to_vec();
    uniq.sort();
    uniq.dedup();
    let ranks = sigs.iter().map(|s| uniq.binary_search(s).unwrap() as u32).collect();
    (ranks, uniq.len())
}

impl Graph {
    fn refine(&self, mut vcol: Vec<u32>) -> Vec<u32> {
        let mut classes = {
            let mut v = vcol.clone();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        loop {
            let fsigs: Vec<(usize, Vec<u32>)> = self
                .facets
                .iter()
                .map(|f| {
                    let mut c: Vec<u32> = f.iter().map(|&v| vcol[v as usize]).collect();
                    c.sort_unstable();
                    (f.len(), c)
                })
                .collect();
            let (fcol, _) = rank(&fsigs);
            let vsigs: Vec<(u32, Vec<u32>)> = (0..self.n)
                .map(|v| {
                    let mut c: Vec<u32> = self.incident[v].iter().map(|&f| fcol[f]).collect();
                    c.sort_unstable();
                    (vcol[v], c)
                })
                .collect();
            let (next, count) = rank(&vsigs);
            vcol = next;
            if count == classes {
                return vcol;
            }
            classes = count;
        }
    }

    fn encode(&self, perm: &[u32]) -> Vec<u8> {
        let mut fs: Vec<Vec<u32>> = self
            .facets
            .iter()
            .map(|f| {
                let mut g: Vec<u32> = f.iter().map(|&v| perm[v as usize]).collect();
                g.sort_unstable();
                g
            })
            .collect();
        fs.sort();
        let mut out = Vec::new();
        out.extend((self.n as u32).to_be_bytes());
        out.extend((fs.len() as u32).to_be_bytes());
        for f in fs {
            out.extend((f.len() as u32).to_be_bytes());
            for v in f {
                out.extend(v.to_be_bytes());
            }
        }
        out
    }

    fn search(&self, vcol: Vec<u32>, best: &mut Option<Vec<u8>>) {
        let vcol = self.refine(vcol);
        let mut members: HashMap<u32, Vec<usize>> = HashMap::new();
        for (v, &c) in vcol.iter().enumerate() {
            members.entry(c).or_default().push(v);
        }
        let target = members.iter().filter(|(_, m)| m.len() > 1).map(|(&c, _)| c).min();
        match target {
            None => {
                let code = self.encode(&vcol);
                if best.as_ref().is_none_or(|b| code < *b) {
                    *best = Some(code);
                }
            }
            Some(c) => {
                for &v in &members[&c] {
                    let sigs: Vec<(u32, bool)> =
                        vcol.iter().enumerate().map(|(u, &col)| (col, u != v)).collect();
                    let (next, _) = rank(&sigs);
                    self.search(next, best);
                }
            }
        }
    }
}

/// Canonical encoding; equal for isomorphic complexes only.
pub fn canonical_form(k: &SimplicialComplex) -> CanonicalForm {
    let n = k.num_vertices();
    let facets: Vec<Vec<u32>> = k.facets().to_vec();
    let mut incident = vec![Vec::new(); n];
    for (i, f) in facets.iter().enumerate() {
        for &v in f {
            incident[v as usize].push(i);
        }
    }
    let g = Graph { n, facets, incident };
    let mut best = None;
    g.search(vec![0; n], &mut best);
    CanonicalForm(best.unwrap_or_default())
}

pub fn is_isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    a.num_vertices() == b.num_vertices()
        && a.num_facets() == b.num_facets()
        && a.f_vector() == b.f_vector()
        && canonical_form(a) == canonical_form(b)
}
