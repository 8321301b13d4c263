//! Acyclic partial matchings on face posets and their discrete Morse functions.

use crate::complex::FacePoset;
use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BinaryHeap;
use std::cmp::Reverse;

/// A validated acyclic matching on a face poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseMatching {
    /// `(face, coface)` pairs sorted by face id.
    pairs: Vec<(usize, usize)>,
    #[serde(skip)]
    partner: Vec<Option<usize>>,
    critical: Vec<usize>,
    /// Critical cells per dimension.
    c: Vec<usize>,
    /// Critical cells per dimension that are not boundary cells.
    c_int: Vec<usize>,
    boundary_critical: bool,
    poset_hash: u64,
}

impl MorseMatching {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn partner(&self, cell: usize) -> Option<usize> {
        self.partner[cell]
    }

    pub fn is_critical(&self, cell: usize) -> bool {
        self.partner[cell].is_none()
    }

    /// Critical cells in ascending id order.
    pub fn critical(&self) -> &[usize] {
        &self.critical
    }

    pub fn c(&self) -> &[usize] {
        &self.c
    }

    pub fn c_int(&self) -> &[usize] {
        &self.c_int
    }

    pub fn c_at(&self, k: usize) -> usize {
        self.c.get(k).copied().unwrap_or(0)
    }

    pub fn c_int_at(&self, k: usize) -> usize {
        self.c_int.get(k).copied().unwrap_or(0)
    }

    pub fn is_boundary_critical(&self) -> bool {
        self.boundary_critical
    }

    /// Boundary-critical with no interior critical vertex and one interior critical facet.
    pub fn is_equatorial(&self) -> bool {
        let d = self.c.len().saturating_sub(1);
        self.boundary_critical && self.c != self.c_int && d >= 1 && self.c_int_at(0) == 0 && self.c_int_at(d) == 1
    }

    /// Closed-case analogue: one critical vertex and one critical facet.
    pub fn is_polar(&self) -> bool {
        let d = self.c.len().saturating_sub(1);
        self.c == self.c_int && d >= 1 && self.c_at(0) == 1 && self.c_at(d) == 1
    }

    pub fn poset_hash(&self) -> u64 {
        self.poset_hash
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Alternating sum of the critical counts.
    pub fn euler_sum(&self) -> i64 {
        self.c.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// Pairs whose cells are both interior.
    pub fn interior_pairs(&self, p: &FacePoset) -> Vec<(usize, usize)> {
        self.pairs.iter().copied().filter(|&(a, b)| !p.is_boundary(a) && !p.is_boundary(b)).collect()
    }
}

/// Checks that `pairs` is an acyclic matching of cover relations of `p`.
pub fn validate_matching(p: &FacePoset, pairs: &[(usize, usize)]) -> Result<MorseMatching> {
    let n = p.len();
    let mut partner = vec![None; n];
    for &(a, b) in pairs {
        if a >= n || b >= n || !p.is_cover(a, b) {
            return Err(Error::NotACover(a, b));
        }
        for c in [a, b] {
            if partner[c].is_some() {
                return Err(Error::MatchedTwice(c));
            }
        }
        partner[a] = Some(b);
        partner[b] = Some(a);
    }
    if let Some(cycle) = find_v_cycle(p, &partner) {
        return Err(Error::Cycle(cycle));
    }
    let mut sorted: Vec<(usize, usize)> = pairs.to_vec();
    sorted.sort_unstable();
    let top = p.max_dim();
    let mut c = vec![0; top + 1];
    let mut c_int = vec![0; top + 1];
    let mut critical = Vec::new();
    for cell in 0..n {
        if partner[cell].is_none() {
            critical.push(cell);
            c[p.dim(cell)] += 1;
            if !p.is_boundary(cell) {
                c_int[p.dim(cell)] += 1;
            }
        }
    }
    let boundary_critical = sorted.iter().all(|&(a, b)| !p.is_boundary(a) && !p.is_boundary(b));
    Ok(MorseMatching { pairs: sorted, partner, critical, c, c_int, boundary_critical, poset_hash: p.hash64() })
}

/// Looks for a closed V-path. Nodes are cells matched upward; `s -> s'` when
/// `s'` is another face of the partner of `s`.
fn find_v_cycle(p: &FacePoset, partner: &[Option<usize>]) -> Option<Vec<usize>> {
    let n = p.len();
    let up = |s: usize| partner[s].filter(|&t| p.dim(t) == p.dim(s) + 1);
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 || up(start).is_none() {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        state[start] = 1;
        while let Some(top) = stack.last_mut() {
            let (s, i) = *top;
            let faces = p.faces(up(s).unwrap());
            if i < faces.len() {
                let next = faces[i];
                top.1 += 1;
                if next == s || up(next).is_none() {
                    continue;
                }
                match state[next] {
                    0 => {
                        state[next] = 1;
                        stack.push((next, 0));
                    }
                    1 => {
                        let from = stack.iter().position(|&(c, _)| c == next).unwrap();
                        let mut cycle = Vec::new();
                        for &(c, _) in &stack[from..] {
                            cycle.push(c);
                            cycle.push(up(c).unwrap());
                        }
                        cycle.push(next);
                        return Some(cycle);
                    }
                    _ => {}
                }
            } else {
                state[s] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// An integer discrete Morse function realizing the matching: paired cells
/// share a value and every other cover relation strictly increases.
pub fn matching_to_function(p: &FacePoset, m: &MorseMatching) -> Vec<i64> {
    let n = p.len();
    // Contract each pair to its lower cell.
    let rep = |c: usize| match m.partner(c) {
        Some(q) if p.dim(q) < p.dim(c) => q,
        _ => c,
    };
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for b in 0..n {
        for &a in p.faces(b) {
            if m.partner(a) == Some(b) {
                continue;
            }
            let (ra, rb) = (rep(a), rep(b));
            out[ra].push(rb);
            indeg[rb] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&c| rep(c) == c && indeg[c] == 0).map(Reverse).collect();
    let mut value = vec![0i64; n];
    let mut next = 0i64;
    while let Some(Reverse(c)) = heap.pop() {
        value[c] = next;
        next += 1;
        for &d in &out[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                heap.push(Reverse(d));
            }
        }
    }
    for c in 0..n {
        value[c] = value[rep(c)];
    }
    value
}

/// Checks the defining conditions of a discrete Morse function and returns
/// its pairs `(face, coface)` with `f(face) >= f(coface)`.
pub fn morse_function_pairs(p: &FacePoset, f: &[i64]) -> Result<Vec<(usize, usize)>> {
    if f.len() != p.len() {
        return Err(Error::Precondition("function length differs from poset size".into()));
    }
    let mut pairs = Vec::new();
    for s in 0..p.len() {
        let low = p.faces(s).iter().filter(|&&r| f[r] >= f[s]).count();
        let high: Vec<usize> = p.cofaces(s).iter().copied().filter(|&t| f[t] <= f[s]).collect();
        if low > 1 || high.len() > 1 {
            return Err(Error::Precondition(format!("cell {s} violates the discrete Morse condition")));
        }
        if low == 1 && high.len() == 1 {
            return Err(Error::Precondition(format!("cell {s} is exceptional both up and down")));
        }
        if let Some(&t) = high.first() {
            pairs.push((s, t));
        }
    }
    Ok(pairs)
}
