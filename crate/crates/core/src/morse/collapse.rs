//! Elementary collapses on face posets: greedy, randomized and exhaustive search
//! with replayable certificates.

use crate::complex::FacePoset;
use crate::error::{Error, Result};
use crate::rng;
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};

/// When a collapse has reached its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "goal", content = "dim")]
pub enum Goal {
    /// Nothing but the protected cells remains.
    Exact,
    /// A single vertex remains (nothing protected).
    Vertex,
    /// Every remaining unprotected cell has at most this dimension.
    DimAtMost(usize),
}

/// A collapse problem: cells deleted up front, protected cells and the goal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseProblem {
    pub removed: Vec<usize>,
    pub protected: Vec<usize>,
    pub goal: Goal,
}

impl CollapseProblem {
    pub fn onto_vertex() -> Self {
        CollapseProblem { removed: Vec::new(), protected: Vec::new(), goal: Goal::Vertex }
    }

    /// Collapse onto the given subcomplex (closed under faces).
    pub fn onto(protected: Vec<usize>) -> Self {
        CollapseProblem { removed: Vec::new(), protected, goal: Goal::Exact }
    }
}

/// Free-pair selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Lexicographically smallest free face in the top layer.
    Lex,
    /// Uniformly random free pair in the top layer, restarted with fresh streams.
    Random { restarts: u32 },
    /// Depth-first search over all collapse orders with memoized dead states.
    Exhaustive,
}

/// A replayable collapse certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseSequence {
    pub poset_hash: u64,
    pub problem: CollapseProblem,
    /// `(free face, coface)` in removal order.
    pub pairs: Vec<(usize, usize)>,
    /// Cells left at the end, ascending.
    pub remaining: Vec<usize>,
}

/// Search outcome.
#[derive(Debug, Clone)]
pub enum CollapseOutcome {
    Found(CollapseSequence),
    /// Exhaustive search completed without reaching the goal.
    Impossible,
    /// The budget ran out first.
    Exhausted,
}

impl CollapseOutcome {
    pub fn found(self) -> Option<CollapseSequence> {
        match self {
            CollapseOutcome::Found(s) => Some(s),
            _ => None,
        }
    }
}

/// Search statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub expansions: u64,
    pub memo_hits: u64,
    /// Hash hits whose stored state differed (audit mode only).
    pub collisions: u64,
}

/// Incrementally maintained collapse state.
#[derive(Clone)]
pub(crate) struct Collapser<'a> {
    p: &'a FacePoset,
    alive: Vec<bool>,
    protected: Vec<bool>,
    /// Number of alive cofaces.
    up: Vec<u32>,
    /// Alive unprotected cells per dimension.
    count: Vec<usize>,
    /// Free faces per dimension: alive, unprotected, one alive unprotected coface.
    free: Vec<IndexSet>,
    goal: Goal,
    zobrist: &'a [u64],
    hash: u64,
}

/// Set of cell ids with O(1) insert, remove and random access.
#[derive(Clone)]
struct IndexSet {
    items: Vec<usize>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl IndexSet {
    fn new(n: usize) -> Self {
        IndexSet { items: Vec::new(), pos: vec![ABSENT; n] }
    }

    fn insert(&mut self, c: usize) {
        if self.pos[c] == ABSENT {
            self.pos[c] = self.items.len() as u32;
            self.items.push(c);
        }
    }

    fn remove(&mut self, c: usize) {
        let i = self.pos[c];
        if i != ABSENT {
            self.pos[c] = ABSENT;
            let last = self.items.pop().unwrap();
            if last != c {
                self.items[i as usize] = last;
                self.pos[last] = i;
            }
        }
    }

    fn len(&self) -> usize {
        self.items.len()
    }
}

pub(crate) fn zobrist_keys(n: usize) -> Vec<u64> {
    let mut r = rng::stream(0x5a0b_c0de, 0);
    (0..n).map(|_| r.next_u64()).collect()
}

impl<'a> Collapser<'a> {
    pub(crate) fn new(p: &'a FacePoset, problem: &CollapseProblem, zobrist: &'a [u64]) -> Result<Self> {
        let n = p.len();
        let mut alive = vec![true; n];
        for &c in &problem.removed {
            if c >= n {
                return Err(Error::Precondition(format!("removed cell {c} out of range")));
            }
            alive[c] = false;
        }
        let mut protected = vec![false; n];
        for &c in &problem.protected {
            if c >= n || !alive[c] {
                return Err(Error::Precondition(format!("protected cell {c} is not present")));
            }
            protected[c] = true;
        }
        for c in 0..n {
            if alive[c] && p.faces(c).iter().any(|&f| !alive[f]) {
                return Err(Error::Precondition("removed cells leave a cell without its faces".into()));
            }
            if protected[c] && p.faces(c).iter().any(|&f| !protected[f]) {
                return Err(Error::Precondition("protected cells must form a subcomplex".into()));
            }
        }
        let up = (0..n).map(|c| p.cofaces(c).iter().filter(|&&t| alive[t]).count() as u32).collect();
        let top = p.max_dim();
        let mut count = vec![0; top + 1];
        let mut hash = 0;
        for c in 0..n {
            if alive[c] {
                hash ^= zobrist[c];
                if !protected[c] {
                    count[p.dim(c)] += 1;
                }
            }
        }
        let mut s = Collapser {
            p,
            alive,
            protected,
            up,
            count,
            free: vec![IndexSet::new(n); top + 1],
            goal: problem.goal,
            zobrist,
            hash,
        };
        for c in 0..n {
            s.refresh(c);
        }
        Ok(s)
    }

    fn alive_coface(&self, c: usize) -> Option<usize> {
        self.p.cofaces(c).iter().copied().find(|&t| self.alive[t])
    }

    fn is_free(&self, c: usize) -> bool {
        self.alive[c]
            && !self.protected[c]
            && self.up[c] == 1
            && self.alive_coface(c).is_some_and(|t| !self.protected[t] && self.up[t] == 0)
    }

    fn refresh(&mut self, c: usize) {
        let d = self.p.dim(c);
        if self.is_free(c) {
            self.free[d].insert(c);
        } else {
            self.free[d].remove(c);
        }
    }

    fn toggle(&mut self, c: usize, alive: bool) {
        self.alive[c] = alive;
        self.hash ^= self.zobrist[c];
        let d = self.p.dim(c);
        if alive {
            self.count[d] += 1;
        } else {
            self.count[d] -= 1;
        }
        for &f in self.p.faces(c) {
            if alive {
                self.up[f] += 1;
            } else {
                self.up[f] -= 1;
            }
        }
    }

    fn touch_around(&mut self, cells: [usize; 2]) {
        for c in cells {
            self.refresh(c);
            for i in 0..self.p.faces(c).len() {
                let f = self.p.faces(c)[i];
                self.refresh(f);
                // A face's own faces may change freeness through `up[f]`.
                for j in 0..self.p.faces(f).len() {
                    let g = self.p.faces(f)[j];
                    self.refresh(g);
                }
            }
            for i in 0..self.p.cofaces(c).len() {
                let t = self.p.cofaces(c)[i];
                self.refresh(t);
            }
        }
    }

    pub(crate) fn collapse(&mut self, s: usize, t: usize) {
        self.toggle(t, false);
        self.toggle(s, false);
        self.touch_around([s, t]);
    }

    fn restore(&mut self, s: usize, t: usize) {
        self.toggle(s, true);
        self.toggle(t, true);
        self.touch_around([s, t]);
    }

    /// Highest dimension holding an alive unprotected cell.
    fn top_layer(&self) -> Option<usize> {
        (0..self.count.len()).rev().find(|&d| self.count[d] > 0)
    }

    pub(crate) fn done(&self) -> bool {
        match self.goal {
            Goal::Exact => self.top_layer().is_none(),
            Goal::Vertex => self.count.iter().sum::<usize>() == 1 && self.count[0] == 1,
            Goal::DimAtMost(m) => self.top_layer().is_none_or(|d| d <= m),
        }
    }

    /// Free faces whose coface lies in the top layer. Collapses can always be
    /// reordered by weakly decreasing dimension, so nothing else needs trying.
    fn top_free(&self) -> Option<&IndexSet> {
        let d = self.top_layer()?;
        if d == 0 {
            return None;
        }
        Some(&self.free[d - 1])
    }

    fn pair_of(&self, s: usize) -> (usize, usize) {
        (s, self.alive_coface(s).expect("free face has a coface"))
    }

    pub(crate) fn remaining(&self) -> Vec<usize> {
        (0..self.p.len()).filter(|&c| self.alive[c]).collect()
    }

    pub(crate) fn alive(&self) -> &[bool] {
        &self.alive
    }

    /// Greedy run; returns the pairs and whether the goal was reached.
    pub(crate) fn greedy(&mut self, mut pick: impl FnMut(&[usize]) -> usize, budget: &mut u64) -> (Vec<(usize, usize)>, bool) {
        let mut pairs = Vec::new();
        while !self.done() {
            if *budget == 0 {
                return (pairs, false);
            }
            let Some(set) = self.top_free() else { return (pairs, false) };
            if set.len() == 0 {
                return (pairs, false);
            }
            *budget -= 1;
            let s = pick(&set.items);
            let (s, t) = self.pair_of(s);
            self.collapse(s, t);
            pairs.push((s, t));
        }
        (pairs, true)
    }
}

pub(crate) fn lex_pick(items: &[usize]) -> usize {
    *items.iter().min().expect("nonempty")
}

/// Runs a collapse search on `p`.
pub fn collapse_search(
    p: &FacePoset,
    problem: &CollapseProblem,
    strategy: Strategy,
    budget: u64,
    seed: u64,
) -> Result<(CollapseOutcome, SearchStats)> {
    let keys = zobrist_keys(p.len());
    let base = Collapser::new(p, problem, &keys)?;
    let finish = |c: &Collapser, pairs: Vec<(usize, usize)>| CollapseSequence {
        poset_hash: p.hash64(),
        problem: problem.clone(),
        pairs,
        remaining: c.remaining(),
    };
    match strategy {
        Strategy::Lex => {
            let mut c = base;
            let mut left = budget;
            let (pairs, ok) = c.greedy(lex_pick, &mut left);
            let stats = SearchStats { expansions: budget - left, ..Default::default() };
            let out = if ok { CollapseOutcome::Found(finish(&c, pairs)) } else { CollapseOutcome::Exhausted };
            Ok((out, stats))
        }
        Strategy::Random { restarts } => {
            let restarts = restarts.max(1) as u64;
            let per_run = (budget / restarts).max(1);
            let runs: Vec<(u64, Option<CollapseSequence>)> = (0..restarts)
                .into_par_iter()
                .map(|i| {
                    let mut c = base.clone();
                    let mut r = rng::stream(seed, i);
                    let mut left = per_run;
                    let (pairs, ok) = c.greedy(|items| items[r.gen_range(0..items.len())], &mut left);
                    (per_run - left, ok.then(|| finish(&c, pairs)))
                })
                .collect();
            let expansions = runs.iter().map(|r| r.0).sum();
            let stats = SearchStats { expansions, ..Default::default() };
            let out = runs.into_iter().find_map(|r| r.1).map(CollapseOutcome::Found).unwrap_or(CollapseOutcome::Exhausted);
            Ok((out, stats))
        }
        Strategy::Exhaustive => exhaustive(base, budget, false, finish),
    }
}

/// Exhaustive search; `audit` stores full states to detect hash collisions.
pub fn exhaustive_search(p: &FacePoset, problem: &CollapseProblem, budget: u64, audit: bool) -> Result<(CollapseOutcome, SearchStats)> {
    let keys = zobrist_keys(p.len());
    let base = Collapser::new(p, problem, &keys)?;
    exhaustive(base, budget, audit, |c: &Collapser, pairs| CollapseSequence {
        poset_hash: p.hash64(),
        problem: problem.clone(),
        pairs,
        remaining: c.remaining(),
    })
}

fn exhaustive(
    mut c: Collapser,
    budget: u64,
    audit: bool,
    finish: impl Fn(&Collapser, Vec<(usize, usize)>) -> CollapseSequence,
) -> Result<(CollapseOutcome, SearchStats)> {
    enum Step {
        Found,
        Dead,
        OutOfBudget,
    }
    struct Search {
        dead: HashSet<u64>,
        states: HashMap<u64, Vec<bool>>,
        audit: bool,
        stats: SearchStats,
        budget: u64,
        path: Vec<(usize, usize)>,
    }
    fn dfs(c: &mut Collapser, s: &mut Search) -> Step {
        if c.done() {
            return Step::Found;
        }
        if s.dead.contains(&c.hash) {
            if s.audit && s.states.get(&c.hash).is_some_and(|st| st.as_slice() != c.alive()) {
                s.stats.collisions += 1;
            } else {
                s.stats.memo_hits += 1;
                return Step::Dead;
            }
        }
        if s.stats.expansions >= s.budget {
            return Step::OutOfBudget;
        }
        s.stats.expansions += 1;
        let mut options: Vec<usize> = c.top_free().map(|set| set.items.clone()).unwrap_or_default();
        options.sort_unstable();
        for sf in options {
            let (a, b) = c.pair_of(sf);
            c.collapse(a, b);
            s.path.push((a, b));
            match dfs(c, s) {
                Step::Found => return Step::Found,
                Step::OutOfBudget => return Step::OutOfBudget,
                Step::Dead => {}
            }
            s.path.pop();
            c.restore(a, b);
        }
        s.dead.insert(c.hash);
        if s.audit {
            s.states.insert(c.hash, c.alive().to_vec());
        }
        Step::Dead
    }
    let mut s = Search { dead: HashSet::new(), states: HashMap::new(), audit, stats: SearchStats::default(), budget, path: Vec::new() };
    let out = match dfs(&mut c, &mut s) {
        Step::Found => CollapseOutcome::Found(finish(&c, std::mem::take(&mut s.path))),
        Step::Dead => CollapseOutcome::Impossible,
        Step::OutOfBudget => CollapseOutcome::Exhausted,
    };
    Ok((out, s.stats))
}

impl CollapseSequence {
    /// Replays the certificate on `p` and checks every step and the final state.
    pub fn replay(&self, p: &FacePoset) -> Result<()> {
        if self.poset_hash != p.hash64() {
            return Err(Error::Certificate("poset hash mismatch".into()));
        }
        let keys = zobrist_keys(p.len());
        let mut c = Collapser::new(p, &self.problem, &keys)?;
        let mut last_dim = usize::MAX;
        for (i, &(s, t)) in self.pairs.iter().enumerate() {
            if s >= p.len() || t >= p.len() || !c.is_free(s) || c.alive_coface(s) != Some(t) {
                return Err(Error::Certificate(format!("step {i}: ({s}, {t}) is not a free pair")));
            }
            if p.dim(t) > last_dim {
                return Err(Error::Certificate(format!("step {i}: coface dimension increases")));
            }
            last_dim = p.dim(t);
            c.collapse(s, t);
        }
        if !c.done() {
            return Err(Error::Certificate("replay does not reach the target".into()));
        }
        if c.remaining() != self.remaining {
            return Err(Error::Certificate("replay leaves different cells".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generators;

    #[test]
    fn simplex_collapses_to_vertex() {
        let k = generators::simplex(3);
        let p = FacePoset::from_complex(&k);
        for strategy in [Strategy::Lex, Strategy::Random { restarts: 4 }, Strategy::Exhaustive] {
            let (out, _) = collapse_search(&p, &CollapseProblem::onto_vertex(), strategy, 10_000, 7).unwrap();
            let seq = out.found().unwrap();
            assert_eq!(seq.pairs.len(), 7);
            seq.replay(&p).unwrap();
        }
    }

    #[test]
    fn sphere_is_not_collapsible() {
        let k = generators::simplex_boundary(3);
        let p = FacePoset::from_complex(&k);
        let (out, _) = exhaustive_search(&p, &CollapseProblem::onto_vertex(), 10_000, true).unwrap();
        assert!(matches!(out, CollapseOutcome::Impossible));
        let facet = k.face_id(&[0, 1, 2]).unwrap();
        let problem = CollapseProblem { removed: vec![facet], protected: vec![], goal: Goal::Vertex };
        let (out, stats) = exhaustive_search(&p, &problem, 10_000, true).unwrap();
        assert!(out.found().is_some());
        assert_eq!(stats.collisions, 0);
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let k = generators::simplex(2);
        let p = FacePoset::from_complex(&k);
        let (out, _) = collapse_search(&p, &CollapseProblem::onto_vertex(), Strategy::Lex, 100, 0).unwrap();
        let mut seq = out.found().unwrap();
        seq.replay(&p).unwrap();
        seq.pairs.swap(0, 1);
        assert!(seq.replay(&p).is_err());
    }
}
