//! Collapsibility, endo-collapsibility and collapse depth of pseudo-manifolds,
//! boundary-critical matchings, and Morse inequality reports.

use super::certificate::{Certificate, CertificateKind};
use super::collapse::{
    collapse_search, exhaustive_search, lex_pick, zobrist_keys, CollapseOutcome, CollapseProblem, CollapseSequence, Collapser, Goal,
    Strategy,
};
use rand::Rng;
use super::matching::{validate_matching, MorseMatching};
use crate::complex::{FacePoset, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::{homology, is_homology_manifold, reduced_homology, Coefficients};
use serde::Serialize;
use std::collections::VecDeque;

/// Search limits shared by the engine operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    /// Total node expansions.
    pub budget: u64,
    pub seed: u64,
    /// Random greedy restarts per facet before exhaustive search.
    pub restarts: u32,
    /// Maximum number of facets tried by the greedy phase (0 = all).
    pub facet_sample: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: 2_000_000, seed: 0, restarts: 8, facet_sample: 0 }
    }
}

/// Why a property fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Obstruction {
    /// `H_degree` is nonzero, so every boundary-critical matching has an
    /// interior critical cell of dimension `forces_critical_dim`.
    Homology { degree: usize, field: String, rank: usize, forces_critical_dim: usize },
    /// The complex is not acyclic over ℤ, so it is not contractible.
    NotAcyclic,
    /// Exhaustive search finished without a witness.
    Exhaustion { expansions: u64 },
    /// Algebraic depth below the dimension: not Cohen-Macaulay over `field`.
    NotCohenMacaulay { field: String, adepth: usize },
    /// The dual graph is disconnected.
    NotStronglyConnected,
}

/// Three-valued search answer.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict<T> {
    Yes { witness: T },
    No { obstruction: Obstruction },
    Indeterminate { expansions: u64 },
}

impl<T> Verdict<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No { .. })
    }

    pub fn witness(&self) -> Option<&T> {
        match self {
            Verdict::Yes { witness } => Some(witness),
            _ => None,
        }
    }

    /// CLI exit code: 0 yes, 1 no, 2 indeterminate.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Yes { .. } => 0,
            Verdict::No { .. } => 1,
            Verdict::Indeterminate { .. } => 2,
        }
    }
}

/// A successful collapse of `M - Δ` (or of `K`), with its matching certificate.
#[derive(Debug, Clone, Serialize)]
pub struct CollapseWitness {
    /// Removed facet as a cell id, if any.
    pub facet: Option<usize>,
    pub facet_labels: Option<Vec<String>>,
    pub sequence: CollapseSequence,
    pub certificate: Certificate,
}

fn witness(k: &SimplicialComplex, p: &FacePoset, facet: Option<usize>, seq: CollapseSequence, kind: CertificateKind) -> Result<CollapseWitness> {
    let certificate = Certificate::from_sequence(p, &seq, kind)?;
    Ok(CollapseWitness { facet, facet_labels: facet.map(|f| k.labels_of(k.face(f))), sequence: seq, certificate })
}

/// Nonvanishing homology in degrees `1..=top` over ℚ or F₂.
fn homology_obstruction(k: &SimplicialComplex, top: usize) -> Option<Obstruction> {
    let d = k.dim().max(0) as usize;
    for field in [Coefficients::Q, Coefficients::F2] {
        let h = homology(k, field);
        if let Some(i) = (1..=top).find(|&i| h.betti(i) > 0) {
            return Some(Obstruction::Homology { degree: i, field: field.to_string(), rank: h.betti(i), forces_critical_dim: d - i });
        }
    }
    None
}

/// Whether `K` collapses onto a vertex.
pub fn is_collapsible(k: &SimplicialComplex, cfg: &SearchConfig) -> Result<Verdict<CollapseWitness>> {
    if !reduced_homology(k, Coefficients::Z).is_acyclic() {
        return Ok(Verdict::No { obstruction: Obstruction::NotAcyclic });
    }
    let p = FacePoset::from_complex(k);
    let problem = CollapseProblem::onto_vertex();
    let kind = CertificateKind::Collapsible;
    match search(&p, std::slice::from_ref(&problem), cfg)? {
        Search::Found(_, seq, _) => Ok(Verdict::Yes { witness: witness(k, &p, None, seq, kind)? }),
        Search::Impossible(e) => Ok(Verdict::No { obstruction: Obstruction::Exhaustion { expansions: e } }),
        Search::Exhausted(e) => Ok(Verdict::Indeterminate { expansions: e }),
    }
}

enum Search {
    /// Index of the successful problem, its sequence and expansions used.
    Found(usize, CollapseSequence, u64),
    Impossible(u64),
    Exhausted(u64),
}

/// Greedy restarts on each problem, then exhaustive search on each problem
/// with the remaining budget. Lowest-index success wins.
fn search(p: &FacePoset, problems: &[CollapseProblem], cfg: &SearchConfig) -> Result<Search> {
    let mut used = 0u64;
    let lex_cost = p.len() as u64;
    let greedy_cap = cfg.budget / 2;
    let sample = if cfg.facet_sample == 0 { problems.len() } else { cfg.facet_sample.min(problems.len()) };
    for (i, problem) in problems.iter().take(sample).enumerate() {
        if used + lex_cost > greedy_cap {
            break;
        }
        let (out, stats) = collapse_search(p, problem, Strategy::Lex, lex_cost, cfg.seed)?;
        used += stats.expansions;
        if let CollapseOutcome::Found(seq) = out {
            return Ok(Search::Found(i, seq, used));
        }
    }
    let per_problem = lex_cost * cfg.restarts.max(1) as u64;
    for (i, problem) in problems.iter().take(sample).enumerate() {
        if used + per_problem > greedy_cap {
            break;
        }
        let stream_seed = cfg.seed.wrapping_add((i as u64) << 32);
        let (out, stats) = collapse_search(p, problem, Strategy::Random { restarts: cfg.restarts }, per_problem, stream_seed)?;
        used += stats.expansions;
        if let CollapseOutcome::Found(seq) = out {
            return Ok(Search::Found(i, seq, used));
        }
    }
    let mut all_impossible = true;
    for (i, problem) in problems.iter().enumerate() {
        let left = cfg.budget.saturating_sub(used);
        if left == 0 {
            all_impossible = false;
            break;
        }
        let (out, stats) = exhaustive_search(p, problem, left, false)?;
        used += stats.expansions;
        match out {
            CollapseOutcome::Found(seq) => return Ok(Search::Found(i, seq, used)),
            CollapseOutcome::Impossible => {}
            CollapseOutcome::Exhausted => {
                all_impossible = false;
                break;
            }
        }
    }
    Ok(if all_impossible { Search::Impossible(used) } else { Search::Exhausted(used) })
}

/// Pseudo-manifold data used by the engine.
struct Manifold<'a> {
    k: &'a SimplicialComplex,
    p: FacePoset,
    d: usize,
    facets: Vec<usize>,
    boundary: Vec<usize>,
}

impl<'a> Manifold<'a> {
    fn new(k: &'a SimplicialComplex) -> Result<Self> {
        let info = k.pseudomanifold_check();
        if !info.is_pseudo_manifold {
            return Err(Error::NotPseudoManifold("input is not a pseudo-manifold".into()));
        }
        let p = FacePoset::from_complex(k);
        let d = k.dim() as usize;
        let mut facets: Vec<usize> = k.facets().iter().map(|f| k.face_id(f).unwrap()).collect();
        facets.sort_unstable();
        let boundary = (0..p.len()).filter(|&c| p.is_boundary(c)).collect();
        Ok(Manifold { k, p, d, facets, boundary })
    }

    fn closed(&self) -> bool {
        self.boundary.is_empty()
    }

    /// `M - Δ` onto `∂M` plus cells of dimension at most `d - depth`.
    fn problems(&self, depth: usize) -> Vec<CollapseProblem> {
        let goal = match (depth == self.d, self.closed()) {
            (true, true) => Goal::Vertex,
            (true, false) => Goal::Exact,
            _ => Goal::DimAtMost(self.d - depth),
        };
        self.facets
            .iter()
            .map(|&f| CollapseProblem { removed: vec![f], protected: self.boundary.clone(), goal })
            .collect()
    }
}

/// Whether `M - Δ` collapses onto `∂M` (closed: onto a vertex) for some facet Δ.
pub fn is_endo_collapsible(k: &SimplicialComplex, cfg: &SearchConfig) -> Result<Verdict<CollapseWitness>> {
    let m = Manifold::new(k)?;
    let kind = CertificateKind::EndoCollapsible;
    if m.facets.len() == 1 {
        let seq = CollapseSequence {
            poset_hash: m.p.hash64(),
            problem: m.problems(m.d).remove(0),
            pairs: Vec::new(),
            remaining: m.boundary.clone(),
        };
        return Ok(Verdict::Yes { witness: witness(k, &m.p, Some(m.facets[0]), seq, kind)? });
    }
    if m.d >= 2 && is_homology_manifold(k) {
        if let Some(o) = homology_obstruction(k, m.d - 1) {
            return Ok(Verdict::No { obstruction: o });
        }
    }
    let problems = m.problems(m.d);
    match search(&m.p, &problems, cfg)? {
        Search::Found(i, seq, _) => Ok(Verdict::Yes { witness: witness(k, &m.p, Some(m.facets[i]), seq, kind)? }),
        Search::Impossible(e) => Ok(Verdict::No { obstruction: Obstruction::Exhaustion { expansions: e } }),
        Search::Exhausted(e) => Ok(Verdict::Indeterminate { expansions: e }),
    }
}

/// Whether `M - Δ` collapses onto `∂M` (closed: onto a vertex) for the given facet Δ.
pub fn endo_collapse_from(k: &SimplicialComplex, facet: &[u32], cfg: &SearchConfig) -> Result<Verdict<CollapseWitness>> {
    let m = Manifold::new(k)?;
    let id = k.face_id(facet).filter(|id| m.facets.binary_search(id).is_ok()).ok_or_else(|| Error::NotAFace(k.labels_of(facet)))?;
    let problem = m.problems(m.d).into_iter().find(|p| p.removed == [id]).expect("one problem per facet");
    match search(&m.p, std::slice::from_ref(&problem), cfg)? {
        Search::Found(_, seq, _) => Ok(Verdict::Yes { witness: witness(k, &m.p, Some(id), seq, CertificateKind::EndoCollapsible)? }),
        Search::Impossible(e) => Ok(Verdict::No { obstruction: Obstruction::Exhaustion { expansions: e } }),
        Search::Exhausted(e) => Ok(Verdict::Indeterminate { expansions: e }),
    }
}

/// How much of a collapse depth value is proved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthStatus {
    /// A witness proves `depth >= k`.
    LowerBoundProved,
    /// `depth = k`: witness at `k` and either `k = d`, a homology
    /// obstruction at `k + 1`, or a completed exhaustive search at `k + 1`.
    Exact,
    /// No witness was found at all.
    Indeterminate,
}

/// Result of [`collapse_depth`].
#[derive(Debug, Clone, Serialize)]
pub struct DepthCertificate {
    pub k: usize,
    pub dim: usize,
    pub witness: Option<CollapseWitness>,
    pub status: DepthStatus,
    /// Why `k + 1` fails, when known.
    pub obstruction: Option<Obstruction>,
    pub expansions: u64,
}

/// Largest `k` such that `M - Δ` collapses onto `∂M` plus a `(d - k)`-complex.
pub fn collapse_depth(k: &SimplicialComplex, cfg: &SearchConfig) -> Result<DepthCertificate> {
    let m = Manifold::new(k)?;
    let d = m.d;
    let mut cap = d;
    let mut obstruction = None;
    if d >= 2 && is_homology_manifold(k) {
        // Depth k forces H_1 = ... = H_{k-1} = 0.
        let fields = [Coefficients::Q, Coefficients::F2];
        let profiles: Vec<_> = fields.iter().map(|&f| homology(k, f)).collect();
        for i in 1..d {
            if let Some((h, f)) = profiles.iter().zip(fields).find(|(h, _)| h.betti(i) > 0) {
                cap = i;
                obstruction = Some(Obstruction::Homology { degree: i, field: f.to_string(), rank: h.betti(i), forces_critical_dim: d - i });
                break;
            }
        }
    }
    let mut used = 0u64;
    let mut upper_failed: Option<Obstruction> = obstruction.clone().filter(|_| cap < d);
    for depth in (1..=cap).rev() {
        let local = SearchConfig { budget: cfg.budget.saturating_sub(used), ..*cfg };
        let problems = m.problems(depth);
        match search(&m.p, &problems, &local)? {
            Search::Found(i, seq, e) => {
                used += e;
                let w = witness(k, &m.p, Some(m.facets[i]), seq, CertificateKind::CollapseDepth(depth))?;
                let status = if depth == d || upper_failed.is_some() { DepthStatus::Exact } else { DepthStatus::LowerBoundProved };
                return Ok(DepthCertificate { k: depth, dim: d, witness: Some(w), status, obstruction: upper_failed, expansions: used });
            }
            Search::Impossible(e) => {
                used += e;
                upper_failed = Some(Obstruction::Exhaustion { expansions: e });
            }
            Search::Exhausted(e) => {
                used += e;
                upper_failed = None;
            }
        }
    }
    Ok(DepthCertificate { k: 0, dim: d, witness: None, status: DepthStatus::Indeterminate, obstruction: None, expansions: used })
}

/// Boundary-critical matching built from a spanning tree: pair facets
/// along a dual spanning tree rooted at Δ, collapse greedily down to the
/// edges while protecting `∂M`, then match every interior vertex with the
/// edge towards the boundary along a breadth-first forest.
pub fn boundary_critical_morse(k: &SimplicialComplex, facet: &[u32], seed: Option<u64>) -> Result<MorseMatching> {
    let m = Manifold::new(k)?;
    if m.d < 2 {
        return Err(Error::DimensionTooSmall(m.d as isize));
    }
    if m.closed() {
        return Err(Error::ClosedInput);
    }
    build_morse(&m, facet, Some(&m.boundary), seed)
}

/// Closed-manifold variant: the protected set is the single vertex `vertex`.
pub fn polar_morse(k: &SimplicialComplex, facet: &[u32], vertex: u32, seed: Option<u64>) -> Result<MorseMatching> {
    let m = Manifold::new(k)?;
    if m.d < 1 {
        return Err(Error::DimensionTooSmall(m.d as isize));
    }
    if !m.closed() {
        return Err(Error::Precondition("polar matchings need a closed pseudo-manifold".into()));
    }
    let v = k.face_id(&[vertex]).ok_or_else(|| Error::NotAFace(vec![vertex.to_string()]))?;
    build_morse(&m, facet, Some(&[v]), seed)
}

/// Boundary-critical matching whose only interior critical facet is
/// `facet`, in any dimension. Closed inputs keep one critical vertex, the
/// lowest one the facet tree leaves unmatched.
pub fn pin_critical(k: &SimplicialComplex, facet: &[u32], seed: Option<u64>) -> Result<MorseMatching> {
    let m = Manifold::new(k)?;
    if m.d == 0 {
        if k.num_facets() != 1 {
            return Err(Error::NotPseudoManifold("a 0-dimensional pseudo-manifold is a point".into()));
        }
        return validate_matching(&m.p, &[]);
    }
    if m.closed() {
        build_morse(&m, facet, None, seed)
    } else {
        build_morse(&m, facet, Some(&m.boundary), seed)
    }
}

fn build_morse(m: &Manifold, facet: &[u32], protected: Option<&[usize]>, seed: Option<u64>) -> Result<MorseMatching> {
    let k = m.k;
    let root_cell = k.face_id(facet).filter(|_| facet.len() == m.d + 1).ok_or_else(|| Error::NotAFace(k.labels_of(facet)))?;
    let root = k.facets().iter().position(|f| f.as_slice() == facet).ok_or_else(|| Error::NotAFace(k.labels_of(facet)))?;
    let dg = k.dual_graph()?;
    let parent = dg.bfs_tree(root);
    let mut pairs = Vec::new();
    let mut removed = vec![root_cell];
    for (node, par) in parent.iter().enumerate() {
        match par {
            Some(a) if *a != usize::MAX => {
                let ridge = k.face_id(&dg.arcs[*a].2).expect("ridge");
                let f = k.face_id(&k.facets()[node]).expect("facet");
                pairs.push((ridge, f));
                removed.push(ridge);
                removed.push(f);
            }
            Some(_) => {}
            None => return Err(Error::NotPseudoManifold("dual graph is disconnected".into())),
        }
    }
    let protected: Vec<usize> = match protected {
        Some(p) => p.to_vec(),
        None => {
            let v = m.p.cells_of_dim(0).iter().copied().find(|c| !removed.contains(c));
            vec![v.ok_or_else(|| Error::Internal("facet tree matched every vertex".into()))?]
        }
    };
    let problem = CollapseProblem { removed, protected: protected.clone(), goal: Goal::DimAtMost(1) };
    let keys = zobrist_keys(m.p.len());
    let mut c = Collapser::new(&m.p, &problem, &keys)?;
    let mut budget = u64::MAX;
    let (more, _) = match seed {
        None => c.greedy(lex_pick, &mut budget),
        Some(s) => {
            let mut r = crate::rng::stream(s, 0);
            c.greedy(|items| items[r.gen_range(0..items.len())], &mut budget)
        }
    };
    pairs.extend(more);
    // Breadth-first forest over the surviving graph, rooted at protected vertices.
    let alive = c.alive().to_vec();
    let is_protected = {
        let mut v = vec![false; m.p.len()];
        for &c in &protected {
            v[c] = true;
        }
        v
    };
    let mut seen = vec![false; m.p.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &v in m.p.cells_of_dim(0) {
        if alive[v] && is_protected[v] {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &e in m.p.cofaces(u) {
            if !alive[e] || is_protected[e] {
                continue;
            }
            for &w in m.p.faces(e) {
                if w != u && alive[w] && !seen[w] && !is_protected[w] {
                    seen[w] = true;
                    pairs.push((w, e));
                    queue.push_back(w);
                }
            }
        }
    }
    validate_matching(&m.p, &pairs)
}

/// One row of a Morse inequality report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityRow {
    /// Critical dimension `k`.
    pub k: usize,
    /// Homology degree compared against it (`d - k` in the relative form).
    pub degree: usize,
    pub betti: usize,
    pub critical: usize,
    pub holds: bool,
}

/// Betti numbers against critical counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub relative: bool,
    pub field: Coefficients,
    pub rows: Vec<InequalityRow>,
    pub euler_characteristic: i64,
    pub critical_alternating_sum: i64,
    pub euler_ok: bool,
    pub holds: bool,
}

/// Checks `β_{d-k}(M) <= c^int_k(f)` (relative) or `β_k <= c_k` (plain).
pub fn verify_morse_inequalities(k: &SimplicialComplex, f: &MorseMatching, relative: bool, field: Coefficients) -> Result<InequalityReport> {
    if relative && !f.is_boundary_critical() {
        return Err(Error::Precondition("relative inequalities need a boundary-critical matching".into()));
    }
    let p = FacePoset::from_complex(k);
    if f.poset_hash() != p.hash64() {
        return Err(Error::Precondition("matching belongs to a different complex".into()));
    }
    let d = k.dim().max(0) as usize;
    let h = homology(k, field);
    let rows: Vec<InequalityRow> = (0..=d)
        .map(|kk| {
            let (degree, critical) = if relative { (d - kk, f.c_int_at(kk)) } else { (kk, f.c_at(kk)) };
            let betti = h.betti(degree);
            InequalityRow { k: kk, degree, betti, critical, holds: betti <= critical }
        })
        .collect();
    let chi = k.euler_characteristic();
    let sum = f.euler_sum();
    let euler_ok = chi == sum;
    let holds = euler_ok && rows.iter().all(|r| r.holds);
    Ok(InequalityReport { relative, field, rows, euler_characteristic: chi, critical_alternating_sum: sum, euler_ok, holds })
}
