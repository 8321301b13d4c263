//! Facet-defined simplicial complexes and their basic constructions.

mod canonical;
pub mod cubes;
pub mod generators;
mod poset;

pub use canonical::{canonical_form, is_isomorphic, CanonicalForm};
pub use poset::{FacePoset, PosetCellJson};

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

/// A face as a sorted list of dense vertex ids.
pub type Face = Vec<u32>;

/// Finite simplicial complex given by its facets.
///
/// Vertex labels are interned to dense ids. The complex `{∅}` (dimension -1)
/// is representable and arises as the link of a facet.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    labels: Vec<String>,
    index: HashMap<String, u32>,
    facets: Vec<Face>,
    lattice: OnceLock<Lattice>,
}

#[derive(Debug, Clone)]
struct Lattice {
    by_dim: Vec<Vec<Face>>,
    offsets: Vec<usize>,
    index: HashMap<Face, usize>,
}

/// Orders labels numerically when both parse as integers, numbers first.
pub fn label_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        _ => a.cmp(b),
    }
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &v in small {
        while j < big.len() && big[j] < v {
            j += 1;
        }
        if j == big.len() || big[j] != v {
            return false;
        }
        j += 1;
    }
    true
}

/// Keeps only inclusion-maximal faces; output sorted and deduplicated.
fn maximalize(mut faces: Vec<Face>) -> Vec<Face> {
    for f in faces.iter_mut() {
        f.sort_unstable();
        f.dedup();
    }
    faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    faces.dedup();
    let mut kept: Vec<Face> = Vec::new();
    let mut by_vertex: HashMap<u32, Vec<usize>> = HashMap::new();
    for f in faces {
        let dominated = match f.first() {
            None => !kept.is_empty(),
            Some(v) => by_vertex
                .get(v)
                .is_some_and(|cands| cands.iter().any(|&i| is_subset(&f, &kept[i]))),
        };
        if !dominated {
            for &v in &f {
                by_vertex.entry(v).or_default().push(kept.len());
            }
            kept.push(f);
        }
    }
    kept.sort();
    kept
}

impl SimplicialComplex {
    /// Builds a complex from facet label lists; non-maximal lists are dropped.
    pub fn from_facets<I, F, S>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = S>,
        S: ToString,
    {
        let lists: Vec<Vec<String>> = facets
            .into_iter()
            .map(|f| f.into_iter().map(|s| s.to_string()).collect())
            .collect();
        if lists.is_empty() || lists.iter().all(|l| l.is_empty()) {
            return Err(Error::Empty);
        }
        for (i, l) in lists.iter().enumerate() {
            let mut seen = HashSet::new();
            for s in l {
                if !seen.insert(s) {
                    return Err(Error::DuplicateVertex { label: s.clone(), facet: i });
                }
            }
        }
        let mut labels: Vec<String> = lists.iter().flatten().cloned().collect();
        labels.sort_by(|a, b| label_cmp(a, b));
        labels.dedup();
        let index: HashMap<String, u32> =
            labels.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        let faces = lists
            .iter()
            .filter(|l| !l.is_empty())
            .map(|l| l.iter().map(|s| index[s]).collect())
            .collect();
        Ok(Self::from_parts_unchecked(labels, maximalize(faces)))
    }

    /// Builds a complex from labels (kept in the given order) and id facets.
    /// Vertices not used by any facet are dropped and ids compacted.
    pub fn from_parts(labels: Vec<String>, facets: Vec<Face>) -> Self {
        let mut used = vec![false; labels.len()];
        for f in &facets {
            for &v in f {
                used[v as usize] = true;
            }
        }
        if used.iter().all(|&u| u) {
            return Self::from_parts_unchecked(labels, maximalize(facets));
        }
        let mut remap = vec![u32::MAX; labels.len()];
        let mut new_labels = Vec::new();
        for (i, l) in labels.into_iter().enumerate() {
            if used[i] {
                remap[i] = new_labels.len() as u32;
                new_labels.push(l);
            }
        }
        let facets = facets
            .into_iter()
            .map(|f| f.into_iter().map(|v| remap[v as usize]).collect())
            .collect();
        Self::from_parts_unchecked(new_labels, maximalize(facets))
    }

    fn from_parts_unchecked(labels: Vec<String>, mut facets: Vec<Face>) -> Self {
        if facets.is_empty() {
            facets.push(Vec::new());
        }
        let index = labels.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();
        SimplicialComplex { labels, index, facets, lattice: OnceLock::new() }
    }

    /// The complex `{∅}` of dimension -1.
    pub fn empty() -> Self {
        Self::from_parts_unchecked(Vec::new(), vec![Vec::new()])
    }

    /// A single simplex on the given labels.
    pub fn simplex<S: ToString>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::from_facets([labels])
    }

    pub fn is_empty(&self) -> bool {
        self.facets.len() == 1 && self.facets[0].is_empty()
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &str {
        &self.labels[v as usize]
    }

    pub fn vertex_id(&self, label: &str) -> Option<u32> {
        self.index.get(label).copied()
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.facets.len()
        }
    }

    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize).max().unwrap_or(0) - 1
    }

    pub fn is_pure(&self) -> bool {
        let n = self.facets[0].len();
        self.facets.iter().all(|f| f.len() == n)
    }

    /// Label lists of the facets, in facet order.
    pub fn facet_labels(&self) -> Vec<Vec<String>> {
        self.facets.iter().map(|f| self.labels_of(f)).collect()
    }

    pub fn labels_of(&self, face: &[u32]) -> Vec<String> {
        face.iter().map(|&v| self.labels[v as usize].clone()).collect()
    }

    /// Translates labels to a sorted id face; `None` if a label is unknown.
    pub fn face_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Option<Face> {
        let mut f: Face = labels
            .iter()
            .map(|s| self.vertex_id(s.as_ref()))
            .collect::<Option<_>>()?;
        f.sort_unstable();
        f.dedup();
        Some(f)
    }

    fn lattice(&self) -> &Lattice {
        self.lattice.get_or_init(|| {
            let dim = self.dim();
            let mut sets: Vec<HashSet<Face>> = vec![HashSet::new(); (dim + 1).max(0) as usize];
            for f in &self.facets {
                let n = f.len();
                for mask in 1u64..(1u64 << n) {
                    let sub: Face =
                        (0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                    sets[sub.len() - 1].insert(sub);
                }
            }
            let mut by_dim = Vec::new();
            let mut offsets = Vec::new();
            let mut index = HashMap::new();
            let mut off = 0;
            for s in sets {
                let mut v: Vec<Face> = s.into_iter().collect();
                v.sort();
                offsets.push(off);
                for (i, f) in v.iter().enumerate() {
                    index.insert(f.clone(), off + i);
                }
                off += v.len();
                by_dim.push(v);
            }
            offsets.push(off);
            Lattice { by_dim, offsets, index }
        })
    }

    /// Nonempty faces of dimension `k`, lexicographically sorted.
    pub fn faces(&self, k: usize) -> &[Face] {
        self.lattice().by_dim.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Total number of nonempty faces.
    pub fn num_faces(&self) -> usize {
        *self.lattice().offsets.last().unwrap()
    }

    /// Global id of a nonempty face: faces are numbered by dimension, then lex.
    pub fn face_id(&self, face: &[u32]) -> Option<usize> {
        self.lattice().index.get(face).copied()
    }

    /// The face with the given global id.
    pub fn face(&self, id: usize) -> &Face {
        let l = self.lattice();
        let k = l.offsets.partition_point(|&o| o <= id) - 1;
        &l.by_dim[k][id - l.offsets[k]]
    }

    /// First global id of dimension `k` faces.
    pub fn dim_offset(&self, k: usize) -> usize {
        let l = self.lattice();
        l.offsets[k.min(l.offsets.len() - 1)]
    }

    /// All nonempty faces in global id order.
    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.lattice().by_dim.iter().flatten()
    }

    pub fn contains_face(&self, face: &[u32]) -> bool {
        face.is_empty() || self.face_id(face).is_some()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.lattice().by_dim.iter().map(|v| v.len()).collect()
    }

    /// Unreduced Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    fn check_face(&self, sigma: &[u32]) -> Result<()> {
        if self.contains_face(sigma) {
            Ok(())
        } else {
            Err(Error::NotAFace(self.labels_of(sigma)))
        }
    }

    fn sub_from_faces(&self, faces: Vec<Face>) -> SimplicialComplex {
        SimplicialComplex::from_parts(self.labels.clone(), faces)
    }

    /// Link of a face; the link of a facet is `{∅}`.
    pub fn link(&self, sigma: &[u32]) -> Result<SimplicialComplex> {
        self.check_face(sigma)?;
        let faces = self
            .facets
            .iter()
            .filter(|f| is_subset(sigma, f))
            .map(|f| f.iter().copied().filter(|v| sigma.binary_search(v).is_err()).collect())
            .collect();
        Ok(self.sub_from_faces(faces))
    }

    /// Closed star of a face: the facets containing it.
    pub fn star(&self, sigma: &[u32]) -> Result<SimplicialComplex> {
        self.check_face(sigma)?;
        let faces = self.facets.iter().filter(|f| is_subset(sigma, f)).cloned().collect();
        Ok(self.sub_from_faces(faces))
    }

    /// Faces sharing no vertex with `vertices`.
    pub fn deletion(&self, vertices: &[u32]) -> SimplicialComplex {
        let faces = self
            .facets
            .iter()
            .map(|f| f.iter().copied().filter(|v| !vertices.contains(v)).collect())
            .collect();
        self.sub_from_faces(faces)
    }

    /// Faces that do not contain `sigma`.
    pub fn removal(&self, sigma: &[u32]) -> Result<SimplicialComplex> {
        self.check_face(sigma)?;
        if sigma.is_empty() {
            return Ok(SimplicialComplex::empty());
        }
        let mut faces = Vec::new();
        for f in &self.facets {
            if is_subset(sigma, f) {
                for &v in sigma {
                    faces.push(f.iter().copied().filter(|&w| w != v).collect());
                }
            } else {
                faces.push(f.clone());
            }
        }
        Ok(self.sub_from_faces(faces))
    }

    /// Subcomplex generated by the given faces (same vertex labels).
    pub fn generated_by(&self, faces: Vec<Face>) -> SimplicialComplex {
        self.sub_from_faces(faces)
    }

    /// Map from ridge to the indices of the facets containing it (pure input).
    pub fn ridge_map(&self) -> Result<HashMap<Face, Vec<usize>>> {
        if !self.is_pure() {
            return Err(Error::Impure);
        }
        let mut map: HashMap<Face, Vec<usize>> = HashMap::new();
        for (i, f) in self.facets.iter().enumerate() {
            if f.is_empty() {
                continue;
            }
            for skip in 0..f.len() {
                let r: Face =
                    f.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                map.entry(r).or_default().push(i);
            }
        }
        Ok(map)
    }

    /// Dual graph: nodes are facet indices, arcs are shared ridges.
    pub fn dual_graph(&self) -> Result<DualGraph> {
        let rm = self.ridge_map()?;
        let mut arcs = Vec::new();
        for (r, fs) in rm {
            for a in 0..fs.len() {
                for b in a + 1..fs.len() {
                    arcs.push((fs[a], fs[b], r.clone()));
                }
            }
        }
        arcs.sort();
        let mut adjacency = vec![Vec::new(); self.num_facets()];
        for (i, (a, b, _)) in arcs.iter().enumerate() {
            adjacency[*a].push(i);
            adjacency[*b].push(i);
        }
        Ok(DualGraph { nodes: self.num_facets(), arcs, adjacency })
    }

    /// Subcomplex generated by ridges lying in exactly one facet.
    pub fn boundary_complex(&self) -> Result<SimplicialComplex> {
        let rm = self.ridge_map()?;
        let faces: Vec<Face> =
            rm.into_iter().filter(|(_, fs)| fs.len() == 1).map(|(r, _)| r).collect();
        if faces.is_empty() {
            return Ok(SimplicialComplex::empty());
        }
        Ok(self.sub_from_faces(faces))
    }

    pub fn pseudomanifold_check(&self) -> PseudoManifoldInfo {
        let pure = self.is_pure();
        if !pure || self.is_empty() {
            return PseudoManifoldInfo {
                pure,
                strongly_connected: false,
                max_ridge_degree: 0,
                boundary: None,
                is_pseudo_manifold: false,
                is_closed: false,
            };
        }
        let rm = self.ridge_map().expect("pure");
        let max_ridge_degree = rm.values().map(|v| v.len()).max().unwrap_or(0);
        let dg = self.dual_graph().expect("pure");
        let strongly_connected = dg.is_connected();
        let bfaces: Vec<Face> =
            rm.into_iter().filter(|(_, fs)| fs.len() == 1).map(|(r, _)| r).collect();
        let boundary = if bfaces.is_empty() {
            None
        } else if bfaces.iter().all(|f| f.is_empty()) {
            Some(SimplicialComplex::empty())
        } else {
            Some(self.sub_from_faces(bfaces))
        };
        let is_pseudo_manifold = strongly_connected && max_ridge_degree <= 2;
        PseudoManifoldInfo {
            pure,
            strongly_connected,
            max_ridge_degree,
            is_closed: is_pseudo_manifold && boundary.is_none(),
            boundary,
            is_pseudo_manifold,
        }
    }

    /// A label of the form `prefix`, `prefix1`, ... not used as a vertex.
    pub fn fresh_label(&self, prefix: &str) -> String {
        if !self.index.contains_key(prefix) {
            return prefix.to_string();
        }
        (1..).map(|i| format!("{prefix}{i}")).find(|l| !self.index.contains_key(l)).unwrap()
    }

    /// Cone with apex `v`; the cone over `{∅}` is the point `v`.
    pub fn cone(&self, v: &str) -> Result<SimplicialComplex> {
        if self.index.contains_key(v) {
            return Err(Error::LabelInUse(v.to_string()));
        }
        let mut labels = self.labels.clone();
        labels.push(v.to_string());
        let apex = (labels.len() - 1) as u32;
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let mut g = f.clone();
                g.push(apex);
                g
            })
            .collect();
        Ok(SimplicialComplex::from_parts(labels, facets))
    }

    /// Suspension with two fresh apex labels.
    pub fn suspension(&self) -> SimplicialComplex {
        let n = self.fresh_label("north");
        let s = self.fresh_label("south");
        let mut labels = self.labels.clone();
        labels.push(n);
        labels.push(s);
        let (a, b) = ((labels.len() - 2) as u32, (labels.len() - 1) as u32);
        let mut facets = Vec::new();
        for f in &self.facets {
            for apex in [a, b] {
                let mut g = f.clone();
                g.push(apex);
                facets.push(g);
            }
        }
        SimplicialComplex::from_parts(labels, facets)
    }

    /// Vertex label used for the barycenter of a face in subdivisions.
    pub fn barycenter_label(&self, face: &[u32]) -> String {
        format!("{{{}}}", self.labels_of(face).join(","))
    }

    /// Barycentric subdivision. Vertex `i` of the result is the barycenter of
    /// the face with global id `i`.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        let labels: Vec<String> = self.all_faces().map(|f| self.barycenter_label(f)).collect();
        let mut facets = Vec::new();
        for f in &self.facets {
            if f.is_empty() {
                continue;
            }
            let mut perm: Vec<u32> = f.clone();
            for_each_permutation(&mut perm, &mut |p| {
                let mut chain = Vec::with_capacity(p.len());
                let mut prefix: Face = Vec::with_capacity(p.len());
                for &v in p {
                    let pos = prefix.partition_point(|&w| w < v);
                    prefix.insert(pos, v);
                    chain.push(self.face_id(&prefix).unwrap() as u32);
                }
                chain.sort_unstable();
                facets.push(chain);
            });
        }
        if facets.is_empty() {
            return SimplicialComplex::empty();
        }
        SimplicialComplex::from_parts(labels, facets)
    }

    /// Applies a label renaming (must be injective).
    pub fn relabel<F: Fn(&str) -> String>(&self, f: F) -> Result<SimplicialComplex> {
        let labels: Vec<String> = self.labels.iter().map(|l| f(l)).collect();
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::LabelInUse(l.clone()));
            }
        }
        Ok(SimplicialComplex::from_facets(
            self.facets.iter().map(|fc| fc.iter().map(|&v| labels[v as usize].clone()).collect::<Vec<_>>()),
        )
        .unwrap_or_else(|_| SimplicialComplex::empty()))
    }

    /// Union of two complexes, identifying vertices by label.
    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut lists = self.facet_labels();
        lists.extend(other.facet_labels());
        lists.retain(|l| !l.is_empty());
        SimplicialComplex::from_facets(lists).unwrap_or_else(|_| SimplicialComplex::empty())
    }

    /// Common faces of two complexes, identifying vertices by label.
    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut faces = Vec::new();
        for f in other.all_faces() {
            let labels = other.labels_of(f);
            if let Some(g) = self.face_from_labels(&labels) {
                if self.face_id(&g).is_some() {
                    faces.push(g);
                }
            }
        }
        if faces.is_empty() {
            return SimplicialComplex::empty();
        }
        self.sub_from_faces(faces)
    }

    /// The `k`-skeleton.
    pub fn skeleton(&self, k: usize) -> SimplicialComplex {
        let mut faces: Vec<Face> = Vec::new();
        for j in 0..=k {
            faces.extend(self.faces(j).iter().cloned());
        }
        self.sub_from_faces(faces)
    }

    /// Whether the 1-skeleton is connected.
    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return false;
        }
        let mut uf = UnionFind::new(n);
        for f in &self.facets {
            for w in f.windows(2) {
                uf.union(w[0] as usize, w[1] as usize);
            }
        }
        let r = uf.find(0);
        (0..n).all(|v| uf.find(v) == r)
    }
}

impl PartialEq for SimplicialComplex {
    /// Equality of labeled facet sets.
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.facet_labels();
        let mut b = other.facet_labels();
        for l in a.iter_mut().chain(b.iter_mut()) {
            l.sort();
        }
        a.sort();
        b.sort();
        a == b
    }
}

/// Heap's algorithm.
pub(crate) fn for_each_permutation<T: Copy>(items: &mut [T], f: &mut impl FnMut(&[T])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Union-find with path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes; the smaller root becomes the representative.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Dual graph of a pure complex.
#[derive(Debug, Clone)]
pub struct DualGraph {
    pub nodes: usize,
    /// `(facet a, facet b, shared ridge)`, sorted.
    pub arcs: Vec<(usize, usize, Face)>,
    /// Arc indices incident to each node.
    pub adjacency: Vec<Vec<usize>>,
}

impl DualGraph {
    pub fn neighbor(&self, arc: usize, node: usize) -> usize {
        let (a, b, _) = &self.arcs[arc];
        if *a == node {
            *b
        } else {
            *a
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes == 0 {
            return false;
        }
        self.bfs_tree(0).iter().all(|p| p.is_some())
    }

    /// BFS from `root`; entry `i` is `Some(arc to parent)` (root: `Some(usize::MAX)`).
    pub fn bfs_tree(&self, root: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.nodes];
        parent[root] = Some(usize::MAX);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adjacency[u] {
                let w = self.neighbor(a, u);
                if parent[w].is_none() {
                    parent[w] = Some(a);
                    queue.push_back(w);
                }
            }
        }
        parent
    }
}

/// Result of [`SimplicialComplex::pseudomanifold_check`].
#[derive(Debug, Clone)]
pub struct PseudoManifoldInfo {
    pub pure: bool,
    pub strongly_connected: bool,
    pub max_ridge_degree: usize,
    /// Complex generated by degree-1 ridges; `None` when there are none.
    pub boundary: Option<SimplicialComplex>,
    pub is_pseudo_manifold: bool,
    pub is_closed: bool,
}
