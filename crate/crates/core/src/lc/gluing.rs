//! Gluing scripts: assembling a manifold from a tree of simplices by
//! identifying boundary ridges, and cutting a manifold back open along a
//! boundary-critical matching.

use super::tree::TreeOfSimplices;
use super::quotient::{Copy, Quotient};
use crate::complex::{FacePoset, SimplicialComplex, UnionFind};
use crate::error::{Error, Result};
use crate::morse::{validate_matching, MorseMatching};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// One identification of two boundary ridges of the tree, named by tree
/// labels. `bijection` maps the vertices of `pair[0]` to those of `pair[1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub pair: [Vec<String>; 2],
    pub bijection: Vec<[String; 2]>,
    /// Ridge of `pair[0]` fixed by the bijection; required for adjacent gluings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shared_ridge: Option<Vec<String>>,
}

/// A tree plus free gluings (`phase_a`) followed by adjacent gluings
/// (`phase_b`), executed in order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GluingScript {
    pub tree: TreeOfSimplices,
    pub phase_a: Vec<Gluing>,
    pub phase_b: Vec<Gluing>,
}

/// Result of [`lc_assemble`]. Permissive runs may produce a quotient that is
/// not a simplicial complex; then `simplicial` is false and the complex is
/// only its vertex-set shadow.
#[derive(Debug, Clone)]
pub struct LcAssembly {
    pub complex: SimplicialComplex,
    pub matching: Option<MorseMatching>,
    pub simplicial: bool,
}

fn face_of(q: &mut Quotient, k: &SimplicialComplex, index: &HashMap<usize, u32>, c: Copy) -> Result<usize> {
    let mut f: Vec<u32> = (0..=q.d).filter(|j| c.mask >> j & 1 == 1).map(|j| index[&q.class(Copy { facet: c.facet, mask: 1 << j })]).collect();
    f.sort_unstable();
    k.face_id(&f).ok_or_else(|| Error::Internal("glued cell missing from the quotient".into()))
}

/// Executes `script`. The emitted matching pairs each non-root facet with
/// its tree ridge and each adjacent gluing's ridge with the glued face; the
/// free gluings leave interior critical ridges. Strict mode rejects
/// quotients that are not simplicial complexes.
pub fn lc_assemble(script: &GluingScript, strict: bool) -> Result<LcAssembly> {
    let tree = &script.tree;
    let mut q = Quotient::new(tree);
    for g in &script.phase_a {
        q.glue(g, false, strict)?;
    }
    let mut sunk = Vec::with_capacity(script.phase_b.len());
    for g in &script.phase_b {
        let (a, _, _) = q.prepare(g, true)?;
        let r_ids = q.ids_of(g.shared_ridge.as_ref().unwrap())?;
        sunk.push((q.locate(a.facet, &r_ids), a));
        q.glue(g, true, strict)?;
    }
    let simplicial = q.is_simplicial();
    if strict && !simplicial {
        return Err(Error::Gluing("the quotient is not a simplicial complex".into()));
    }
    let (complex, index) = q.complex();
    let p = FacePoset::from_complex(&complex);
    let mut read_off = || -> Result<MorseMatching> {
        let mut pairs = Vec::with_capacity(tree.num_facets() + sunk.len());
        for e in tree.edges() {
            let r = q.locate(e.child, &e.ridge);
            let full = Copy { facet: e.child, mask: (1 << (q.d + 1)) - 1 };
            pairs.push((face_of(&mut q, &complex, &index, r)?, face_of(&mut q, &complex, &index, full)?));
        }
        for &(r, a) in &sunk {
            pairs.push((face_of(&mut q, &complex, &index, r)?, face_of(&mut q, &complex, &index, a)?));
        }
        validate_matching(&p, &pairs)
    };
    let matching = match read_off() {
        Ok(m) => Some(m),
        Err(e) if strict => return Err(e),
        Err(_) => None,
    };
    if let (true, Some(m)) = (simplicial, &matching) {
        if m.c_int_at(tree.d() - 1) != script.phase_a.len() {
            return Err(Error::Internal(format!(
                "assembled matching has {} interior critical ridges for {} free gluings",
                m.c_int_at(tree.d() - 1),
                script.phase_a.len()
            )));
        }
    }
    Ok(LcAssembly { complex, matching, simplicial })
}

/// Cuts `k` open along the ridges not crossed by the facet tree of `f` and
/// reads off the gluing script that rebuilds it: the interior critical
/// ridges of `f` become free gluings, its ridge-below-ridge pairs adjacent
/// gluings, ordered so that each is adjacent when executed.
pub fn lc_disassemble(k: &SimplicialComplex, f: &MorseMatching) -> Result<GluingScript> {
    let p = FacePoset::from_complex(k);
    if f.poset_hash() != p.hash64() {
        return Err(Error::Precondition("matching belongs to a different complex".into()));
    }
    if !(f.is_equatorial() || f.is_polar()) {
        return Err(Error::Precondition("the matching is neither equatorial nor polar".into()));
    }
    let d = p.max_dim();
    let facet_ids: Vec<usize> = p.cells_of_dim(d).to_vec();
    let n = facet_ids.len();
    let facet_index: HashMap<usize, usize> = facet_ids.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let root = facet_ids.iter().position(|&c| f.is_critical(c)).expect("one critical facet");
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut tree_pairs = 0;
    for &(a, b) in f.pairs() {
        if p.dim(b) != d {
            continue;
        }
        tree_pairs += 1;
        let other = p.cofaces(a).iter().copied().find(|&c| c != b);
        let other = other.ok_or_else(|| Error::Precondition("a facet is paired with a boundary ridge".into()))?;
        parent[facet_index[&b]] = Some((facet_index[&other], a));
    }
    let spanning = tree_pairs + 1 == n
        && (0..n).all(|mut i| {
            let mut steps = 0;
            while let Some((up, _)) = parent[i] {
                i = up;
                steps += 1;
                if steps > n {
                    return false;
                }
            }
            i == root
        });
    if !spanning {
        return Err(Error::Precondition("the facet pairs of the matching do not form a spanning tree of the dual graph".into()));
    }
    // Vertex copies (facet, position), merged across tree ridges.
    let facets: Vec<&Vec<u32>> = facet_ids.iter().map(|&c| k.face(c)).collect();
    let slot = |i: usize, v: u32| i * (d + 1) + facets[i].iter().position(|&w| w == v).unwrap();
    let mut uf = UnionFind::new(n * (d + 1));
    for (i, e) in parent.iter().enumerate() {
        if let Some((up, ridge)) = *e {
            for &v in k.face(ridge) {
                uf.union(slot(i, v), slot(up, v));
            }
        }
    }
    let mut copies: HashMap<u32, Vec<usize>> = HashMap::new();
    for i in 0..n {
        for &v in facets[i] {
            let r = uf.find(slot(i, v));
            let list = copies.entry(v).or_default();
            if !list.contains(&r) {
                list.push(r);
            }
        }
    }
    let mut copy_label: HashMap<usize, String> = HashMap::new();
    for (&v, roots) in &copies {
        for (j, &r) in roots.iter().enumerate() {
            let label = if roots.len() == 1 { k.label(v).to_string() } else { format!("{}.{j}", k.label(v)) };
            if roots.len() > 1 && k.vertex_id(&label).is_some() {
                return Err(Error::LabelInUse(label));
            }
            copy_label.insert(r, label);
        }
    }
    let mut label_of = |i: usize, v: u32| copy_label[&uf.find(slot(i, v))].clone();
    let mut order = vec![root];
    let mut at = 0;
    while at < order.len() {
        let u = order[at];
        order.extend((0..n).filter(|&c| parent[c].map(|e| e.0) == Some(u)));
        at += 1;
    }
    let tree_facets: Vec<Vec<String>> = order.iter().map(|&i| facets[i].iter().map(|&v| label_of(i, v)).collect()).collect();
    let tree = TreeOfSimplices::from_facet_labels(&tree_facets)?;
    let mut gluing = |cell: usize, ridge: Option<usize>| {
        let cof = p.cofaces(cell);
        let (ia, ib) = (facet_index[&cof[0]], facet_index[&cof[1]]);
        let face = k.face(cell);
        Gluing {
            pair: [face.iter().map(|&v| label_of(ia, v)).collect(), face.iter().map(|&v| label_of(ib, v)).collect()],
            bijection: face.iter().map(|&v| [label_of(ia, v), label_of(ib, v)]).collect(),
            shared_ridge: ridge.map(|r| k.face(r).iter().map(|&v| label_of(ia, v)).collect()),
        }
    };
    let phase_a: Vec<Gluing> = f.critical().iter().copied().filter(|&c| p.dim(c) + 1 == d && !p.is_boundary(c)).map(|c| gluing(c, None)).collect();
    let mut pending: Vec<Gluing> =
        f.pairs().iter().filter(|&&(_, b)| p.dim(b) + 1 == d).map(|&(a, b)| gluing(b, Some(a))).collect();
    let mut q = Quotient::new(&tree);
    for g in &phase_a {
        q.glue(g, false, false)?;
    }
    let mut phase_b = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let next = (0..pending.len()).find(|&i| q.prepare(&pending[i], true).is_ok());
        let i = next.ok_or_else(|| Error::Precondition("the ridge pairs of the matching admit no adjacent gluing order".into()))?;
        let g = pending.remove(i);
        q.glue(&g, true, false)?;
        phase_b.push(g);
    }
    Ok(GluingScript { tree, phase_a, phase_b })
}
