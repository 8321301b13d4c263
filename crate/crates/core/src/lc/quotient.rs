//! Partially glued trees of simplices, tracked at the level of cells so
//! that intermediate quotients need not be simplicial complexes.

use super::gluing::Gluing;
use super::tree::TreeOfSimplices;
use crate::complex::{SimplicialComplex, UnionFind};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Cell structure of a partially glued tree: a union-find over the faces of
/// every tree facet, addressed as `facet << (d + 1) | vertex mask`.
#[derive(Clone)]
pub(super) struct Quotient<'a> {
    tree: &'a TreeOfSimplices,
    pub d: usize,
    uf: UnionFind,
    /// Tree boundary ridges (sorted vertex ids) with their facet.
    boundary: HashMap<Vec<u32>, usize>,
}

/// Face copy located in one tree facet.
#[derive(Clone, Copy)]
pub(super) struct Copy {
    pub facet: usize,
    pub mask: usize,
}

impl<'a> Quotient<'a> {
    pub(super) fn new(tree: &'a TreeOfSimplices) -> Self {
        let d = tree.d();
        let mut q = Quotient {
            tree,
            d,
            uf: UnionFind::new(tree.num_facets() << (d + 1)),
            boundary: tree.boundary_ridges().into_iter().map(|(i, r)| (r, i)).collect(),
        };
        for e in tree.edges() {
            let a = q.locate(e.parent, &e.ridge);
            let map: Vec<(u32, u32)> = e.ridge.iter().map(|&v| (v, v)).collect();
            q.union_faces(a, e.child, &map);
        }
        q
    }

    pub(super) fn id(&self, c: Copy) -> usize {
        (c.facet << (self.d + 1)) | c.mask
    }

    pub(super) fn pos(&self, facet: usize, v: u32) -> usize {
        self.tree.facets()[facet].iter().position(|&w| w == v).expect("vertex of facet")
    }

    pub(super) fn locate(&self, facet: usize, face: &[u32]) -> Copy {
        Copy { facet, mask: face.iter().fold(0, |m, &v| m | 1 << self.pos(facet, v)) }
    }

    pub(super) fn class(&mut self, c: Copy) -> usize {
        let id = self.id(c);
        self.uf.find(id)
    }

    pub(super) fn vertex_class(&mut self, facet: usize, v: u32) -> usize {
        let mask = 1 << self.pos(facet, v);
        self.class(Copy { facet, mask })
    }

    /// Identifies every subface of `a` with its image in facet `fb`.
    pub(super) fn union_faces(&mut self, a: Copy, fb: usize, map: &[(u32, u32)]) {
        let verts: Vec<(usize, usize)> = map.iter().map(|&(x, y)| (self.pos(a.facet, x), self.pos(fb, y))).collect();
        for sub in 1..(1usize << verts.len()) {
            let (mut ma, mut mb) = (0, 0);
            for (j, &(pa, pb)) in verts.iter().enumerate() {
                if sub >> j & 1 == 1 {
                    ma |= 1 << pa;
                    mb |= 1 << pb;
                }
            }
            let (x, y) = (self.id(Copy { facet: a.facet, mask: ma }), self.id(Copy { facet: fb, mask: mb }));
            self.uf.union(x, y);
        }
    }

    /// Number of ridge copies in the class of `c`.
    pub(super) fn ridge_multiplicity(&mut self, c: Copy) -> usize {
        let target = self.class(c);
        let full = (1usize << (self.d + 1)) - 1;
        let mut count = 0;
        for facet in 0..self.tree.num_facets() {
            for skip in 0..=self.d {
                if self.class(Copy { facet, mask: full ^ (1 << skip) }) == target {
                    count += 1;
                }
            }
        }
        count
    }

    pub(super) fn ids_of(&self, labels: &[String]) -> Result<Vec<u32>> {
        let k = self.tree.complex();
        let mut ids = labels.iter().map(|l| k.vertex_id(l).ok_or_else(|| Error::UnknownLabel(l.clone()))).collect::<Result<Vec<u32>>>()?;
        ids.sort_unstable();
        Ok(ids)
    }

    pub(super) fn boundary_copy(&mut self, labels: &[String]) -> Result<(Copy, Vec<u32>)> {
        let ids = self.ids_of(labels)?;
        let facet = *self.boundary.get(&ids).ok_or_else(|| Error::Gluing(format!("{labels:?} is not a boundary ridge of the tree")))?;
        let c = self.locate(facet, &ids);
        if self.ridge_multiplicity(c) != 1 {
            return Err(Error::Gluing(format!("{labels:?} is no longer on the boundary")));
        }
        Ok((c, ids))
    }

    /// Checks a gluing without performing it; returns the faces and the
    /// vertex map in tree ids.
    pub(super) fn prepare(&mut self, g: &Gluing, adjacent: bool) -> Result<(Copy, Copy, Vec<(u32, u32)>)> {
        let (a, a_ids) = self.boundary_copy(&g.pair[0])?;
        let (b, b_ids) = self.boundary_copy(&g.pair[1])?;
        if self.class(a) == self.class(b) {
            return Err(Error::Gluing(format!("{:?} is glued to itself", g.pair[0])));
        }
        let k = self.tree.complex();
        let mut map = Vec::with_capacity(self.d);
        for [x, y] in &g.bijection {
            let (x, y) = (k.vertex_id(x).ok_or_else(|| Error::UnknownLabel(x.clone()))?, k.vertex_id(y).ok_or_else(|| Error::UnknownLabel(y.clone()))?);
            map.push((x, y));
        }
        let mut dom: Vec<u32> = map.iter().map(|p| p.0).collect();
        let mut img: Vec<u32> = map.iter().map(|p| p.1).collect();
        dom.sort_unstable();
        img.sort_unstable();
        if dom != a_ids || img != b_ids {
            return Err(Error::Gluing(format!("bijection does not map {:?} onto {:?}", g.pair[0], g.pair[1])));
        }
        if adjacent {
            let ridge = g.shared_ridge.as_ref().ok_or_else(|| Error::Gluing("adjacent gluing without a shared ridge".into()))?;
            let r_ids = self.ids_of(ridge)?;
            if r_ids.len() + 1 != self.d || !r_ids.iter().all(|v| a_ids.contains(v)) {
                return Err(Error::Gluing(format!("{ridge:?} is not a ridge of {:?}", g.pair[0])));
            }
            let img: Vec<u32> = r_ids.iter().map(|v| map.iter().find(|p| p.0 == *v).unwrap().1).collect();
            let fixed = r_ids.iter().zip(&img).all(|(&x, &y)| self.vertex_class(a.facet, x) == self.vertex_class(b.facet, y));
            let ra = self.locate(a.facet, &r_ids);
            let rb = self.locate(b.facet, &img);
            if !fixed || self.class(ra) != self.class(rb) {
                return Err(Error::Gluing(format!("{:?} and {:?} are not adjacent along {ridge:?}", g.pair[0], g.pair[1])));
            }
        }
        Ok((a, b, map))
    }

    pub(super) fn glue(&mut self, g: &Gluing, adjacent: bool, strict: bool) -> Result<()> {
        let (a, b, map) = self.prepare(g, adjacent)?;
        self.union_faces(a, b.facet, &map);
        if strict {
            self.check_facets()?;
        }
        Ok(())
    }

    pub(super) fn facet_classes(&mut self) -> Vec<Vec<usize>> {
        (0..self.tree.num_facets())
            .map(|facet| {
                let mut c: Vec<usize> = (0..=self.d).map(|j| self.class(Copy { facet, mask: 1 << j })).collect();
                c.sort_unstable();
                c
            })
            .collect()
    }

    /// Failures that later gluings cannot undo.
    pub(super) fn check_facets(&mut self) -> Result<()> {
        let mut seen = HashMap::new();
        for (i, c) in self.facet_classes().into_iter().enumerate() {
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Gluing(format!("facet {i} has a repeated vertex")));
            }
            if let Some(j) = seen.insert(c, i) {
                return Err(Error::Gluing(format!("facets {j} and {i} lie on the same vertex set")));
            }
        }
        Ok(())
    }

    /// Whether distinct cells of the quotient have distinct vertex sets.
    pub(super) fn is_simplicial(&mut self) -> bool {
        let full = 1usize << (self.d + 1);
        let mut by_vertices: HashMap<Vec<usize>, usize> = HashMap::new();
        for facet in 0..self.tree.num_facets() {
            for mask in 1..full {
                let cell = self.class(Copy { facet, mask });
                let mut verts: Vec<usize> = (0..=self.d).filter(|j| mask >> j & 1 == 1).map(|j| self.class(Copy { facet, mask: 1 << j })).collect();
                verts.sort_unstable();
                if verts.windows(2).any(|w| w[0] == w[1]) {
                    return false;
                }
                if *by_vertices.entry(verts).or_insert(cell) != cell {
                    return false;
                }
            }
        }
        true
    }

    /// The quotient's vertex-set shadow, plus a map from copies to its faces.
    pub(super) fn complex(&mut self) -> (SimplicialComplex, HashMap<usize, u32>) {
        let mut index: HashMap<usize, u32> = HashMap::new();
        let mut labels = Vec::new();
        let mut facets = Vec::new();
        for (facet, verts) in self.tree.facets().iter().enumerate() {
            let mut f = Vec::with_capacity(verts.len());
            for (j, &v) in verts.iter().enumerate() {
                let c = self.class(Copy { facet, mask: 1 << j });
                let id = *index.entry(c).or_insert_with(|| {
                    labels.push(self.tree.complex().label(v).to_string());
                    labels.len() as u32 - 1
                });
                f.push(id);
            }
            f.sort_unstable();
            f.dedup();
            facets.push(f);
        }
        (SimplicialComplex::from_parts(labels, facets), index)
    }

    /// Tree vertex ids of a copy, in position order.
    pub(super) fn vertices(&self, c: Copy) -> Vec<u32> {
        let f = &self.tree.facets()[c.facet];
        (0..f.len()).filter(|j| c.mask >> j & 1 == 1).map(|j| f[j]).collect()
    }

    /// One copy of every ridge still on the boundary, in copy order.
    pub(super) fn boundary_copies(&mut self) -> Vec<Copy> {
        let full = (1usize << (self.d + 1)) - 1;
        let mut count: HashMap<usize, (Copy, usize)> = HashMap::new();
        let mut order = Vec::new();
        for facet in 0..self.tree.num_facets() {
            for skip in 0..=self.d {
                let c = Copy { facet, mask: full ^ (1 << skip) };
                let e = count.entry(self.class(c)).or_insert_with(|| {
                    order.push(c);
                    (c, 0)
                });
                e.1 += 1;
            }
        }
        order.into_iter().filter(|&c| count[&self.class(c)].1 == 1).collect()
    }

    /// The cell partition, as the class root of every copy.
    pub(super) fn key(&mut self) -> Vec<usize> {
        (0..self.tree.num_facets() << (self.d + 1)).map(|i| self.uf.find(i)).collect()
    }
}
