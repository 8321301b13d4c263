use super::SimplicialComplex;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// One cell of a poset file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetCellJson {
    pub id: usize,
    pub dim: usize,
    pub boundary: Vec<usize>,
}

/// Graded poset of cells with cover relations.
#[derive(Debug, Clone)]
pub struct FacePoset {
    dims: Vec<usize>,
    faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
    names: Vec<String>,
    by_dim: Vec<Vec<usize>>,
    diamond: bool,
    mod2_exact: bool,
    boundary: Vec<bool>,
    hash: u64,
}

pub(crate) fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl FacePoset {
    /// Builds a poset from dimensions, cover lists (codim-1 faces) and names.
    pub fn from_cells(dims: Vec<usize>, faces: Vec<Vec<usize>>, names: Vec<String>) -> Result<Self> {
        let n = dims.len();
        if faces.len() != n || names.len() != n {
            return Err(Error::InvalidPoset("length mismatch".into()));
        }
        let mut faces = faces;
        for (c, fs) in faces.iter_mut().enumerate() {
            fs.sort_unstable();
            let len = fs.len();
            fs.dedup();
            if fs.len() != len {
                return Err(Error::InvalidPoset(format!("cell {c} lists a face twice")));
            }
            for &f in fs.iter() {
                if f >= n {
                    return Err(Error::InvalidPoset(format!("cell {c} refers to unknown cell {f}")));
                }
                if dims[f] + 1 != dims[c] {
                    return Err(Error::NotGraded(c));
                }
            }
        }
        let mut cofaces = vec![Vec::new(); n];
        for (c, fs) in faces.iter().enumerate() {
            for &f in fs {
                cofaces[f].push(c);
            }
        }
        let top = dims.iter().copied().max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); top + 1];
        for (c, &d) in dims.iter().enumerate() {
            by_dim[d].push(c);
        }
        let mut diamond = true;
        let mut mod2_exact = true;
        for c in 0..n {
            if dims[c] < 2 {
                continue;
            }
            let mut count: HashMap<usize, usize> = HashMap::new();
            for &f in &faces[c] {
                for &g in &faces[f] {
                    *count.entry(g).or_default() += 1;
                }
            }
            for &k in count.values() {
                if k != 2 {
                    diamond = false;
                }
                if k % 2 != 0 {
                    mod2_exact = false;
                }
            }
        }
        let mut boundary = vec![false; n];
        if top >= 1 {
            let mut stack: Vec<usize> = by_dim[top - 1]
                .iter()
                .copied()
                .filter(|&c| cofaces[c].len() == 1)
                .collect();
            while let Some(c) = stack.pop() {
                if !boundary[c] {
                    boundary[c] = true;
                    stack.extend(faces[c].iter().copied());
                }
            }
        }
        let mut bytes = Vec::new();
        for c in 0..n {
            bytes.extend((dims[c] as u64).to_le_bytes());
            bytes.extend((faces[c].len() as u64).to_le_bytes());
            for &f in &faces[c] {
                bytes.extend((f as u64).to_le_bytes());
            }
        }
        let hash = fnv1a(bytes);
        Ok(FacePoset { dims, faces, cofaces, names, by_dim, diamond, mod2_exact, boundary, hash })
    }

    /// Face poset of a simplicial complex; cell ids are the complex's global face ids.
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        let mut dims = Vec::with_capacity(k.num_faces());
        let mut faces = Vec::with_capacity(k.num_faces());
        let mut names = Vec::with_capacity(k.num_faces());
        for f in k.all_faces() {
            dims.push(f.len() - 1);
            names.push(k.labels_of(f).join(","));
            let mut fs = Vec::new();
            if f.len() > 1 {
                for skip in 0..f.len() {
                    let g: Vec<u32> =
                        f.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                    fs.push(k.face_id(&g).expect("subface present"));
                }
            }
            faces.push(fs);
        }
        Self::from_cells(dims, faces, names).expect("simplicial face posets are graded")
    }

    /// Reads the poset file format; cells are renumbered densely by ascending id.
    pub fn from_json_cells(cells: &[PosetCellJson]) -> Result<Self> {
        let mut ids: Vec<usize> = cells.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPoset("duplicate cell id".into()));
        }
        let pos: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut dims = vec![0; cells.len()];
        let mut faces = vec![Vec::new(); cells.len()];
        let mut names = vec![String::new(); cells.len()];
        for c in cells {
            let i = pos[&c.id];
            dims[i] = c.dim;
            names[i] = c.id.to_string();
            faces[i] = c
                .boundary
                .iter()
                .map(|b| {
                    pos.get(b)
                        .copied()
                        .ok_or_else(|| Error::InvalidPoset(format!("cell {} refers to unknown cell {b}", c.id)))
                })
                .collect::<Result<_>>()?;
        }
        Self::from_cells(dims, faces, names)
    }

    pub fn to_json_cells(&self) -> Vec<PosetCellJson> {
        (0..self.len())
            .map(|c| PosetCellJson { id: c, dim: self.dims[c], boundary: self.faces[c].clone() })
            .collect()
    }

    /// The order-opposite poset of a pure poset (dimension `d - dim`).
    pub fn opposite(&self) -> Self {
        let top = self.max_dim();
        let dims = self.dims.iter().map(|&d| top - d).collect();
        Self::from_cells(dims, self.cofaces.clone(), self.names.clone()).expect("opposite is graded")
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, c: usize) -> usize {
        self.dims[c]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn max_dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    /// Codimension-1 faces of `c`.
    pub fn faces(&self, c: usize) -> &[usize] {
        &self.faces[c]
    }

    /// Cells covering `c`.
    pub fn cofaces(&self, c: usize) -> &[usize] {
        &self.cofaces[c]
    }

    pub fn cells_of_dim(&self, k: usize) -> &[usize] {
        self.by_dim.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn name(&self, c: usize) -> &str {
        &self.names[c]
    }

    /// Whether `a` is a codimension-1 face of `b`.
    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        b < self.len() && self.faces[b].binary_search(&a).is_ok()
    }

    pub fn has_diamond_property(&self) -> bool {
        self.diamond
    }

    pub fn mod2_boundary_vanishes(&self) -> bool {
        self.mod2_exact
    }

    /// Whether `c` lies in the boundary (closure of top-minus-one cells with one coface).
    pub fn is_boundary(&self, c: usize) -> bool {
        self.boundary[c]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary.iter().any(|&b| b)
    }

    /// Structural 64-bit hash (dimensions and cover lists).
    pub fn hash64(&self) -> u64 {
        self.hash
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(|v| v.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(k, v)| if k % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) })
            .sum()
    }

    /// Simplicial complex whose simplices are the chains of the poset.
    pub fn order_complex(&self) -> SimplicialComplex {
        let labels: Vec<String> = (0..self.len()).map(|c| format!("c{c}")).collect();
        let mut facets = Vec::new();
        let maximal: Vec<usize> = (0..self.len()).filter(|&c| self.cofaces[c].is_empty()).collect();
        let mut chain = Vec::new();
        for m in maximal {
            self.chains_down(m, &mut chain, &mut facets);
        }
        if facets.is_empty() {
            return SimplicialComplex::empty();
        }
        SimplicialComplex::from_parts(labels, facets)
    }

    fn chains_down(&self, c: usize, chain: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        chain.push(c as u32);
        if self.faces[c].is_empty() {
            let mut f = chain.clone();
            f.sort_unstable();
            out.push(f);
        } else {
            for &g in &self.faces[c] {
                self.chains_down(g, chain, out);
            }
        }
        chain.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::is_isomorphic;

    #[test]
    fn simplicial_posets() {
        let t = SimplicialComplex::from_facets([[1, 2, 3]]).unwrap();
        let p = FacePoset::from_complex(&t);
        assert_eq!(p.len(), 7);
        assert!(p.has_diamond_property());
        assert!(p.mod2_boundary_vanishes());
        let b = SimplicialComplex::from_facets([[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]).unwrap();
        let p = FacePoset::from_complex(&b);
        assert_eq!(p.len(), 14);
        assert!(!p.has_boundary());
        let oc = p.order_complex();
        assert!(is_isomorphic(&oc, &b.barycentric_subdivision()));
    }

    #[test]
    fn boundary_mask_of_triangle() {
        let t = SimplicialComplex::from_facets([[1, 2, 3]]).unwrap();
        let p = FacePoset::from_complex(&t);
        assert_eq!(p.boundary_mask().iter().filter(|&&b| b).count(), 6);
    }

    #[test]
    fn non_graded_rejected() {
        let e = FacePoset::from_cells(vec![0, 2], vec![vec![], vec![0]], vec!["a".into(), "b".into()]);
        assert_eq!(e.unwrap_err(), Error::NotGraded(1));
    }

    #[test]
    fn json_round_trip() {
        let t = SimplicialComplex::from_facets([[1, 2], [2, 3]]).unwrap();
        let p = FacePoset::from_complex(&t);
        let q = FacePoset::from_json_cells(&p.to_json_cells()).unwrap();
        assert_eq!(p.hash64(), q.hash64());
    }
}
