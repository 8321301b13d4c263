//! Dual block posets and the duality of matchings.

use crate::complex::{FacePoset, SimplicialComplex};
use crate::error::{Error, Result};
use crate::morse::{validate_matching, MorseMatching};
use serde::{Deserialize, Serialize};

/// Cell structure with one block per face of `M` plus one boundary block per
/// face of `∂M`. Starred cells come first, in face-id order, so the starred
/// block of face `i` is cell `i`.
#[derive(Debug, Clone)]
pub struct DualBlockPoset {
    poset: FacePoset,
    /// Boundary block of each host cell, if the cell is a boundary cell.
    diamond: Vec<Option<usize>>,
    /// Host cell of each boundary block, indexed from `host_len`.
    diamond_host: Vec<usize>,
    host_len: usize,
    host_hash: u64,
}

impl DualBlockPoset {
    pub fn poset(&self) -> &FacePoset {
        &self.poset
    }

    pub fn into_poset(self) -> FacePoset {
        self.poset
    }

    /// The starred block of host cell `c`.
    pub fn star(&self, c: usize) -> usize {
        c
    }

    /// The boundary block of host boundary cell `c`.
    pub fn diamond(&self, c: usize) -> Option<usize> {
        self.diamond[c]
    }

    /// Whether dual cell `x` is a boundary block.
    pub fn is_diamond(&self, x: usize) -> bool {
        x >= self.host_len
    }

    /// The host cell a dual cell comes from.
    pub fn host(&self, x: usize) -> usize {
        if x < self.host_len {
            x
        } else {
            self.diamond_host[x - self.host_len]
        }
    }

    pub fn host_len(&self) -> usize {
        self.host_len
    }

    pub fn host_hash(&self) -> u64 {
        self.host_hash
    }
}

/// Dual block poset of a graded poset with its boundary mask. For a closed
/// host this is the opposite poset.
pub fn dual_block_poset(p: &FacePoset) -> DualBlockPoset {
    let n = p.len();
    let d = p.max_dim();
    let mut diamond = vec![None; n];
    let mut diamond_host = Vec::new();
    for c in 0..n {
        if p.is_boundary(c) {
            diamond[c] = Some(n + diamond_host.len());
            diamond_host.push(c);
        }
    }
    let total = n + diamond_host.len();
    let mut dims = Vec::with_capacity(total);
    let mut faces = Vec::with_capacity(total);
    let mut names = Vec::with_capacity(total);
    for c in 0..n {
        dims.push(d - p.dim(c));
        let mut fs = p.cofaces(c).to_vec();
        fs.extend(diamond[c]);
        faces.push(fs);
        names.push(format!("{}*", p.name(c)));
    }
    for &c in &diamond_host {
        dims.push(d - 1 - p.dim(c));
        faces.push(p.cofaces(c).iter().filter_map(|&g| diamond[g]).collect());
        names.push(format!("{}^", p.name(c)));
    }
    let poset = FacePoset::from_cells(dims, faces, names).expect("dual block posets are graded");
    DualBlockPoset { poset, diamond, diamond_host, host_len: n, host_hash: p.hash64() }
}

/// Dual block poset of a pseudo-manifold.
pub fn dual_block_complex(k: &SimplicialComplex) -> Result<DualBlockPoset> {
    if !k.pseudomanifold_check().is_pseudo_manifold {
        return Err(Error::NotPseudoManifold("dual blocks need a pseudo-manifold".into()));
    }
    Ok(dual_block_poset(&FacePoset::from_complex(k)))
}

/// Direction of [`dualize_matching`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualizeMode {
    /// Boundary-critical input; the output is a plain matching whose
    /// critical cells are the duals of the interior critical cells.
    BcToPlain,
    /// Any input; the output is boundary-critical on the dual.
    PlainToBc,
}

/// Transfers a matching on the host to its dual block poset.
pub fn dualize_matching(p: &FacePoset, dual: &DualBlockPoset, f: &MorseMatching, mode: DualizeMode) -> Result<MorseMatching> {
    if f.poset_hash() != p.hash64() || dual.host_hash() != p.hash64() {
        return Err(Error::Precondition("matching, host and dual poset disagree".into()));
    }
    let mut pairs: Vec<(usize, usize)> = f.pairs().iter().map(|&(a, b)| (dual.star(b), dual.star(a))).collect();
    if mode == DualizeMode::BcToPlain {
        if let Some(&(a, _)) = f.pairs().iter().find(|&&(a, b)| p.is_boundary(a) || p.is_boundary(b)) {
            return Err(Error::NotBoundaryCritical(a));
        }
        for c in 0..p.len() {
            if let Some(x) = dual.diamond(c) {
                pairs.push((x, dual.star(c)));
            }
        }
    }
    validate_matching(dual.poset(), &pairs)
}

/// Reads a matching on a closed host back from its dual (the opposite poset).
pub fn undualize_closed(p: &FacePoset, g: &MorseMatching) -> Result<MorseMatching> {
    if p.has_boundary() {
        return Err(Error::Precondition("only closed hosts dualize by plain reversal".into()));
    }
    let pairs: Vec<(usize, usize)> = g.pairs().iter().map(|&(a, b)| (b, a)).collect();
    validate_matching(p, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generators;

    #[test]
    fn closed_dual_is_opposite() {
        let k = generators::simplex_boundary(3);
        let p = FacePoset::from_complex(&k);
        let dual = dual_block_complex(&k).unwrap();
        assert_eq!(dual.poset().hash64(), p.opposite().hash64());
        assert_eq!(dual.poset().f_vector(), vec![4, 6, 4]);
    }

    #[test]
    fn simplex_dual_counts() {
        let k = generators::simplex(3);
        let dual = dual_block_complex(&k).unwrap();
        assert_eq!(dual.poset().len(), 29);
        assert!(dual.poset().has_diamond_property());
        for x in 0..dual.poset().len() {
            assert_eq!(dual.poset().is_boundary(x), dual.is_diamond(x));
        }
    }

    #[test]
    fn three_triangles_rejected() {
        let k = SimplicialComplex::from_facets([[1, 2, 3], [1, 2, 4], [1, 2, 5]]).unwrap();
        assert!(matches!(dual_block_complex(&k), Err(Error::NotPseudoManifold(_))));
    }
}
