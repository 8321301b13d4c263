//! Simplicial chain complexes, homology over ℤ, ℚ and F_p, and algebraic
//! depth from link homology.

pub mod snf;

use crate::complex::{FacePoset, SimplicialComplex};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use snf::SparseRow;
use std::fmt;
use std::str::FromStr;

/// Coefficient ring for homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    Z,
    Q,
    Fp(u64),
}

impl Coefficients {
    pub const F2: Coefficients = Coefficients::Fp(2);

    pub fn is_field(&self) -> bool {
        !matches!(self, Coefficients::Z)
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Z => write!(f, "z"),
            Coefficients::Q => write!(f, "q"),
            Coefficients::Fp(2) => write!(f, "f2"),
            Coefficients::Fp(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(Coefficients::Z),
            "q" => Ok(Coefficients::Q),
            "f2" => Ok(Coefficients::F2),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| format!("unknown field {s:?}; expected q, z, f2 or fp:<p>"))?;
                if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) || p >= 1 << 31 {
                    return Err(format!("{p} is not a supported prime"));
                }
                Ok(Coefficients::Fp(p))
            }
        }
    }
}

/// Betti numbers (and integral torsion) of a complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub coefficients: Coefficients,
    pub reduced: bool,
    /// Rank of `H_k` for `k = 0..=dim`.
    pub betti: Vec<usize>,
    /// Reduced `H_{-1}`; nonzero only for the complex `{∅}`.
    pub betti_minus_one: usize,
    /// Torsion coefficients of `H_k` (ℤ only), ascending divisibility chain.
    #[serde(with = "torsion_serde")]
    pub torsion: Vec<Vec<BigInt>>,
}

mod torsion_serde {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(t: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = t.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v: Vec<Vec<String>> = Vec::deserialize(d)?;
        v.into_iter()
            .map(|r| r.into_iter().map(|x| x.parse().map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

impl HomologyProfile {
    pub fn betti(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }

    /// Alternating sum of Betti numbers (including the reduced `-1` term).
    pub fn euler(&self) -> i64 {
        let s: i64 = self
            .betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        s - self.betti_minus_one as i64
    }

    /// Whether all groups vanish (including torsion).
    pub fn is_acyclic(&self) -> bool {
        self.betti.iter().all(|&b| b == 0)
            && self.betti_minus_one == 0
            && self.torsion.iter().all(|t| t.is_empty())
    }

    /// Smallest degree with nonzero homology (torsion counts over ℤ).
    pub fn first_nonzero(&self) -> Option<isize> {
        if self.betti_minus_one > 0 {
            return Some(-1);
        }
        (0..self.betti.len())
            .find(|&k| self.betti[k] > 0 || self.torsion.get(k).is_some_and(|t| !t.is_empty()))
            .map(|k| k as isize)
    }
}

/// Signed boundary matrix `∂_k : C_k → C_{k-1}` stored by columns.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    pub k: usize,
    pub rows: usize,
    /// One sparse column per `k`-face.
    pub columns: Vec<SparseRow>,
}

/// Signed boundary matrices `∂_1, …, ∂_d`; `∂∘∂ = 0` is verified.
pub fn chain_complex(k: &SimplicialComplex) -> Result<Vec<BoundaryMatrix>> {
    let d = k.dim();
    let mut mats = Vec::new();
    for dim in 1..=d.max(0) as usize {
        mats.push(boundary_matrix(k, dim));
    }
    for w in mats.windows(2) {
        if !composes_to_zero(&w[0], &w[1]) {
            return Err(Error::Internal(format!("boundary of boundary nonzero in degree {}", w[1].k)));
        }
    }
    Ok(mats)
}

/// Mod-2 boundary matrices of a poset; signed coefficients are refused.
pub fn poset_chain_complex(p: &FacePoset, coefficients: Coefficients) -> Result<Vec<BoundaryMatrix>> {
    if coefficients != Coefficients::F2 {
        return Err(Error::SignedOnPoset);
    }
    if !p.mod2_boundary_vanishes() {
        return Err(Error::InvalidPoset("mod-2 boundary of boundary does not vanish".into()));
    }
    let mut mats = Vec::new();
    for dim in 1..=p.max_dim() {
        let lower = p.cells_of_dim(dim - 1);
        let pos = |c: usize| lower.binary_search(&c).unwrap();
        let columns = p
            .cells_of_dim(dim)
            .iter()
            .map(|&c| {
                let mut col: SparseRow = p.faces(c).iter().map(|&f| (pos(f), 1)).collect();
                col.sort_unstable();
                col
            })
            .collect();
        mats.push(BoundaryMatrix { k: dim, rows: lower.len(), columns });
    }
    Ok(mats)
}

fn boundary_matrix(k: &SimplicialComplex, dim: usize) -> BoundaryMatrix {
    let off = k.dim_offset(dim - 1);
    let columns = k
        .faces(dim)
        .iter()
        .map(|f| {
            let mut col: SparseRow = (0..f.len())
                .map(|skip| {
                    let g: Vec<u32> =
                        f.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                    let sign = if skip % 2 == 0 { 1 } else { -1 };
                    (k.face_id(&g).unwrap() - off, sign)
                })
                .collect();
            col.sort_unstable();
            col
        })
        .collect();
    BoundaryMatrix { k: dim, rows: k.faces(dim - 1).len(), columns }
}

fn composes_to_zero(lower: &BoundaryMatrix, upper: &BoundaryMatrix) -> bool {
    upper.columns.iter().all(|col| {
        let mut acc: std::collections::HashMap<usize, i64> = std::collections::HashMap::new();
        for &(r, v) in col {
            for &(rr, w) in &lower.columns[r] {
                *acc.entry(rr).or_default() += v * w;
            }
        }
        acc.values().all(|&x| x == 0)
    })
}

struct RankData {
    rank: usize,
    torsion: Vec<BigInt>,
}

fn rank_data(m: &BoundaryMatrix, coefficients: Coefficients) -> RankData {
    match coefficients {
        Coefficients::Z | Coefficients::Q => {
            let f = snf::invariant_factors(m.columns.clone(), m.rows);
            let torsion = if coefficients == Coefficients::Z {
                f.iter().filter(|x| !x.is_one()).cloned().collect()
            } else {
                Vec::new()
            };
            RankData { rank: f.len(), torsion }
        }
        Coefficients::Fp(p) => RankData { rank: snf::rank_mod_p(&m.columns, m.rows, p), torsion: Vec::new() },
    }
}

fn assemble(
    counts: &[usize],
    ranks: &[RankData],
    coefficients: Coefficients,
    reduced: bool,
) -> HomologyProfile {
    // ranks[i] is the rank of ∂_{i+1}.
    let n = counts.len();
    let rank = |k: usize| if k >= 1 && k <= ranks.len() { ranks[k - 1].rank } else { 0 };
    let aug = usize::from(reduced && n > 0 && counts[0] > 0);
    let mut betti = Vec::with_capacity(n);
    let mut torsion = Vec::with_capacity(n);
    for k in 0..n {
        let outgoing = if k == 0 { aug } else { rank(k) };
        betti.push(counts[k] - outgoing - rank(k + 1));
        torsion.push(if k < ranks.len() { ranks[k].torsion.clone() } else { Vec::new() });
    }
    let betti_minus_one = usize::from(reduced && (n == 0 || counts[0] == 0));
    HomologyProfile { coefficients, reduced, betti, betti_minus_one, torsion }
}

fn compute(k: &SimplicialComplex, coefficients: Coefficients, reduced: bool) -> HomologyProfile {
    let d = k.dim();
    let counts: Vec<usize> = (0..=d.max(-1)).map(|j| k.faces(j as usize).len()).collect();
    let ranks: Vec<RankData> = (1..=d.max(0) as usize)
        .into_par_iter()
        .map(|dim| rank_data(&boundary_matrix(k, dim), coefficients))
        .collect();
    assemble(&counts, &ranks, coefficients, reduced)
}

/// Unreduced homology.
pub fn homology(k: &SimplicialComplex, coefficients: Coefficients) -> HomologyProfile {
    compute(k, coefficients, false)
}

/// Reduced homology (`H̃`); the complex `{∅}` has `H̃_{-1}` of rank one.
pub fn reduced_homology(k: &SimplicialComplex, coefficients: Coefficients) -> HomologyProfile {
    compute(k, coefficients, true)
}

/// Mod-2 homology of a poset with vanishing mod-2 boundary.
pub fn poset_homology(p: &FacePoset, coefficients: Coefficients) -> Result<HomologyProfile> {
    let mats = poset_chain_complex(p, coefficients)?;
    let counts: Vec<usize> = p.f_vector();
    let ranks: Vec<RankData> = mats.iter().map(|m| rank_data(m, coefficients)).collect();
    Ok(assemble(&counts, &ranks, coefficients, false))
}

/// Whether every face link of a pure `d`-complex has the homology of a
/// `(d - |σ|)`-sphere or of a point over ℚ and over F₂, and every ridge lies
/// in at most two facets.
pub fn is_homology_manifold(k: &SimplicialComplex) -> bool {
    let info = k.pseudomanifold_check();
    if !info.is_pseudo_manifold {
        return false;
    }
    let d = k.dim();
    let faces: Vec<&Vec<u32>> = k.all_faces().collect();
    faces.par_iter().all(|f| {
        let link = k.link(f).expect("face of k");
        let sphere_dim = d - f.len() as isize;
        [Coefficients::Q, Coefficients::F2].iter().all(|&field| {
            let h = reduced_homology(&link, field);
            let total: usize = h.betti.iter().sum::<usize>() + h.betti_minus_one;
            total == 0 || (total == 1 && h.first_nonzero() == Some(sphere_dim))
        })
    })
}

/// Algebraic depth over one field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDepth {
    pub field: Coefficients,
    pub adepth: usize,
    pub cohen_macaulay: bool,
    /// A face whose link limits the depth (labels; empty list = the whole complex).
    pub witness_face: Option<Vec<String>>,
}

/// Depth summary of a complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub dim: isize,
    pub fields: Vec<FieldDepth>,
    pub cdepth: Option<serde_json::Value>,
    pub hdepth: Option<serde_json::Value>,
}

/// Largest `m` with `H̃_i(lk σ; F) = 0` for all faces σ (∅ included) and all
/// `i < m - dim σ - 1`, capped at `dim K`.
pub fn algebraic_depth(k: &SimplicialComplex, field: Coefficients) -> Result<FieldDepth> {
    if !field.is_field() || field == Coefficients::Z {
        return Err(Error::Precondition("algebraic depth needs a field".into()));
    }
    let d = k.dim();
    let mut faces: Vec<Vec<u32>> = vec![Vec::new()];
    faces.extend(k.all_faces().cloned());
    let bounds: Vec<(isize, usize)> = faces
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let link = if f.is_empty() { k.clone() } else { k.link(f).expect("face of k") };
            let h = reduced_homology(&link, field);
            let bound = match h.first_nonzero() {
                Some(z) => z + f.len() as isize,
                None => isize::MAX,
            };
            (bound, i)
        })
        .collect();
    let (bound, idx) = bounds.iter().copied().min().unwrap();
    let adepth = bound.min(d).max(0) as usize;
    let witness_face = (bound < d).then(|| k.labels_of(&faces[idx]));
    Ok(FieldDepth { field, adepth, cohen_macaulay: adepth as isize == d, witness_face })
}

/// Depth report over several fields.
pub fn depth_report(k: &SimplicialComplex, fields: &[Coefficients]) -> Result<DepthReport> {
    let fields = fields.iter().map(|&f| algebraic_depth(k, f)).collect::<Result<_>>()?;
    Ok(DepthReport { dim: k.dim(), fields, cdepth: None, hdepth: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc<const N: usize>(f: &[[u32; N]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(f.iter().map(|x| x.to_vec())).unwrap()
    }

    #[test]
    fn triangle_matrices() {
        let t = sc(&[[1, 2, 3]]);
        let m = chain_complex(&t).unwrap();
        assert_eq!((m[0].rows, m[0].columns.len()), (3, 3));
        assert_eq!((m[1].rows, m[1].columns.len()), (3, 1));
    }

    #[test]
    fn sphere_homology() {
        let s = sc(&[[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 4, 5], [1, 3, 4, 5], [2, 3, 4, 5]]);
        let h = homology(&s, Coefficients::Z);
        assert_eq!(h.betti, vec![1, 0, 0, 1]);
        let r = reduced_homology(&s, Coefficients::Q);
        assert_eq!(r.betti, vec![0, 0, 0, 1]);
    }

    #[test]
    fn empty_complex_reduced() {
        let e = SimplicialComplex::empty();
        let r = reduced_homology(&e, Coefficients::Q);
        assert_eq!(r.betti_minus_one, 1);
        assert_eq!(r.first_nonzero(), Some(-1));
    }

    #[test]
    fn poset_signed_refused() {
        let t = sc(&[[1, 2, 3]]);
        let p = FacePoset::from_complex(&t);
        assert_eq!(poset_chain_complex(&p, Coefficients::Z).unwrap_err(), Error::SignedOnPoset);
        let h = poset_homology(&p, Coefficients::F2).unwrap();
        assert_eq!(h.betti, vec![1, 0, 0]);
    }

    #[test]
    fn homology_manifolds() {
        let ball = sc(&[[1, 2, 3, 4], [1, 2, 3, 5]]);
        assert!(is_homology_manifold(&ball));
        let pinched = sc(&[[1, 2, 3], [1, 4, 5]]);
        assert!(!is_homology_manifold(&pinched));
    }

    #[test]
    fn field_parsing() {
        assert_eq!("fp:7".parse::<Coefficients>().unwrap(), Coefficients::Fp(7));
        assert_eq!("f2".parse::<Coefficients>().unwrap(), Coefficients::F2);
        assert!("fp:8".parse::<Coefficients>().is_err());
    }
}
