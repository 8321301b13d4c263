//! Transfer of matchings to the barycentric subdivision.
//!
//! The simplices of `sd M` are chains of faces of `M`; grouping them by their
//! smallest element gives one block per face `ρ`, the open cone from the
//! barycenter `ρ̂` over `sd lk ρ`. A matching on each link is coned into its
//! block, and each pair `(σ, τ)` of the host matching is realized by pairing
//! the critical top cell of the block of `τ` with a cell of the block of `σ`.
//! Blocks are ordered like the dual block poset, so the union stays acyclic.

use super::dual::DualizeMode;
use crate::complex::{FacePoset, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::is_homology_manifold;
use crate::morse::collapse::{lex_pick, zobrist_keys, Collapser};
use crate::morse::{collapse_search, pin_critical, validate_matching, CollapseOutcome, CollapseProblem, MorseMatching, Strategy};
use serde::Serialize;
use std::collections::HashMap;

/// `sd lk ρ` as the order complex of the faces strictly above `ρ`. Vertex
/// labels are host face ids; the link of a facet is `{∅}`.
pub fn subdivided_link(k: &SimplicialComplex, face: usize) -> SimplicialComplex {
    let rho = k.face(face).clone();
    let labels: Vec<String> = (0..k.num_faces()).map(|i| i.to_string()).collect();
    let mut facets = Vec::new();
    for f in k.facets().iter().filter(|f| rho.iter().all(|v| f.contains(v))) {
        let mut rest: Vec<u32> = f.iter().copied().filter(|v| !rho.contains(v)).collect();
        if rest.is_empty() {
            continue;
        }
        crate::complex::for_each_permutation(&mut rest, &mut |perm| {
            let mut cur = rho.clone();
            let mut chain = Vec::with_capacity(perm.len());
            for &v in perm {
                let pos = cur.partition_point(|&w| w < v);
                cur.insert(pos, v);
                chain.push(k.face_id(&cur).unwrap() as u32);
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

/// Host face ids of a cell of a subdivided link.
fn host_chain(link: &SimplicialComplex, cell: usize) -> Vec<usize> {
    link.face(cell).iter().map(|&v| link.label(v).parse().expect("link labels are face ids")).collect()
}

/// Result of [`subdivide_morse`].
#[derive(Debug, Clone, Serialize)]
pub struct SubdivisionTransfer {
    #[serde(skip)]
    pub complex: SimplicialComplex,
    pub matching: MorseMatching,
    /// Critical cells of the link matchings beyond the unavoidable ones,
    /// summed over all faces and shifted up by one dimension.
    pub link_excess: Vec<usize>,
    /// Predicted critical counts (`c` for plain output, `c^int` for
    /// boundary-critical output).
    pub expected: Vec<usize>,
    /// Faces whose link matching was computed automatically.
    pub auto_links: usize,
}

/// How a face's block is matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    /// Cone over a plain link matching, apex paired with a critical vertex.
    Collar,
    /// Cone over a link matching with a designated critical top cell.
    /// `open` blocks keep only cells off the boundary and have no apex pair.
    Top { open: bool },
}

struct LinkMatching {
    link: SimplicialComplex,
    matching: MorseMatching,
    /// Critical link vertex paired with the apex.
    apex: Option<usize>,
    /// Critical top cell of the link (`None` for the empty link).
    top: Option<usize>,
    excess: Vec<usize>,
}

fn lowest_critical(p: &FacePoset, m: &MorseMatching, dim: usize, interior: bool, skip: Option<usize>) -> Option<usize> {
    m.critical().iter().copied().find(|&c| p.dim(c) == dim && !(interior && p.is_boundary(c)) && Some(c) != skip)
}

/// Plain matching on a ball: lex greedy collapse, then random restarts.
fn auto_plain(p: &FacePoset, seed: u64) -> Result<MorseMatching> {
    let problem = CollapseProblem::onto_vertex();
    let keys = zobrist_keys(p.len());
    let mut c = Collapser::new(p, &problem, &keys)?;
    let mut budget = u64::MAX;
    let (pairs, done) = c.greedy(lex_pick, &mut budget);
    if !done {
        let (out, _) = collapse_search(p, &problem, Strategy::Random { restarts: 16 }, 16 * p.len() as u64, seed)?;
        if let CollapseOutcome::Found(seq) = out {
            return validate_matching(p, &seq.pairs);
        }
    }
    validate_matching(p, &pairs)
}

fn prepare(
    link: SimplicialComplex,
    block: Block,
    pin: Option<&[usize]>,
    supplied: Option<&MorseMatching>,
    seed: u64,
) -> Result<(LinkMatching, bool)> {
    let p = FacePoset::from_complex(&link);
    let ld = link.dim();
    let pin_cell = match pin {
        Some(chain) => {
            let mut face: Vec<u32> = chain
                .iter()
                .map(|c| link.vertex_id(&c.to_string()))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Internal("pinned cell is not in the link".into()))?;
            face.sort_unstable();
            Some(link.face_id(&face).ok_or_else(|| Error::Internal("pinned cell is not in the link".into()))?)
        }
        None => None,
    };
    let auto = supplied.is_none();
    let matching = match supplied {
        Some(m) => {
            if m.poset_hash() != p.hash64() {
                return Err(Error::Precondition("supplied link matching belongs to a different complex".into()));
            }
            m.clone()
        }
        None if ld < 0 => validate_matching(&p, &[])?,
        None => match block {
            Block::Collar => auto_plain(&p, seed)?,
            Block::Top { .. } if ld == 0 => validate_matching(&p, &[])?,
            Block::Top { .. } => {
                let facet = match pin_cell {
                    Some(c) => link.face(c).clone(),
                    None => link.facets()[0].clone(),
                };
                pin_critical(&link, &facet, None)?
            }
        },
    };
    let open = matches!(block, Block::Top { open: true });
    if open && !matching.is_boundary_critical() {
        return Err(Error::Precondition("link matchings of boundary faces must be boundary-critical".into()));
    }
    let (apex, top) = if ld < 0 {
        (None, None)
    } else {
        let top = match block {
            Block::Collar => None,
            Block::Top { .. } => match pin_cell {
                Some(c) if matching.is_critical(c) => Some(c),
                Some(_) => return Err(Error::Precondition("link matching does not leave the required top cell critical".into())),
                None => Some(
                    lowest_critical(&p, &matching, ld as usize, true, None)
                        .ok_or_else(|| Error::Precondition("link matching has no interior critical top cell".into()))?,
                ),
            },
        };
        let apex = if open {
            None
        } else {
            Some(lowest_critical(&p, &matching, 0, false, top).ok_or_else(|| Error::Precondition("link matching has no spare critical vertex".into()))?)
        };
        (apex, top)
    };
    let counts = if open { matching.c_int() } else { matching.c() };
    let mut excess = counts.to_vec();
    for c in apex.iter().chain(top.iter()) {
        excess[p.dim(*c)] -= 1;
    }
    Ok((LinkMatching { link, matching, apex, top, excess }, auto))
}

/// Transfers `f` on a PL manifold `M` to `sd M`.
///
/// `BcToPlain` takes a boundary-critical `f` and returns a plain matching
/// with `c_k(F) = c^int_{d-k}(f) + e_{k-1}`; `PlainToBc` takes any `f` and
/// returns a boundary-critical matching with `c^int_k(F) = c_{d-k}(f) + e_{k-1}`.
/// Here `e` sums the avoidable critical cells of the link matchings: all
/// but one vertex for plain ball links, all but one vertex and one facet
/// for sphere links, all interior ones but one facet for boundary-critical
/// ball links. `links` overrides the automatic link matching of a face; it
/// must live on [`subdivided_link`] of that face.
pub fn subdivide_morse(
    k: &SimplicialComplex,
    f: &MorseMatching,
    mode: DualizeMode,
    links: &HashMap<usize, MorseMatching>,
    seed: u64,
) -> Result<SubdivisionTransfer> {
    let info = k.pseudomanifold_check();
    if !info.is_pseudo_manifold || !is_homology_manifold(k) {
        return Err(Error::Precondition("subdivision transfer needs a manifold".into()));
    }
    let p = FacePoset::from_complex(k);
    if f.poset_hash() != p.hash64() {
        return Err(Error::Precondition("matching belongs to a different complex".into()));
    }
    if mode == DualizeMode::BcToPlain && !f.is_boundary_critical() {
        return Err(Error::Precondition("direction one needs a boundary-critical matching".into()));
    }
    let d = p.max_dim();
    let n = p.len();
    let block_of = |c: usize| match (mode, p.is_boundary(c)) {
        (DualizeMode::BcToPlain, true) => Block::Collar,
        (DualizeMode::BcToPlain, false) => Block::Top { open: false },
        (DualizeMode::PlainToBc, b) => Block::Top { open: b },
    };
    // Upper cells first, so the lower cell of each pair can pin onto them.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&c| (f.partner(c).is_some_and(|q| p.dim(q) > p.dim(c)), c));
    let mut prepared: Vec<Option<LinkMatching>> = (0..n).map(|_| None).collect();
    let mut auto_links = 0;
    for c in order {
        let pin: Option<Vec<usize>> = match f.partner(c) {
            Some(t) if p.dim(t) > p.dim(c) => {
                let up = prepared[t].as_ref().expect("upper cells come first");
                let mut chain = vec![t];
                if let Some(top) = up.top {
                    chain.extend(host_chain(&up.link, top));
                }
                Some(chain)
            }
            _ => None,
        };
        let link = subdivided_link(k, c);
        let stream = seed.wrapping_add(c as u64);
        let (lm, auto) = prepare(link, block_of(c), pin.as_deref(), links.get(&c), stream)?;
        auto_links += usize::from(auto);
        prepared[c] = Some(lm);
    }

    let sd = k.barycentric_subdivision();
    let sd_id = |mut chain: Vec<usize>| -> usize {
        chain.sort_unstable();
        let face: Vec<u32> = chain.into_iter().map(|c| c as u32).collect();
        sd.face_id(&face).expect("chains are faces of the subdivision")
    };
    let mut pairs = Vec::new();
    let mut excess = vec![0usize; d + 2];
    for c in 0..n {
        let lm = prepared[c].as_ref().unwrap();
        let coned = |cell: usize| {
            let mut chain = host_chain(&lm.link, cell);
            chain.push(c);
            sd_id(chain)
        };
        for &(a, b) in lm.matching.pairs() {
            pairs.push((coned(a), coned(b)));
        }
        if let Some(x) = lm.apex {
            pairs.push((sd_id(vec![c]), coned(x)));
        }
        for (j, &e) in lm.excess.iter().enumerate() {
            excess[j + 1] += e;
        }
        if let Some(t) = f.partner(c).filter(|&t| p.dim(t) > p.dim(c)) {
            let up = prepared[t].as_ref().unwrap();
            let mut chain = vec![t];
            if let Some(top) = up.top {
                chain.extend(host_chain(&up.link, top));
            }
            let lower = sd_id(chain.clone());
            chain.push(c);
            pairs.push((lower, sd_id(chain)));
        }
    }
    let psd = FacePoset::from_complex(&sd);
    let m = validate_matching(&psd, &pairs)?;
    let expected: Vec<usize> = (0..=d)
        .map(|j| {
            let host = match mode {
                DualizeMode::BcToPlain => f.c_int_at(d - j),
                DualizeMode::PlainToBc => f.c_at(d - j),
            };
            host + excess[j]
        })
        .collect();
    let actual = match mode {
        DualizeMode::BcToPlain => m.c(),
        DualizeMode::PlainToBc => m.c_int(),
    };
    if actual != expected.as_slice() {
        return Err(Error::Internal(format!("subdivided matching has critical counts {actual:?}, expected {expected:?}")));
    }
    if mode == DualizeMode::PlainToBc && !m.is_boundary_critical() {
        return Err(Error::Internal("subdivided matching touches the boundary".into()));
    }
    excess.truncate(d + 1);
    Ok(SubdivisionTransfer { complex: sd, matching: m, link_excess: excess, expected, auto_links })
}
