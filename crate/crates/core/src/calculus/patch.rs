//! Patching boundary-critical matchings across a codimension-one interface.

use crate::complex::{FacePoset, SimplicialComplex};
use crate::error::{Error, Result};
use crate::morse::{validate_matching, MorseMatching};

/// Common part of two `d`-pseudo-manifolds, required to be a
/// `(d-1)`-pseudo-manifold. Matchings passed as `h` to [`patch_morse`]
/// live on this complex.
pub fn patch_interface(m1: &SimplicialComplex, m2: &SimplicialComplex) -> Result<SimplicialComplex> {
    let d = m1.dim();
    if m2.dim() != d || d < 1 {
        return Err(Error::Precondition("both pieces must have the same positive dimension".into()));
    }
    let inter = m1.intersection(m2);
    if inter.dim() != d - 1 || !inter.pseudomanifold_check().is_pseudo_manifold {
        return Err(Error::Precondition("the pieces do not meet in a codimension-one pseudo-manifold".into()));
    }
    Ok(inter)
}

/// The only interior critical top cell of `m`, if unique.
fn critical_top(p: &FacePoset, m: &MorseMatching, d: usize) -> Option<usize> {
    let tops: Vec<usize> = m.critical().iter().copied().filter(|&c| p.dim(c) == d && !p.is_boundary(c)).collect();
    (tops.len() == 1).then(|| tops[0])
}

fn translate(from: &SimplicialComplex, to: &SimplicialComplex, cell: usize) -> Result<usize> {
    let labels = from.labels_of(from.face(cell));
    to.face_from_labels(&labels).and_then(|f| to.face_id(&f)).ok_or(Error::NotAFace(labels))
}

/// Patches `f` on `M1`, `g` on `M2` and `h` on `M1 ∩ M2` into a
/// boundary-critical matching on `M1 ∪ M2`. The critical facets of `f` and
/// `g` must contain the shared ridge `sigma`, which must be the only interior
/// critical ridge of `h`; [`crate::morse::pin_critical`] produces such inputs.
/// The pair `(sigma, Σ2)` joins the pieces.
pub fn patch_morse<S: AsRef<str>>(
    m1: &SimplicialComplex,
    m2: &SimplicialComplex,
    f: &MorseMatching,
    g: &MorseMatching,
    h: &MorseMatching,
    sigma: &[S],
) -> Result<(SimplicialComplex, MorseMatching)> {
    let inter = patch_interface(m1, m2)?;
    let d = m1.dim() as usize;
    let (p1, p2, pi) = (FacePoset::from_complex(m1), FacePoset::from_complex(m2), FacePoset::from_complex(&inter));
    for (name, m, p) in [("f", f, &p1), ("g", g, &p2), ("h", h, &pi)] {
        if m.poset_hash() != p.hash64() {
            return Err(Error::Precondition(format!("{name} belongs to a different complex")));
        }
        if !m.is_boundary_critical() {
            return Err(Error::Precondition(format!("{name} is not boundary-critical")));
        }
    }
    for (name, m) in [("f", f), ("g", g)] {
        if !m.is_equatorial() {
            return Err(Error::Precondition(format!("{name} is not equatorial")));
        }
    }
    let labels: Vec<String> = sigma.iter().map(|s| s.as_ref().to_string()).collect();
    let sigma_i = inter
        .face_from_labels(&labels)
        .and_then(|s| inter.face_id(&s))
        .filter(|&c| pi.dim(c) == d - 1)
        .ok_or_else(|| Error::Precondition(format!("{labels:?} is not a ridge shared by both pieces")))?;
    if critical_top(&pi, h, d - 1) != Some(sigma_i) {
        return Err(Error::Precondition("sigma is not the only interior critical ridge of h".into()));
    }
    let sigma_1 = translate(&inter, m1, sigma_i)?;
    let sigma_2 = translate(&inter, m2, sigma_i)?;
    let big_1 = critical_top(&p1, f, d).ok_or_else(|| Error::Precondition("f has no unique critical facet".into()))?;
    let big_2 = critical_top(&p2, g, d).ok_or_else(|| Error::Precondition("g has no unique critical facet".into()))?;
    if !p1.is_cover(sigma_1, big_1) {
        return Err(Error::Precondition("the critical facet of f does not contain sigma".into()));
    }
    if !p2.is_cover(sigma_2, big_2) {
        return Err(Error::Precondition("the critical facet of g does not contain sigma".into()));
    }
    let union = m1.union(m2);
    let pu = FacePoset::from_complex(&union);
    let mut pairs = Vec::with_capacity(f.len() + g.len() + h.len() + 1);
    for (k, m) in [(m1, f), (m2, g), (&inter, h)] {
        for &(a, b) in m.pairs() {
            pairs.push((translate(k, &union, a)?, translate(k, &union, b)?));
        }
    }
    pairs.push((translate(&inter, &union, sigma_i)?, translate(m2, &union, big_2)?));
    let u = validate_matching(&pu, &pairs)?;
    for k in 0..=d {
        let expected = f.c_int_at(k) + g.c_int_at(k) + h.c_int_at(k) - usize::from(k + 1 >= d);
        if u.c_int_at(k) != expected {
            return Err(Error::Internal(format!("patched matching has {} interior critical {k}-cells, expected {expected}", u.c_int_at(k))));
        }
    }
    Ok((union, u))
}
