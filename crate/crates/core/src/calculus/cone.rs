//! Coning boundary-critical matchings and reading them back.

use crate::complex::{FacePoset, SimplicialComplex};
use crate::error::{Error, Result};
use crate::morse::{validate_matching, MorseMatching};

/// Cell id in `target` of the face with the given labels.
fn id_by_labels(target: &SimplicialComplex, labels: &[String]) -> Result<usize> {
    target
        .face_from_labels(labels)
        .and_then(|f| target.face_id(&f))
        .ok_or_else(|| Error::NotAFace(labels.to_vec()))
}

/// Lifts a boundary-critical matching on `M` to `v * M`: every pair
/// `(σ, τ)` becomes `(v*σ, v*τ)`, and on a closed `M` the apex is paired
/// with the edge to the critical vertex. Returns the cone and the matching.
pub fn cone_morse(k: &SimplicialComplex, f: &MorseMatching, v: &str) -> Result<(SimplicialComplex, MorseMatching)> {
    let p = FacePoset::from_complex(k);
    if f.poset_hash() != p.hash64() {
        return Err(Error::Precondition("matching belongs to a different complex".into()));
    }
    if !f.is_boundary_critical() {
        let (a, _) = f.pairs().iter().copied().find(|&(a, b)| p.is_boundary(a) || p.is_boundary(b)).unwrap();
        return Err(Error::NotBoundaryCritical(a));
    }
    let cone = k.cone(v)?;
    let lift = |cell: usize| {
        let mut labels = k.labels_of(k.face(cell));
        labels.push(v.to_string());
        id_by_labels(&cone, &labels)
    };
    let mut pairs = Vec::with_capacity(f.len() + 1);
    for &(a, b) in f.pairs() {
        pairs.push((lift(a)?, lift(b)?));
    }
    if !p.has_boundary() {
        let vertices: Vec<usize> = f.critical().iter().copied().filter(|&c| p.dim(c) == 0).collect();
        if vertices.len() != 1 {
            return Err(Error::Precondition(format!("closed input needs one critical vertex, found {}", vertices.len())));
        }
        pairs.push((id_by_labels(&cone, &[v.to_string()])?, lift(vertices[0])?));
    }
    let m = validate_matching(&FacePoset::from_complex(&cone), &pairs)?;
    Ok((cone, m))
}

/// Inverse of [`cone_morse`]: drops the apex from every pair of a
/// boundary-critical matching on `v * M`. Returns `M` and the matching.
pub fn uncone_morse(cone: &SimplicialComplex, g: &MorseMatching, v: &str) -> Result<(SimplicialComplex, MorseMatching)> {
    let apex = cone.vertex_id(v).ok_or_else(|| Error::UnknownLabel(v.to_string()))?;
    let cp = FacePoset::from_complex(cone);
    if g.poset_hash() != cp.hash64() {
        return Err(Error::Precondition("matching belongs to a different complex".into()));
    }
    if cone.facets().iter().any(|f| !f.contains(&apex)) {
        return Err(Error::Precondition(format!("{v:?} is not a cone apex")));
    }
    if !g.is_boundary_critical() {
        let (a, _) = g.pairs().iter().copied().find(|&(a, b)| cp.is_boundary(a) || cp.is_boundary(b)).unwrap();
        return Err(Error::NotBoundaryCritical(a));
    }
    let base = cone.link(&[apex])?;
    let drop = |cell: usize| -> Result<Option<usize>> {
        let face = cone.face(cell);
        if !face.contains(&apex) {
            return Err(Error::Precondition(format!("pair cell {cell} does not contain the apex")));
        }
        let labels: Vec<String> = face.iter().filter(|&&w| w != apex).map(|&w| cone.label(w).to_string()).collect();
        if labels.is_empty() {
            return Ok(None);
        }
        id_by_labels(&base, &labels).map(Some)
    };
    let mut pairs = Vec::with_capacity(g.len());
    for &(a, b) in g.pairs() {
        match (drop(a)?, drop(b)?) {
            (Some(x), Some(y)) => pairs.push((x, y)),
            (None, _) => {}
            (Some(_), None) => unreachable!("apex is a vertex"),
        }
    }
    let m = validate_matching(&FacePoset::from_complex(&base), &pairs)?;
    Ok((base, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generators;
    use crate::morse::polar_morse;

    #[test]
    fn polar_sphere_cones_to_single_interior_cell() {
        let k = generators::simplex_boundary(3);
        let f = polar_morse(&k, &[0, 1, 2], 3, None).unwrap();
        let (cone, g) = cone_morse(&k, &f, "apex").unwrap();
        assert_eq!(g.c_int(), &[0, 0, 0, 1]);
        assert!(g.is_equatorial());
        let (base, back) = uncone_morse(&cone, &g, "apex").unwrap();
        assert!(crate::complex::is_isomorphic(&base, &k));
        assert_eq!(back.pairs(), f.pairs());
    }

    #[test]
    fn reused_apex_is_rejected() {
        let k = generators::simplex_boundary(2);
        let f = polar_morse(&k, &[0, 1], 2, None).unwrap();
        assert_eq!(cone_morse(&k, &f, "1").unwrap_err(), Error::LabelInUse("1".into()));
    }
}
