//! Matching certificates: a JSON form that any external tool can emit and that
//! is re-validated from scratch against the poset.

use super::collapse::CollapseSequence;
use super::matching::{validate_matching, MorseMatching};
use crate::complex::{FacePoset, SimplicialComplex};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// What a certificate claims about its matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    /// Any acyclic matching.
    Matching,
    /// No pair touches the boundary.
    BoundaryCritical,
    /// Boundary-critical, no interior critical vertex, one interior critical facet.
    Equatorial,
    /// Closed poset, one critical vertex and one critical facet.
    Polar,
    /// A single critical vertex.
    Collapsible,
    /// One interior critical cell, a facet (closed: plus one vertex).
    EndoCollapsible,
    /// One interior critical facet and no interior critical cells in the
    /// `k - 1` dimensions below it.
    CollapseDepth(usize),
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateKind::Matching => write!(f, "matching"),
            CertificateKind::BoundaryCritical => write!(f, "boundary-critical"),
            CertificateKind::Equatorial => write!(f, "equatorial"),
            CertificateKind::Polar => write!(f, "polar"),
            CertificateKind::Collapsible => write!(f, "collapsible"),
            CertificateKind::EndoCollapsible => write!(f, "endo-collapsible"),
            CertificateKind::CollapseDepth(k) => write!(f, "collapse-depth:{k}"),
        }
    }
}

impl FromStr for CertificateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "matching" => CertificateKind::Matching,
            "boundary-critical" => CertificateKind::BoundaryCritical,
            "equatorial" => CertificateKind::Equatorial,
            "polar" => CertificateKind::Polar,
            "collapsible" => CertificateKind::Collapsible,
            "endo-collapsible" => CertificateKind::EndoCollapsible,
            other => match other.strip_prefix("collapse-depth:").and_then(|k| k.parse().ok()) {
                Some(k) => CertificateKind::CollapseDepth(k),
                None => return Err(Error::Certificate(format!("unknown kind {other:?}"))),
            },
        })
    }
}

impl Serialize for CertificateKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CertificateKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Serializable matching certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Hex form of the poset's structural hash.
    pub poset_hash: String,
    pub pairs: Vec<[usize; 2]>,
    pub critical: Vec<usize>,
    pub kind: CertificateKind,
}

impl Certificate {
    pub fn from_matching(m: &MorseMatching, kind: CertificateKind) -> Self {
        Certificate {
            poset_hash: format!("{:016x}", m.poset_hash()),
            pairs: m.pairs().iter().map(|&(a, b)| [a, b]).collect(),
            critical: m.critical().to_vec(),
            kind,
        }
    }

    /// Certificate for the matching formed by a collapse sequence.
    pub fn from_sequence(p: &FacePoset, seq: &CollapseSequence, kind: CertificateKind) -> Result<Self> {
        let m = validate_matching(p, &seq.pairs)?;
        Ok(Self::from_matching(&m, kind))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Certificate(e.to_string()))
    }

    /// Re-checks the certificate against `p` and returns the matching.
    pub fn validate(&self, p: &FacePoset) -> Result<MorseMatching> {
        if self.poset_hash != format!("{:016x}", p.hash64()) {
            return Err(Error::Certificate("poset hash mismatch".into()));
        }
        let pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&[a, b]| (a, b)).collect();
        let m = validate_matching(p, &pairs)?;
        let mut declared = self.critical.clone();
        declared.sort_unstable();
        if declared != m.critical() {
            return Err(Error::Certificate("declared critical cells differ from the unmatched cells".into()));
        }
        check_kind(p, &m, self.kind)?;
        Ok(m)
    }

    /// Validates against the face poset of a simplicial complex.
    pub fn validate_on(&self, k: &SimplicialComplex) -> Result<MorseMatching> {
        self.validate(&FacePoset::from_complex(k))
    }
}

fn unit(d: usize, at: &[usize]) -> Vec<usize> {
    let mut v = vec![0; d + 1];
    for &k in at {
        v[k] += 1;
    }
    v
}

/// Checks that a validated matching has the property named by `kind`.
pub fn check_kind(p: &FacePoset, m: &MorseMatching, kind: CertificateKind) -> Result<()> {
    let d = p.max_dim();
    let fail = |what: &str| Err(Error::Certificate(format!("matching is not {what}")));
    let ok = match kind {
        CertificateKind::Matching => true,
        CertificateKind::BoundaryCritical => m.is_boundary_critical(),
        CertificateKind::Equatorial => m.is_equatorial(),
        CertificateKind::Polar => !p.has_boundary() && m.is_polar(),
        CertificateKind::Collapsible => m.critical().len() == 1 && p.dim(m.critical()[0]) == 0,
        CertificateKind::EndoCollapsible => {
            if p.has_boundary() {
                m.is_boundary_critical() && m.c_int() == unit(d, &[d])
            } else {
                d >= 1 && m.c() == unit(d, &[0, d])
            }
        }
        CertificateKind::CollapseDepth(k) => {
            k >= 1
                && k <= d
                && (m.is_boundary_critical() || !p.has_boundary())
                && m.c_int_at(d) == 1
                && (d + 1 - k..d).all(|j| m.c_int_at(j) == 0)
        }
    };
    if ok {
        Ok(())
    } else {
        fail(&kind.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generators;

    #[test]
    fn kind_strings_round_trip() {
        for k in [CertificateKind::Matching, CertificateKind::Polar, CertificateKind::CollapseDepth(2)] {
            assert_eq!(k.to_string().parse::<CertificateKind>().unwrap(), k);
        }
        assert!("bogus".parse::<CertificateKind>().is_err());
    }

    #[test]
    fn empty_matching_certificate() {
        let k = generators::simplex(2);
        let p = FacePoset::from_complex(&k);
        let m = validate_matching(&p, &[]).unwrap();
        let c = Certificate::from_matching(&m, CertificateKind::BoundaryCritical);
        let back = Certificate::from_json(&c.to_json()).unwrap();
        back.validate(&p).unwrap();
        let wrong = Certificate { kind: CertificateKind::Collapsible, ..back };
        assert!(wrong.validate(&p).is_err());
    }
}
