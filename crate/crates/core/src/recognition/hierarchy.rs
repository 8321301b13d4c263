//! Sphere and ball labels from endo-collapsibility certificates, and the
//! cross-checked hierarchy report.

use super::constructible::{is_constructible, Construction};
use super::hdepth::{hamiltonian_depth, HamiltonianDepth};
use super::shelling::{find_shelling, Shelling};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::{algebraic_depth, homology, is_homology_manifold, reduced_homology, Coefficients, HomologyProfile};
use crate::morse::{collapse_depth, is_endo_collapsible, Certificate, CollapseWitness, DepthStatus, Obstruction, SearchConfig, Verdict};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeLabel {
    Sphere,
    Ball,
    Indeterminate,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeCertificate {
    pub label: ShapeLabel,
    /// Endo-collapsibility certificate backing a sphere or ball label.
    pub certificate: Option<Certificate>,
    pub homology: HomologyProfile,
    /// Why no certificate exists, when known.
    pub obstruction: Option<Obstruction>,
}

fn is_sphere_homology(h: &HomologyProfile, d: usize) -> bool {
    h.torsion.iter().all(|t| t.is_empty()) && (0..=d).all(|i| h.betti(i) == usize::from(i == 0 || i == d))
}

/// Labels `M` a sphere (closed) or a ball (with boundary) when an
/// endo-collapsibility certificate exists, after checking that the homology
/// agrees; otherwise reports the homology and makes no claim.
pub fn certify_ball_or_sphere(m: &SimplicialComplex, cfg: &SearchConfig) -> Result<ShapeCertificate> {
    let info = m.pseudomanifold_check();
    if !info.is_pseudo_manifold {
        return Err(Error::NotPseudoManifold("only pseudo-manifolds are labeled".into()));
    }
    let d = m.dim() as usize;
    let h = homology(m, Coefficients::Z);
    let verdict = is_endo_collapsible(m, cfg)?;
    let (certificate, obstruction) = match verdict {
        Verdict::Yes { witness } => (witness.certificate, None),
        Verdict::No { obstruction } => return Ok(ShapeCertificate { label: ShapeLabel::Indeterminate, certificate: None, homology: h, obstruction: Some(obstruction) }),
        Verdict::Indeterminate { .. } => return Ok(ShapeCertificate { label: ShapeLabel::Indeterminate, certificate: None, homology: h, obstruction: None }),
    };
    let label = if info.is_closed {
        if !is_sphere_homology(&h, d) {
            return Err(Error::Internal(format!("endo-collapsible closed complex has homology {:?}", h.betti)));
        }
        ShapeLabel::Sphere
    } else {
        let boundary = m.boundary_complex()?;
        if !reduced_homology(m, Coefficients::Z).is_acyclic() || !is_sphere_homology(&homology(&boundary, Coefficients::Z), d.saturating_sub(1)) {
            return Err(Error::Internal("endo-collapsible complex with boundary does not have ball homology".into()));
        }
        ShapeLabel::Ball
    };
    Ok(ShapeCertificate { label, certificate: Some(certificate), homology: h, obstruction })
}

/// One property of the report, with a hash of its witness for reproducibility.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyVerdict {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
}

impl PropertyVerdict {
    fn of<T: Serialize>(v: &Verdict<T>) -> Self {
        match v {
            Verdict::Yes { witness } => PropertyVerdict { status: "yes", evidence: Some(evidence_hash(witness)), obstruction: None },
            Verdict::No { obstruction } => PropertyVerdict { status: "no", evidence: None, obstruction: Some(obstruction.clone()) },
            Verdict::Indeterminate { .. } => PropertyVerdict { status: "indeterminate", evidence: None, obstruction: None },
        }
    }

    pub fn is_yes(&self) -> bool {
        self.status == "yes"
    }

    pub fn is_no(&self) -> bool {
        self.status == "no"
    }
}

fn evidence_hash<T: Serialize>(w: &T) -> String {
    let json = serde_json::to_string(w).expect("witnesses serialize");
    format!("{:016x}", json.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3)))
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthValue {
    pub value: usize,
    pub status: DepthStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct HierarchyReport {
    pub dim: usize,
    pub closed: bool,
    pub homology_manifold: bool,
    pub shellable: PropertyVerdict,
    pub constructible: PropertyVerdict,
    pub endo_collapsible: PropertyVerdict,
    pub locally_constructible: PropertyVerdict,
    /// `H_1` vanishes over ℚ and F₂: necessary for simple connectivity, not sufficient.
    pub h1_vanishes: bool,
    pub cdepth: DepthValue,
    pub hdepth: HamiltonianDepth,
    /// Minimum of the algebraic depths over ℚ and F₂.
    pub adepth: usize,
    pub cohen_macaulay: bool,
}

/// Runs every recognition search on `m` and cross-checks the implication
/// chain shellable ⟹ constructible ⟹ endo-collapsible ⟹ LC ⟹ `H_1 = 0`
/// and the depth inequalities. A contradiction is an internal error.
pub fn hierarchy_report(m: &SimplicialComplex, cfg: &SearchConfig) -> Result<HierarchyReport> {
    let info = m.pseudomanifold_check();
    if !info.is_pseudo_manifold {
        return Err(Error::NotPseudoManifold("the hierarchy report needs a pseudo-manifold".into()));
    }
    let d = m.dim() as usize;
    let manifold = is_homology_manifold(m);
    type Pair<A, B> = (Result<Verdict<A>>, Result<Verdict<B>>);
    let ((shell, constr), (endo, hdepth)): (Pair<Shelling, Construction>, (Result<Verdict<CollapseWitness>>, Result<HamiltonianDepth>)) = rayon::join(
        || rayon::join(|| find_shelling(m, cfg.budget), || is_constructible(m, cfg.budget)),
        || rayon::join(|| is_endo_collapsible(m, cfg), || hamiltonian_depth(m, cfg)),
    );
    let (shell, constr, endo, hdepth) = (shell?, constr?, endo?, hdepth?);
    let depths = [Coefficients::Q, Coefficients::F2].map(|f| algebraic_depth(m, f));
    let adepth = depths.into_iter().map(|r| r.map(|a| a.adepth)).collect::<Result<Vec<_>>>()?.into_iter().min().unwrap();
    let h1_vanishes = [Coefficients::Q, Coefficients::F2].iter().all(|&f| homology(m, f).betti(1) == 0);

    let (cdepth, lc) = if endo.is_yes() {
        (DepthValue { value: d, status: DepthStatus::Exact }, PropertyVerdict::of(&endo))
    } else {
        let c = collapse_depth(m, cfg)?;
        let lc = if d < 2 {
            PropertyVerdict { status: "yes", evidence: None, obstruction: None }
        } else if c.k >= 2 {
            PropertyVerdict { status: "yes", evidence: c.witness.as_ref().map(evidence_hash), obstruction: None }
        } else if c.status == DepthStatus::Exact {
            let obstruction = c.obstruction.clone().or(Some(Obstruction::Exhaustion { expansions: c.expansions }));
            PropertyVerdict { status: "no", evidence: None, obstruction }
        } else {
            PropertyVerdict { status: "indeterminate", evidence: None, obstruction: None }
        };
        (DepthValue { value: c.k, status: c.status }, lc)
    };
    let report = HierarchyReport {
        dim: d,
        closed: info.is_closed,
        homology_manifold: manifold,
        shellable: PropertyVerdict::of(&shell),
        constructible: PropertyVerdict::of(&constr),
        endo_collapsible: PropertyVerdict::of(&endo),
        locally_constructible: lc,
        h1_vanishes,
        cdepth,
        hdepth,
        adepth,
        cohen_macaulay: adepth == d,
    };
    let violations = report.violations();
    if !violations.is_empty() {
        return Err(Error::Internal(format!("hierarchy contradiction: {}", violations.join("; "))));
    }
    Ok(report)
}

impl HierarchyReport {
    /// Contradictions with the implication chain or the depth inequalities.
    pub fn violations(&self) -> Vec<String> {
        let chain = [
            ("shellable", &self.shellable),
            ("constructible", &self.constructible),
            ("endo-collapsible", &self.endo_collapsible),
            ("LC", &self.locally_constructible),
        ];
        // Past the first implication the chain only holds for manifolds.
        let reach = if self.homology_manifold { chain.len() } else { 2 };
        let mut out = Vec::new();
        for i in 0..reach {
            for j in i + 1..reach {
                if chain[i].1.is_yes() && chain[j].1.is_no() {
                    out.push(format!("{} but not {}", chain[i].0, chain[j].0));
                }
            }
        }
        if self.homology_manifold && self.locally_constructible.is_yes() && self.dim >= 2 && !self.h1_vanishes {
            out.push("LC with nonzero H_1".into());
        }
        if self.homology_manifold && self.cdepth.status != DepthStatus::Indeterminate && self.cdepth.value > self.adepth {
            out.push(format!("cdepth {} exceeds adepth {}", self.cdepth.value, self.adepth));
        }
        if self.hdepth.status != DepthStatus::Indeterminate && self.hdepth.value > self.adepth {
            out.push(format!("hdepth {} exceeds adepth {}", self.hdepth.value, self.adepth));
        }
        let exact = |v: &PropertyVerdict| v.status != "indeterminate";
        if self.closed && self.dim == 3 && exact(&self.endo_collapsible) && exact(&self.locally_constructible) && self.endo_collapsible.status != self.locally_constructible.status {
            out.push("closed 3-manifold with differing LC and endo-collapsibility".into());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::generators;

    #[test]
    fn simplex_is_everything() {
        let r = hierarchy_report(&generators::simplex(3), &SearchConfig::default()).unwrap();
        assert!(r.shellable.is_yes() && r.constructible.is_yes() && r.endo_collapsible.is_yes() && r.locally_constructible.is_yes());
        assert_eq!((r.cdepth.value, r.adepth), (3, 3));
    }

    #[test]
    fn four_simplex_boundary_is_a_sphere() {
        let c = certify_ball_or_sphere(&generators::simplex_boundary(4), &SearchConfig::default()).unwrap();
        assert_eq!(c.label, ShapeLabel::Sphere);
        assert!(c.certificate.is_some());
    }
}
