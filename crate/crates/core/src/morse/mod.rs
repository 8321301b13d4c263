//! Acyclic matchings, collapses and the boundary-critical Morse engine.

pub mod certificate;
pub mod collapse;
pub mod engine;
pub mod matching;

pub use certificate::{check_kind, Certificate, CertificateKind};
pub use collapse::{collapse_search, exhaustive_search, CollapseOutcome, CollapseProblem, CollapseSequence, Goal, SearchStats, Strategy};
pub use engine::{
    boundary_critical_morse, collapse_depth, endo_collapse_from, is_collapsible, is_endo_collapsible, pin_critical, polar_morse, verify_morse_inequalities,
    CollapseWitness, DepthCertificate, DepthStatus, InequalityReport, InequalityRow, Obstruction, SearchConfig, Verdict,
};
pub use matching::{matching_to_function, morse_function_pairs, validate_matching, MorseMatching};
