//! Locally constructible manifolds: trees of simplices, gluing scripts,
//! counting bounds and census.

pub mod bounds;
pub mod census;
pub mod gluing;
mod quotient;
pub mod tree;

pub use bounds::{binomial, e_upper, enumeration_bound, fuss_catalan};
pub use census::{census, CensusConfig, CensusPredicate, CensusProgress, CensusReport};
pub use gluing::{lc_assemble, lc_disassemble, Gluing, GluingScript, LcAssembly};
pub use tree::{enumerate_trees, random_tree_of_simplices, tree_boundary_count, TreeEdge, TreeOfSimplices};
