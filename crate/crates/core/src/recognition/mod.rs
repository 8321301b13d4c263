//! Recognition: shellability, constructibility, hamiltonian depth, sphere
//! and ball labels, and the hierarchy report.

pub mod constructible;
pub mod hdepth;
pub mod hierarchy;
pub mod shelling;

pub use constructible::{is_constructible, Construction};
pub use hdepth::{hamiltonian_depth, HamiltonianDepth};
pub use hierarchy::{certify_ball_or_sphere, hierarchy_report, DepthValue, HierarchyReport, PropertyVerdict, ShapeCertificate, ShapeLabel};
pub use shelling::{extends_shelling, find_shelling, is_shelling, Shelling};
