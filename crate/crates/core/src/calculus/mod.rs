//! Transformations of matchings: duality, cones, patching and subdivision.

pub mod cone;
pub mod dual;
pub mod patch;
pub mod subdivide;

pub use cone::{cone_morse, uncone_morse};
pub use dual::{dual_block_complex, dual_block_poset, dualize_matching, undualize_closed, DualBlockPoset, DualizeMode};
pub use patch::{patch_interface, patch_morse};
pub use subdivide::{subdivide_morse, subdivided_link, SubdivisionTransfer};
