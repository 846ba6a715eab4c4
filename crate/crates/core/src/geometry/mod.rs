//! Cones, pseudo-cones and their truncations.

pub mod cone;
pub mod min_norm;
pub mod pseudo_cone;
pub mod simplicial;
pub mod truncation;

pub use cone::{orthant, polygonal_cone, ConeSpec};
pub use min_norm::{distance_to_hull, hausdorff_distance, min_norm_point, MinNormPoint};
pub use pseudo_cone::PseudoCone;
pub use truncation::{FacetKind, TruncationFacet, TruncationPolytope};
