//! Weighted surface-area and cone-volume measures of polyhedral C-pseudo-cones,
//! and a solver for the weighted cone-volume Minkowski problem with atomic
//! data.
//!
//! A pointed closed convex cone `C ⊂ ℝⁿ` is given by its extreme rays. A
//! C-pseudo-cone is a closed convex set `K ⊂ C` not containing the origin with
//! `K + C ⊂ K`; the polyhedral ones are Wulff shapes
//! `K = C ∩ ⋂ {⟨y, u_i⟩ ≤ -f_i}` with normals `u_i` in the interior of the
//! dual region `Ω_{C°}`. Measures are weighted by a homogeneous density
//! `Θ(y) = ‖y‖^{-q} ψ(y/‖y‖)` with `n - 1 < q < n`.
//!
//! ```
//! use pseudocone::geometry::{orthant, PseudoCone};
//! use pseudocone::measures::weighted_cone_volumes;
//! use pseudocone::quadrature::WeightDensity;
//! use pseudocone::solver::{solve, SolveConfig, TargetMeasure};
//!
//! let cone = orthant(2);
//! let theta = WeightDensity::constant(2, 1.5)?;
//! let u = -cone.axis().clone();
//!
//! let target = TargetMeasure::new(vec![u.clone()], vec![3.0])?;
//! let sol = solve(&cone, &theta, &target, &SolveConfig::default())?;
//! let v = weighted_cone_volumes(&sol.body, &theta, 1e-12)?;
//! assert!((v[0].value - 3.0).abs() < 1e-7);
//! # Ok::<(), pseudocone::Error>(())
//! ```
//!
//! [`geometry`] holds the polyhedral objects and [`quadrature`] integrates `Θ`
//! over them. [`measures`] computes `S^Θ` and `V^Θ` by independent routes,
//! [`bounds`] audits the growth bounds near `∂Ω_{C°}`, and [`solver`] runs the
//! variational construction.

pub mod bounds;
pub mod error;
pub mod format;
pub mod geometry;
pub mod linalg;
pub mod measures;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{ConeSpec, PseudoCone};
pub use measures::{MeasureReport, Route};
pub use quadrature::{QuadratureSettings, WeightDensity};
pub use solver::{solve, Solution, SolveConfig, TargetMeasure};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/cones.md")]
    mod cones {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
}
