//! Integration of homogeneous densities over simplices, facets, spherical
//! regions and cone regions.

pub mod density;
pub mod monte_carlo;
pub mod simplex;
pub mod sphere;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::cone::ConeSpec;
use crate::geometry::simplicial::triangulate;
use crate::linalg::Vector;

pub use density::{SphericalFactor, WeightDensity};
pub use monte_carlo::mc_cone_region;
pub use simplex::{integrate_simplex, integrate_simplices, integrate_simplices_with, SimplexRule};
pub use sphere::{integrate_interval, spherical_region_integral, spherical_region_integral_with};

/// A numerical integral with its error estimate. For Monte Carlo routes the
/// estimate is one standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult { value: 0.0, error_estimate: 0.0, evaluations: 0 }
    }

    pub fn scaled(self, factor: f64) -> Self {
        QuadratureResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            evaluations: self.evaluations,
        }
    }
}

/// Tolerances and sample budgets shared by all routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSettings {
    /// Absolute tolerance of deterministic routes.
    pub tol: f64,
    /// Sample count of Monte Carlo routes.
    pub samples: usize,
    pub seed: u64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings { tol: 1e-8, samples: 1_000_000, seed: 42 }
    }
}

/// `∫_F Θ dH^{n-1}` over a bounded facet given by its vertices, triangulated
/// from the centroid. Lower-dimensional input integrates to zero.
pub fn integrate_facet(density: &WeightDensity, facet: &[Vector], tol: f64) -> Result<QuadratureResult> {
    let simplices = triangulate(facet, density.dim() - 1);
    integrate_simplices(density, &simplices, tol)
}

/// `∫_{Ω_C} ψ`, exact to `settings.tol` in the plane and a Monte Carlo
/// estimate otherwise.
pub fn spherical_factor_integral(
    cone: &ConeSpec,
    density: &WeightDensity,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    spherical_region_integral_with(cone, &|v| density.psi(v), settings, &[])
}

/// `H^n_Θ(C ∩ r Bⁿ) = r^{n-q}/(n-q) · ∫_{Ω_C} ψ`.
pub fn weighted_ball_measure(
    cone: &ConeSpec,
    density: &WeightDensity,
    radius: f64,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    let k = density.degree();
    Ok(spherical_factor_integral(cone, density, settings)?.scaled(radius.powf(k) / k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cone::orthant;
    use crate::linalg::vector;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn ball_measure_in_quadrant() {
        let c = orthant(2);
        let d = WeightDensity::constant(2, 1.5).unwrap();
        let s = QuadratureSettings::default();
        assert!((weighted_ball_measure(&c, &d, 1.0, &s).unwrap().value - PI).abs() < 1e-10);
        assert!((weighted_ball_measure(&c, &d, 4.0, &s).unwrap().value - 2.0 * PI).abs() < 1e-10);
        let d = WeightDensity::axis_power(2, 1.5, 1.0, c.axis()).unwrap();
        assert!((weighted_ball_measure(&c, &d, 9.0, &s).unwrap().value - 2.0 * SQRT_2 * 3.0).abs() < 1e-10);
    }

    #[test]
    fn collinear_facet_has_no_mass() {
        let d = WeightDensity::constant(3, 2.5).unwrap();
        let f = [vector(&[1.0, 0.0, 1.0]), vector(&[2.0, 0.0, 1.0]), vector(&[3.0, 0.0, 1.0])];
        let r = integrate_facet(&d, &f, 1e-8).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
