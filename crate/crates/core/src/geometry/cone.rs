use crate::error::{Error, Result};
use crate::geometry::simplicial::polytope_volume;
use crate::linalg::{self, Vector};

/// Absolute tolerance for incidence and feasibility tests on unit vectors.
pub const TOL: f64 = 1e-9;

/// Strictness margin for membership in the open regions Ω_C and Ω_C°.
pub const INTERIOR_EPS: f64 = 1e-12;

/// A pointed, full-dimensional polyhedral cone `C` together with its dual
/// data and a fixed axis vector `v` with `v ∈ int C` and `-v ∈ int C°`.
///
/// The outer unit facet normals of `C` are exactly the unit extreme rays of
/// the dual cone `C°`, so both are stored once in `facet_normals`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    dim: usize,
    rays: Vec<Vector>,
    facet_normals: Vec<Vector>,
    /// `ray_facets[j]` lists the facets of `C` containing ray `j`.
    ray_facets: Vec<Vec<usize>>,
    axis: Vector,
}

impl ConeSpec {
    /// Builds the cone spanned by `rays`, using the normalized sum of the unit
    /// extreme rays as axis.
    pub fn new(rays: &[Vector]) -> Result<Self> {
        Self::build(rays, None)
    }

    /// Builds the cone spanned by `rays` with an explicit axis.
    pub fn with_axis(rays: &[Vector], axis: &Vector) -> Result<Self> {
        Self::build(rays, Some(axis))
    }

    fn build(rays: &[Vector], axis: Option<&Vector>) -> Result<Self> {
        let dim = rays.first().map(|r| r.len()).unwrap_or(0);
        if dim < 2 {
            return Err(Error::InvalidInput("cone dimension must be at least 2".into()));
        }
        let mut units: Vec<Vector> = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::InvalidInput(format!("ray {i} has dimension {} != {dim}", r.len())));
            }
            let norm = r.norm();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::InvalidInput(format!("ray {i} is zero or not finite")));
            }
            let u = r / norm;
            if !units.iter().any(|w| (w - &u).norm() < TOL) {
                units.push(u);
            }
        }
        let rank = linalg::rank(&units, dim, TOL);
        if rank < dim {
            return Err(Error::NotFullDimensional { rank, dim });
        }

        let mut facet_normals: Vec<Vector> = Vec::new();
        linalg::for_each_subset(units.len(), dim - 1, |subset| {
            let vs: Vec<Vector> = subset.iter().map(|&j| units[j].clone()).collect();
            let Some(w) = linalg::hyperplane_normal(&vs, dim, TOL) else {
                return;
            };
            let dots: Vec<f64> = units.iter().map(|r| r.dot(&w)).collect();
            let normal = if dots.iter().all(|&d| d <= TOL) {
                w
            } else if dots.iter().all(|&d| d >= -TOL) {
                -w
            } else {
                return;
            };
            if !facet_normals.iter().any(|f| (f - &normal).norm() < 1e-7) {
                facet_normals.push(normal);
            }
        });
        if facet_normals.is_empty() || linalg::rank(&facet_normals, dim, TOL) < dim {
            return Err(Error::NotPointed);
        }

        // Keep only extreme rays: those lying on facets whose normals span a
        // hyperplane.
        let mut extreme = Vec::new();
        let mut ray_facets = Vec::new();
        for r in &units {
            let on: Vec<usize> = (0..facet_normals.len()).filter(|&k| r.dot(&facet_normals[k]).abs() <= TOL).collect();
            let normals: Vec<Vector> = on.iter().map(|&k| facet_normals[k].clone()).collect();
            if linalg::rank(&normals, dim, TOL) == dim - 1 {
                extreme.push(r.clone());
                ray_facets.push(on);
            }
        }

        let axis = match axis {
            Some(a) => {
                let norm = a.norm();
                if a.len() != dim || !(norm > 0.0) {
                    return Err(Error::InvalidInput("axis has wrong dimension or is zero".into()));
                }
                a / norm
            }
            None => {
                let mut s = Vector::zeros(dim);
                for r in &extreme {
                    s += r;
                }
                s.normalize()
            }
        };
        let cone = ConeSpec { dim, rays: extreme, facet_normals, ray_facets, axis };
        if cone.rays.iter().any(|r| r.dot(&cone.axis) <= INTERIOR_EPS)
            || cone.facet_normals.iter().any(|w| w.dot(&cone.axis) >= -INTERIOR_EPS)
        {
            return Err(Error::AxisInvalid);
        }
        Ok(cone)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Unit extreme rays of `C`.
    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    /// Outer unit facet normals of `C`.
    pub fn facet_normals(&self) -> &[Vector] {
        &self.facet_normals
    }

    /// Unit extreme rays of the dual cone `C°`.
    pub fn dual_rays(&self) -> &[Vector] {
        &self.facet_normals
    }

    pub fn ray_facets(&self, ray: usize) -> &[usize] {
        &self.ray_facets[ray]
    }

    pub fn axis(&self) -> &Vector {
        &self.axis
    }

    /// `u ∈ Ω_C°`: strictly negative inner product with every extreme ray.
    pub fn in_dual_interior(&self, u: &Vector) -> bool {
        self.rays.iter().all(|r| r.dot(u) < -INTERIOR_EPS)
    }

    /// `v ∈ Ω_C`: strictly negative inner product with every dual ray.
    pub fn in_interior(&self, v: &Vector) -> bool {
        self.facet_normals.iter().all(|w| w.dot(v) < -INTERIOR_EPS)
    }

    /// Vertices of the cross-section `C ∩ H(v, height)`.
    pub fn cross_section(&self, height: f64) -> Vec<Vector> {
        self.rays.iter().map(|r| r * (height / r.dot(&self.axis))).collect()
    }

    /// Diameter of `C ∩ H(v, 1)`.
    pub fn cross_section_diameter(&self) -> f64 {
        linalg::diameter(&self.cross_section(1.0))
    }

    /// `(n-1)`-volume of `C ∩ H(v, 1)`.
    pub fn cross_section_volume(&self) -> f64 {
        polytope_volume(&self.cross_section(1.0), self.dim - 1)
    }

    /// Largest angle between the axis and an extreme ray.
    pub fn aperture(&self) -> f64 {
        self.rays.iter().map(|r| r.dot(&self.axis).clamp(-1.0, 1.0).acos()).fold(0.0, f64::max)
    }

    /// Spherical distance of `u ∈ Ω_{C°}` from `∂Ω_{C°}`. The facets of `C°`
    /// have the extreme rays of `C` as normals, and for a convex spherical
    /// region the nearest boundary point lies on the nearest great sphere.
    pub fn boundary_distance(&self, u: &Vector) -> f64 {
        let u = u / u.norm();
        self.rays.iter().map(|r| (-r.dot(&u)).clamp(-1.0, 1.0).asin()).fold(f64::INFINITY, f64::min)
    }

    pub fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "vector has dimension {} but the cone has dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok(())
    }
}

/// The orthant spanned by the standard basis of ℝⁿ.
pub fn orthant(dim: usize) -> ConeSpec {
    let rays: Vec<Vector> = (0..dim).map(|i| Vector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 })).collect();
    ConeSpec::new(&rays).expect("the orthant is a valid cone")
}

/// Regular polygonal cone in ℝ³ with `sides` rays at the given elevation of
/// the cross-section plane above the origin.
pub fn polygonal_cone(sides: usize, height: f64) -> Result<ConeSpec> {
    let rays: Vec<Vector> = (0..sides)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / sides as f64;
            linalg::vector(&[a.cos(), a.sin(), height])
        })
        .collect();
    ConeSpec::new(&rays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn quadrant() {
        let c = ConeSpec::new(&[vector(&[1.0, 0.0]), vector(&[0.0, 1.0])]).unwrap();
        assert_eq!(c.rays().len(), 2);
        let mut duals: Vec<Vec<f64>> = c.dual_rays().iter().map(|w| w.as_slice().to_vec()).collect();
        duals.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert!((duals[0][0] + 1.0).abs() < 1e-12 && duals[0][1].abs() < 1e-12);
        assert!((duals[1][1] + 1.0).abs() < 1e-12 && duals[1][0].abs() < 1e-12);
        assert!((c.axis()[0] - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((c.axis()[1] - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn octant() {
        let c = orthant(3);
        assert_eq!(c.facet_normals().len(), 3);
        let s = 1.0 / 3f64.sqrt();
        for k in 0..3 {
            assert!((c.axis()[k] - s).abs() < 1e-12);
        }
        for r in c.rays() {
            for w in c.dual_rays() {
                assert!(r.dot(w) <= 1e-12);
            }
        }
    }

    #[test]
    fn line_is_not_pointed() {
        let err = ConeSpec::new(&[vector(&[1.0, 0.0]), vector(&[-1.0, 0.0]), vector(&[0.0, 1.0])]).unwrap_err();
        assert_eq!(err, Error::NotPointed);
    }

    #[test]
    fn rank_deficient() {
        let err = ConeSpec::new(&[vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0])]).unwrap_err();
        assert_eq!(err, Error::NotFullDimensional { rank: 2, dim: 3 });
    }

    #[test]
    fn redundant_rays_are_dropped() {
        let c = ConeSpec::new(&[vector(&[1.0, 0.0]), vector(&[1.0, 1.0]), vector(&[0.0, 2.0])]).unwrap();
        assert_eq!(c.rays().len(), 2);
    }

    #[test]
    fn explicit_axis_is_validated() {
        let rays = [vector(&[1.0, 0.0]), vector(&[0.0, 1.0])];
        assert!(ConeSpec::with_axis(&rays, &vector(&[1.0, 2.0])).is_ok());
        assert_eq!(ConeSpec::with_axis(&rays, &vector(&[1.0, 0.0])).unwrap_err(), Error::AxisInvalid);
    }

    #[test]
    fn wide_cone_rejects_default_axis() {
        // Rays 170° apart: the ray sum is short but still interior; an axis
        // outside C is rejected.
        let a = 5f64.to_radians();
        let rays = [vector(&[a.cos(), a.sin()]), vector(&[-a.cos(), a.sin()])];
        let c = ConeSpec::new(&rays).unwrap();
        assert!((c.axis()[1] - 1.0).abs() < 1e-12);
        assert!(ConeSpec::with_axis(&rays, &vector(&[1.0, -0.1])).is_err());
    }

    #[test]
    fn pentagonal_cone_has_five_facets() {
        let c = polygonal_cone(5, 1.0).unwrap();
        assert_eq!(c.rays().len(), 5);
        assert_eq!(c.facet_normals().len(), 5);
        for j in 0..5 {
            assert_eq!(c.ray_facets(j).len(), 2);
        }
        assert!((c.axis()[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadrant_cross_section() {
        let c = orthant(2);
        assert!((c.cross_section_diameter() - 2.0).abs() < 1e-12);
        assert!((c.cross_section_volume() - 2.0).abs() < 1e-12);
        assert!((c.aperture() - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn interior_membership() {
        let c = orthant(2);
        assert!(c.in_dual_interior(&vector(&[-FRAC_1_SQRT_2, -FRAC_1_SQRT_2])));
        assert!(!c.in_dual_interior(&vector(&[-1.0, 0.0])));
        assert!(c.in_interior(&vector(&[0.6, 0.8])));
        assert!(!c.in_interior(&vector(&[1.0, 0.0])));
    }
}
