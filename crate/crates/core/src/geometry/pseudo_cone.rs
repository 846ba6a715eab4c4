use crate::error::{Error, Result};
use crate::geometry::cone::{ConeSpec, TOL};
use crate::geometry::min_norm::min_norm_point;
use crate::geometry::truncation::{intersect, FacetKind, TruncationPolytope};
use crate::linalg::Vector;

/// Margin applied to the containment radius `b(K)/sin Δ(ϖ)` when choosing
/// the stored truncation height.
pub const HEIGHT_MARGIN: f64 = 1.1;

/// A polyhedral C-pseudo-cone `K = C ∩ ⋂ {y : ⟨y, u_i⟩ ≤ -f_i}`.
///
/// Construction computes the truncation `K ∩ C⁻(t)` once, at a height `t`
/// large enough that every bounded face of `K` lies strictly below the cap.
/// All later queries read from that cache.
#[derive(Debug, Clone)]
pub struct PseudoCone {
    cone: ConeSpec,
    normals: Vec<Vector>,
    values: Vec<f64>,
    support: Vec<f64>,
    active: Vec<bool>,
    truncation: TruncationPolytope,
    origin_distance: f64,
    min_height: f64,
    boundary_distance: f64,
}

impl PseudoCone {
    /// The Wulff shape `[f]` of `values` over the directions `normals`.
    pub fn wulff(cone: &ConeSpec, normals: &[Vector], values: &[f64]) -> Result<Self> {
        if normals.is_empty() {
            return Err(Error::InvalidInput("at least one normal is required".into()));
        }
        if normals.len() != values.len() {
            return Err(Error::InvalidInput(format!("{} normals but {} support values", normals.len(), values.len())));
        }
        for (i, (u, &f)) in normals.iter().zip(values).enumerate() {
            cone.check_dim(u)?;
            let norm = u.norm();
            if (norm - 1.0).abs() > TOL {
                return Err(Error::NotUnit { index: i, norm });
            }
            if !cone.in_dual_interior(u) {
                return Err(Error::NormalOutsideDomain { index: i });
            }
            if !(f > 0.0 && f.is_finite()) {
                return Err(Error::NonpositiveValue { index: i, value: f });
            }
        }

        // Every vertex of K lies on some plane ⟨y,u_i⟩ = -f_i inside C, whose
        // highest point is on an extreme ray.
        let axis = cone.axis();
        let mut top: f64 = 0.0;
        for (u, &f) in normals.iter().zip(values) {
            for r in cone.rays() {
                top = top.max(f * r.dot(axis) / -r.dot(u));
            }
        }
        let probe = intersect(cone, normals, values, HEIGHT_MARGIN * top)?;
        let origin_distance = min_norm_point(&probe.vertices).norm();
        let boundary_distance = normals.iter().map(|u| cone.boundary_distance(u)).fold(f64::INFINITY, f64::min);
        let radius = origin_distance / boundary_distance.sin();
        let height = HEIGHT_MARGIN * radius;

        let truncation = intersect(cone, normals, values, height)?;
        let k = Self::from_truncation(cone, normals, values, truncation, origin_distance, boundary_distance);
        for x in k.body_vertices() {
            if x.norm() > radius * (1.0 + TOL) + TOL {
                return Err(Error::ContainmentViolation { norm: x.norm(), radius });
            }
        }
        Ok(k)
    }

    fn from_truncation(
        cone: &ConeSpec,
        normals: &[Vector],
        values: &[f64],
        truncation: TruncationPolytope,
        origin_distance: f64,
        boundary_distance: f64,
    ) -> Self {
        let active: Vec<bool> =
            (0..normals.len()).map(|i| truncation.facet(FacetKind::Constraint(i)).is_some()).collect();
        let support: Vec<f64> = normals
            .iter()
            .zip(values)
            .zip(&active)
            .map(|((u, &f), &a)| if a { f } else { support_over(&truncation.vertices, u) })
            .collect();
        let min_height = truncation.vertices.iter().map(|x| x.dot(cone.axis())).fold(f64::INFINITY, f64::min);
        PseudoCone {
            cone: cone.clone(),
            normals: normals.to_vec(),
            values: values.to_vec(),
            support,
            active,
            truncation,
            origin_distance,
            min_height,
            boundary_distance,
        }
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    /// The values `f_i` the shape was built from.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Effective support magnitudes `h̄_K(u_i)`; at least `f_i`, with equality
    /// exactly for active constraints.
    pub fn support_magnitudes(&self) -> &[f64] {
        &self.support
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    /// Cached truncation `K ∩ C⁻(t)` at the stored height.
    pub fn truncation(&self) -> &TruncationPolytope {
        &self.truncation
    }

    pub fn stored_height(&self) -> f64 {
        self.truncation.height
    }

    /// Distance `b(K)` of `K` from the origin.
    pub fn origin_distance(&self) -> f64 {
        self.origin_distance
    }

    /// Least height `s(K) = min ⟨x, v⟩` over `K`.
    pub fn min_height(&self) -> f64 {
        self.min_height
    }

    /// `Δ(ϖ)`, the spherical distance of the normals from `∂Ω_{C°}`.
    pub fn boundary_distance(&self) -> f64 {
        self.boundary_distance
    }

    /// Radius `b(K)/sin Δ(ϖ)` of the ball containing every bounded facet.
    pub fn containment_radius(&self) -> f64 {
        self.origin_distance / self.boundary_distance.sin()
    }

    /// Vertices of the bounded part of the boundary (those below the cap).
    pub fn body_vertices(&self) -> Vec<Vector> {
        self.truncation.body_vertices()
    }

    /// Vertices of the facet `F_i = K ∩ H(u_i, -h̄_i)`.
    pub fn facet_vertices(&self, i: usize) -> Result<Vec<Vector>> {
        self.check_index(i)?;
        let facet = self.truncation.facet(FacetKind::Constraint(i)).ok_or(Error::InactiveConstraint { index: i })?;
        Ok(self.truncation.facet_points(facet))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::InvalidInput(format!("constraint index {i} out of range")));
        }
        Ok(())
    }

    /// `h̄_K(u) = -max_{x∈K} ⟨x, u⟩` for `u ∈ Ω_{C°}`.
    pub fn support_value(&self, u: &Vector) -> Result<f64> {
        self.cone.check_dim(u)?;
        if !self.cone.in_dual_interior(u) {
            return Err(Error::NormalOutsideDomain { index: 0 });
        }
        Ok(support_over(&self.truncation.vertices, u))
    }

    /// `(ϱ_K(v), index of α_K(v))` for `v ∈ Ω_C`. Ties go to the smallest
    /// index.
    pub fn radial(&self, v: &Vector) -> Result<(f64, usize)> {
        self.cone.check_dim(v)?;
        if !self.cone.in_interior(v) {
            return Err(Error::DirectionOutsideOmegaC);
        }
        let v = v / v.norm();
        Ok(self.radial_unchecked(&v))
    }

    /// As [`PseudoCone::radial`] without validation; `v` must be a unit
    /// vector in `Ω_C`.
    pub fn radial_unchecked(&self, v: &Vector) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for (i, u) in self.normals.iter().enumerate() {
            if !self.active[i] {
                continue;
            }
            let t = self.support[i] / -v.dot(u);
            if t > best.0 * (1.0 + 1e-14) || best.1 == usize::MAX {
                best = (t, i);
            }
        }
        best
    }

    /// The radial function `ϱ_K(v)`.
    pub fn radial_function(&self, v: &Vector) -> Result<f64> {
        self.radial(v).map(|(r, _)| r)
    }

    /// The radial Gauss map `α_K(v)`.
    pub fn radial_gauss(&self, v: &Vector) -> Result<Vector> {
        self.radial(v).map(|(_, i)| self.normals[i].clone())
    }

    /// `K ∩ C⁻(t)` for `t > s(K)`.
    pub fn truncate(&self, t: f64) -> Result<TruncationPolytope> {
        if !(t > self.min_height * (1.0 + TOL)) {
            return Err(Error::HeightTooSmall { height: t, min_height: self.min_height });
        }
        intersect(&self.cone, &self.normals, &self.values, t)
    }

    /// `λK`, rescaling the cached data instead of rebuilding.
    pub fn dilate(&self, lambda: f64) -> Self {
        assert!(lambda > 0.0 && lambda.is_finite(), "dilation factor must be positive");
        let mut k = self.clone();
        k.values.iter_mut().for_each(|f| *f *= lambda);
        k.support.iter_mut().for_each(|h| *h *= lambda);
        k.truncation.height *= lambda;
        k.truncation.vertices.iter_mut().for_each(|x| *x *= lambda);
        for facet in &mut k.truncation.facets {
            facet.offset *= lambda;
        }
        k.origin_distance *= lambda;
        k.min_height *= lambda;
        k
    }

    /// Membership test with absolute tolerance `tol`.
    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.cone.facet_normals().iter().all(|w| x.dot(w) <= tol)
            && self.normals.iter().zip(&self.values).all(|(u, f)| x.dot(u) <= -f + tol)
    }
}

fn support_over(vertices: &[Vector], u: &Vector) -> f64 {
    vertices.iter().map(|x| -x.dot(u)).fold(f64::INFINITY, f64::min)
}
