//! Growth bounds for cone-volume measures near the boundary of `Ω_{C°}`.
//!
//! For a direction set `ω` at spherical distance `Δ(ω)` from `∂Ω_{C°}` the
//! unweighted cone-volume measure satisfies `V_K(ω) ≤ c₆ t_ω^{n-1}` with the
//! confinement height `t_ω ≤ c₁ s(K)/Δ(ω)`. This module computes every
//! constant explicitly and audits the inequalities on concrete bodies.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig12;
use crate::geometry::cone::ConeSpec;
use crate::geometry::pseudo_cone::PseudoCone;
use crate::linalg::Vector;
use crate::measures::unweighted_measures;

/// Grid size for the numerical maximization defining `c₅`.
const C5_GRID: usize = 10_000;

/// Tolerance for matching audit directions with facet normals.
const MATCH_TOL: f64 = 1e-9;

/// `Δ(ω)`: the least spherical distance from a direction in `ω` to `∂Ω_{C°}`.
pub fn boundary_distance(cone: &ConeSpec, omega: &[Vector]) -> Result<f64> {
    if omega.is_empty() {
        return Err(Error::EmptyOmega);
    }
    let mut delta = f64::INFINITY;
    for (i, u) in omega.iter().enumerate() {
        cone.check_dim(u)?;
        if !cone.in_dual_interior(u) {
            return Err(Error::DirectionOnBoundary { index: i });
        }
        delta = delta.min(cone.boundary_distance(u));
    }
    Ok(delta)
}

/// Constants that depend on the cone and axis only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeConstants {
    /// `c₁ = 2c₂/π + π/2`.
    #[serde(serialize_with = "sig12")]
    pub c1: f64,
    /// `c₂ = diam(C ∩ H(𝔳, 1))`.
    #[serde(serialize_with = "sig12")]
    pub c2: f64,
    /// `c₄ = H^{n-1}(C ∩ H(𝔳, 1))`.
    #[serde(serialize_with = "sig12")]
    pub c4: f64,
}

impl ConeConstants {
    pub fn new(cone: &ConeSpec) -> Self {
        let c2 = cone.cross_section_diameter();
        ConeConstants { c1: 2.0 * c2 / PI + PI / 2.0, c2, c4: cone.cross_section_volume() }
    }
}

/// The confinement height `t_ω` and its certified upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Confinement {
    #[serde(serialize_with = "sig12")]
    pub t_omega: f64,
    #[serde(serialize_with = "sig12")]
    pub delta: f64,
    /// `c₁ s / Δ(ω)`.
    #[serde(serialize_with = "sig12")]
    pub certified: f64,
    pub holds: bool,
}

/// Largest `𝔳`-height of the slices `C ∩ H(u, τ)` with `u ∈ ω` that meet
/// `C⁻(s)`.
///
/// For each `u` the deepest such slice has `τ = s·min_r ⟨r,u⟩/⟨r,𝔳⟩` over the
/// extreme rays, and its vertices lie on the rays at height
/// `τ⟨r,𝔳⟩/⟨r,u⟩`.
pub fn confinement_height(cone: &ConeSpec, s: f64, omega: &[Vector]) -> Result<Confinement> {
    if !(s > 0.0) {
        return Err(Error::InvalidInput(format!("height must be positive, got {s}")));
    }
    let delta = boundary_distance(cone, omega)?;
    let axis = cone.axis();
    let mut t_omega: f64 = 0.0;
    for u in omega {
        let u = u / u.norm();
        let tau = cone.rays().iter().map(|r| s * r.dot(&u) / r.dot(axis)).fold(f64::INFINITY, f64::min);
        for r in cone.rays() {
            t_omega = t_omega.max(tau * r.dot(axis) / r.dot(&u));
        }
    }
    let certified = ConeConstants::new(cone).c1 * s / delta;
    Ok(Confinement { t_omega, delta, certified, holds: t_omega <= certified * (1.0 + 1e-12) })
}

/// `max_{τ∈[s,t]} (τ^{n-1} - (τ-s)^{n-1}) / τ^{n-2}` on a uniform grid.
pub fn c5(dim: usize, s: f64, t: f64) -> f64 {
    let k = (dim - 1) as i32;
    let g = |tau: f64| (tau.powi(k) - (tau - s).powi(k)) / tau.powi(k - 1);
    let t = t.max(s);
    (0..=C5_GRID).map(|j| g(s + (t - s) * j as f64 / C5_GRID as f64)).fold(0.0, f64::max)
}

/// Result of auditing `V_K(ω) ≤ c₆ t_ω^{n-1}` on a concrete body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundAudit {
    /// Atoms of `K` whose normals lie in `ω`.
    pub atoms: Vec<usize>,
    #[serde(serialize_with = "sig12")]
    pub delta: f64,
    #[serde(serialize_with = "sig12")]
    pub s: f64,
    #[serde(serialize_with = "sig12")]
    pub t_omega: f64,
    /// `c₁ s / Δ`, the certified bound on `t_ω`.
    #[serde(serialize_with = "sig12")]
    pub t_certified: f64,
    #[serde(serialize_with = "sig12")]
    pub c1: f64,
    #[serde(serialize_with = "sig12")]
    pub c2: f64,
    #[serde(serialize_with = "sig12")]
    pub c3: f64,
    #[serde(serialize_with = "sig12")]
    pub c4: f64,
    #[serde(serialize_with = "sig12")]
    pub c5: f64,
    #[serde(serialize_with = "sig12")]
    pub c6: f64,
    /// `c₆ t_ω^{n-1}`.
    #[serde(serialize_with = "sig12")]
    pub bound: f64,
    /// `V_K(ω)`.
    #[serde(serialize_with = "sig12")]
    pub measured: f64,
    /// `V_K(ω) Δ^{n-1}`.
    #[serde(serialize_with = "sig12")]
    pub scaled_measured: f64,
    /// `c₆ c₁^{n-1} s^{n-1}`.
    #[serde(serialize_with = "sig12")]
    pub scaled_bound: f64,
    /// `bound - measured`.
    #[serde(serialize_with = "sig12")]
    pub slack: f64,
    pub pass: bool,
}

/// Audit for the atoms of `K` with the given indices.
pub fn cone_volume_growth_audit(k: &PseudoCone, omega: &[usize]) -> Result<BoundAudit> {
    let mut directions = Vec::with_capacity(omega.len());
    for &i in omega {
        let u = k.normals().get(i).ok_or_else(|| Error::InvalidInput(format!("atom index {i} out of range")))?;
        directions.push(u.clone());
    }
    cone_volume_growth_audit_directions(k, &directions)
}

/// Audit for an arbitrary direction set `ω`. Only atoms of `K` contribute to
/// `V_K(ω)`; other directions only shrink `Δ(ω)`.
pub fn cone_volume_growth_audit_directions(k: &PseudoCone, omega: &[Vector]) -> Result<BoundAudit> {
    let cone = k.cone();
    let n = k.dim();
    let s = k.min_height();
    let conf = confinement_height(cone, s, omega)?;
    let consts = ConeConstants::new(cone);

    let atoms: Vec<usize> =
        (0..k.len()).filter(|&i| omega.iter().any(|u| (u / u.norm() - &k.normals()[i]).norm() <= MATCH_TOL)).collect();
    let mut measured = 0.0;
    for &i in &atoms {
        if k.is_active(i) {
            measured += unweighted_measures(k, i)?.1;
        }
    }

    let c3 = consts.c4 / n as f64 * s;
    let c5 = c5(n, s, conf.t_omega);
    let c6 = c3 + consts.c4 * c5 / (n - 1) as f64;
    let e = (n - 1) as i32;
    let bound = c6 * conf.t_omega.powi(e);
    let scaled_measured = measured * conf.delta.powi(e);
    let scaled_bound = c6 * (consts.c1 * s).powi(e);
    let pass = measured <= bound * (1.0 + 1e-9) && scaled_measured <= scaled_bound * (1.0 + 1e-9) && conf.holds;
    Ok(BoundAudit {
        atoms,
        delta: conf.delta,
        s,
        t_omega: conf.t_omega,
        t_certified: conf.certified,
        c1: consts.c1,
        c2: consts.c2,
        c3,
        c4: consts.c4,
        c5,
        c6,
        bound,
        measured,
        scaled_measured,
        scaled_bound,
        slack: bound - measured,
        pass,
    })
}

/// Directions `u(φ) = cos φ · a - sin φ · r` approaching the facet of `C°`
/// with normal `r` (the extreme ray of `C` with index `ray`), where `a` is the
/// normalized sum of the dual rays on that facet. For small `φ`,
/// `Δ(u(φ)) = φ`. Returns `u(φ₀ 2^{-k})` for `k = 0..levels`.
pub fn boundary_approach(cone: &ConeSpec, ray: usize, phi0: f64, levels: usize) -> Result<Vec<Vector>> {
    let r = cone.rays().get(ray).ok_or_else(|| Error::InvalidInput(format!("ray index {ray} out of range")))?;
    let mut a = Vector::zeros(cone.dim());
    for w in cone.dual_rays() {
        if w.dot(r).abs() <= 1e-9 {
            a += w;
        }
    }
    let a = a.normalize();
    Ok((0..levels)
        .map(|k| {
            let phi = phi0 / 2f64.powi(k as i32);
            &a * phi.cos() - r * phi.sin()
        })
        .collect())
}

/// The containment radius `b(K)/sin Δ(ω)` and the largest facet-vertex norm
/// over the atoms in `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    #[serde(serialize_with = "sig12")]
    pub radius: f64,
    #[serde(serialize_with = "sig12")]
    pub max_vertex_norm: f64,
    pub holds: bool,
}

pub fn containment_radius(k: &PseudoCone, omega: &[usize]) -> Result<Containment> {
    let mut directions = Vec::new();
    for &i in omega {
        let u = k.normals().get(i).ok_or_else(|| Error::InvalidInput(format!("atom index {i} out of range")))?;
        directions.push(u.clone());
    }
    let delta = boundary_distance(k.cone(), &directions)?;
    let radius = k.origin_distance() / delta.sin();
    let mut max_vertex_norm: f64 = 0.0;
    for &i in omega {
        if let Ok(f) = k.facet_vertices(i) {
            for x in f {
                max_vertex_norm = max_vertex_norm.max(x.norm());
            }
        }
    }
    Ok(Containment { radius, max_vertex_norm, holds: max_vertex_norm <= radius + 1e-9 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cone::orthant;
    use crate::linalg::vector;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, SQRT_2};

    fn tilted() -> Vector {
        vector(&[-FRAC_PI_8.cos(), -FRAC_PI_8.sin()])
    }

    #[test]
    fn distances_in_quadrant() {
        let c = orthant(2);
        assert!((boundary_distance(&c, &[-c.axis().clone()]).unwrap() - FRAC_PI_4).abs() < 1e-12);
        assert!((boundary_distance(&c, &[tilted()]).unwrap() - FRAC_PI_8).abs() < 1e-12);
        assert_eq!(boundary_distance(&c, &[]).unwrap_err(), Error::EmptyOmega);
        assert_eq!(
            boundary_distance(&c, &[vector(&[-1.0, 0.0])]).unwrap_err(),
            Error::DirectionOnBoundary { index: 0 }
        );
    }

    #[test]
    fn confinement_in_quadrant() {
        let c = orthant(2);
        let t = confinement_height(&c, 1.0, &[-c.axis().clone()]).unwrap();
        assert!((t.t_omega - 1.0).abs() < 1e-12);
        let t = confinement_height(&c, 1.0, &[tilted()]).unwrap();
        assert!((t.t_omega - (1.0 + SQRT_2)).abs() < 1e-12);
        assert!(t.holds);
        let t2 = confinement_height(&c, 2.0, &[tilted()]).unwrap();
        assert!((t2.t_omega - 2.0 * t.t_omega).abs() < 1e-12);
    }

    #[test]
    fn audit_single_facet() {
        let c = orthant(2);
        let k = PseudoCone::wulff(&c, &[-c.axis().clone()], &[1.0]).unwrap();
        let a = cone_volume_growth_audit(&k, &[0]).unwrap();
        assert!((a.measured - 1.0).abs() < 1e-12);
        assert!(a.bound >= 1.0 && a.pass);
        assert_eq!(cone_volume_growth_audit(&k, &[]).unwrap_err(), Error::EmptyOmega);
    }

    #[test]
    fn c5_in_the_plane_is_s() {
        assert!((c5(2, 0.7, 3.0) - 0.7).abs() < 1e-15);
        // n = 3: (τ² - (τ-s)²)/τ = 2s - s²/τ, maximal at τ = t.
        assert!((c5(3, 1.0, 4.0) - 1.75).abs() < 1e-12);
    }

    #[test]
    fn approach_family_has_halving_distance() {
        let c = orthant(3);
        let us = boundary_approach(&c, 0, 0.2, 5).unwrap();
        for (k, u) in us.iter().enumerate() {
            let d = boundary_distance(&c, &[u.clone()]).unwrap();
            assert!((d - 0.2 / 2f64.powi(k as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn containment_is_tight_for_symmetric_cut() {
        let c = orthant(2);
        let k = PseudoCone::wulff(&c, &[-c.axis().clone()], &[1.0]).unwrap();
        let r = containment_radius(&k, &[0]).unwrap();
        assert!((r.radius - SQRT_2).abs() < 1e-12);
        assert!((r.max_vertex_norm - SQRT_2).abs() < 1e-12);
        assert!(r.holds);
    }
}
