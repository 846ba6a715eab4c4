//! Weighted and unweighted surface-area and cone-volume measures of
//! polyhedral pseudo-cones.
//!
//! Three routes compute the weighted cone-volume of a facet `F_i`:
//!
//! * **facet**: `V^Θ_i = h̄_i S^Θ_i / (n - q)` with `S^Θ_i = ∫_{F_i} Θ`;
//! * **radial**: `(n - q)^{-1} ∫ Θ(v) ϱ_K(v)^{n-q}` over the directions whose
//!   radial Gauss image is `u_i`;
//! * **mc**: a direct Monte Carlo estimate of `∫ Θ` over the cone `[o, F_i]`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{sig12, sig12_opt, sig12_vec};
use crate::geometry::pseudo_cone::PseudoCone;
use crate::geometry::simplicial::polytope_volume;
use crate::linalg::Vector;
use crate::quadrature::{
    integrate_facet, mc_cone_region, spherical_region_integral_with, QuadratureResult, QuadratureSettings,
    WeightDensity,
};

/// How a cone-volume value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Facet,
    Radial,
    Mc,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Facet => "facet",
            Route::Radial => "radial",
            Route::Mc => "mc",
        })
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "facet" => Ok(Route::Facet),
            "radial" => Ok(Route::Radial),
            "mc" => Ok(Route::Mc),
            other => Err(Error::InvalidInput(format!("unknown route {other:?}"))),
        }
    }
}

fn check_density(k: &PseudoCone, density: &WeightDensity) -> Result<()> {
    if density.dim() != k.dim() {
        return Err(Error::InvalidInput(format!(
            "density is for dimension {} but the body has dimension {}",
            density.dim(),
            k.dim()
        )));
    }
    Ok(())
}

/// `S^Θ_{n-1}(K, {u_i}) = ∫_{F_i} Θ dH^{n-1}`, zero for inactive `i`.
pub fn weighted_surface_area(k: &PseudoCone, density: &WeightDensity, i: usize, tol: f64) -> Result<QuadratureResult> {
    check_density(k, density)?;
    match k.facet_vertices(i) {
        Ok(facet) => integrate_facet(density, &facet, tol),
        Err(Error::InactiveConstraint { .. }) => Ok(QuadratureResult::zero()),
        Err(e) => Err(e),
    }
}

/// `V^Θ_K({u_i}) = h̄_i S^Θ_i / (n - q)`.
pub fn weighted_cone_volume(k: &PseudoCone, density: &WeightDensity, i: usize, tol: f64) -> Result<QuadratureResult> {
    let s = weighted_surface_area(k, density, i, tol)?;
    Ok(s.scaled(k.support_magnitudes()[i] / density.degree()))
}

/// Weighted surface areas of all facets, in index order.
pub fn weighted_surface_areas(k: &PseudoCone, density: &WeightDensity, tol: f64) -> Result<Vec<QuadratureResult>> {
    (0..k.len()).into_par_iter().map(|i| weighted_surface_area(k, density, i, tol)).collect()
}

/// Weighted cone-volumes of all facets, in index order.
pub fn weighted_cone_volumes(k: &PseudoCone, density: &WeightDensity, tol: f64) -> Result<Vec<QuadratureResult>> {
    let h = k.support_magnitudes();
    let s = weighted_surface_areas(k, density, tol)?;
    Ok(s.into_iter().enumerate().map(|(i, r)| r.scaled(h[i] / density.degree())).collect())
}

/// `V_Θ(K) = ∫_{C∖K} Θ`, the sum of the facet cone-volumes.
pub fn weighted_covolume(k: &PseudoCone, density: &WeightDensity, tol: f64) -> Result<QuadratureResult> {
    let parts = weighted_cone_volumes(k, density, tol)?;
    Ok(sum(&parts))
}

pub(crate) fn sum(parts: &[QuadratureResult]) -> QuadratureResult {
    parts.iter().fold(QuadratureResult::zero(), |a, b| QuadratureResult {
        value: a.value + b.value,
        error_estimate: a.error_estimate + b.error_estimate,
        evaluations: a.evaluations + b.evaluations,
    })
}

/// Directions of the bounded vertices, where the radial integrand has kinks.
fn kinks(k: &PseudoCone) -> Vec<Vector> {
    k.body_vertices().into_iter().map(|x| x.normalize()).collect()
}

/// `(n - q)^{-1} ∫_{α_K^{-1}(ω)} Θ(v) ϱ_K(v)^{n-q} dv` for the atoms `ω`.
/// Deterministic in the plane, Monte Carlo otherwise.
pub fn weighted_cone_volume_radial(
    k: &PseudoCone,
    density: &WeightDensity,
    omega: &[usize],
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    check_density(k, density)?;
    if omega.is_empty() {
        return Ok(QuadratureResult::zero());
    }
    let mut member = vec![false; k.len()];
    for &i in omega {
        *member.get_mut(i).ok_or_else(|| Error::InvalidInput(format!("atom index {i} out of range")))? = true;
    }
    let deg = density.degree();
    let g = |v: &Vector| {
        let (rho, i) = k.radial_unchecked(v);
        if member[i] {
            density.psi(v) * rho.powf(deg) / deg
        } else {
            0.0
        }
    };
    spherical_region_integral_with(k.cone(), &g, settings, &kinks(k))
}

/// `∫ g(α_K(v)) Θ(r_K(v)) ϱ_K(v)^{n-1} / |⟨v, α_K(v)⟩| dv` with `g` given on
/// the atoms; equals `Σ_i g_i S^Θ_i`.
pub fn weighted_surface_area_radial(
    k: &PseudoCone,
    density: &WeightDensity,
    g: &[f64],
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    check_density(k, density)?;
    if g.len() != k.len() {
        return Err(Error::InvalidInput("one test value per atom is required".into()));
    }
    let n1 = (k.dim() - 1) as i32;
    let integrand = |v: &Vector| {
        let (rho, i) = k.radial_unchecked(v);
        let u = &k.normals()[i];
        g[i] * density.eval(&(v * rho)) * rho.powi(n1) / v.dot(u).abs()
    };
    spherical_region_integral_with(k.cone(), &integrand, settings, &kinks(k))
}

/// Monte Carlo estimate of `∫ Θ` over the cone `[o, F_i]`; zero for inactive
/// `i`.
pub fn weighted_cone_volume_mc(
    k: &PseudoCone,
    density: &WeightDensity,
    i: usize,
    samples: usize,
    seed: u64,
) -> Result<QuadratureResult> {
    check_density(k, density)?;
    match k.facet_vertices(i) {
        Ok(facet) => mc_cone_region(density, &[facet], samples, seed),
        Err(Error::InactiveConstraint { .. }) => Ok(QuadratureResult::zero()),
        Err(e) => Err(e),
    }
}

/// `(S_i, V_i)`: the facet area `H^{n-1}(F_i)` and `h̄_i S_i / n`.
pub fn unweighted_measures(k: &PseudoCone, i: usize) -> Result<(f64, f64)> {
    let facet = k.facet_vertices(i)?;
    let s = polytope_volume(&facet, k.dim() - 1);
    Ok((s, k.support_magnitudes()[i] * s / k.dim() as f64))
}

/// A value from a secondary route and its difference from the facet route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteValue {
    #[serde(serialize_with = "sig12")]
    pub value: f64,
    #[serde(serialize_with = "sig12")]
    pub error_estimate: f64,
    /// `value - facet value`.
    #[serde(serialize_with = "sig12")]
    pub delta: f64,
}

/// Per-atom entry of a [`MeasureReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetMeasure {
    pub index: usize,
    #[serde(serialize_with = "sig12_vec")]
    pub normal: Vec<f64>,
    #[serde(serialize_with = "sig12")]
    pub support: f64,
    pub active: bool,
    #[serde(serialize_with = "sig12")]
    pub weighted_surface_area: f64,
    #[serde(serialize_with = "sig12")]
    pub weighted_surface_area_error: f64,
    #[serde(serialize_with = "sig12")]
    pub weighted_cone_volume: f64,
    #[serde(serialize_with = "sig12")]
    pub weighted_cone_volume_error: f64,
    #[serde(serialize_with = "sig12")]
    pub surface_area: f64,
    #[serde(serialize_with = "sig12")]
    pub cone_volume: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial: Option<RouteValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<RouteValue>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "sig12_opt")]
    pub target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", serialize_with = "sig12_opt")]
    pub residual: Option<f64>,
}

/// Measures of every atom of a pseudo-cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub dim: usize,
    #[serde(serialize_with = "sig12")]
    pub q: f64,
    pub routes: Vec<Route>,
    pub facets: Vec<FacetMeasure>,
    #[serde(serialize_with = "sig12")]
    pub weighted_covolume: f64,
    #[serde(serialize_with = "sig12")]
    pub weighted_covolume_error: f64,
    #[serde(serialize_with = "sig12")]
    pub covolume: f64,
    #[serde(serialize_with = "sig12")]
    pub origin_distance: f64,
    #[serde(serialize_with = "sig12")]
    pub min_height: f64,
}

impl MeasureReport {
    /// Attaches target masses and their residuals `V^Θ_i - φ_i`.
    pub fn with_target(mut self, masses: &[f64]) -> Self {
        for (f, &m) in self.facets.iter_mut().zip(masses) {
            f.target = Some(m);
            f.residual = Some(f.weighted_cone_volume - m);
        }
        self
    }

    pub fn max_abs_residual(&self) -> Option<f64> {
        self.facets.iter().map(|f| f.residual.map(f64::abs)).try_fold(0.0, |a: f64, r| r.map(|r| a.max(r)))
    }
}

/// Evaluates every atom by the facet route and any extra `routes`.
pub fn evaluate(
    k: &PseudoCone,
    density: &WeightDensity,
    settings: &QuadratureSettings,
    routes: &[Route],
) -> Result<MeasureReport> {
    let s = weighted_surface_areas(k, density, settings.tol)?;
    let deg = density.degree();
    let h = k.support_magnitudes();
    let want = |r: Route| routes.contains(&r);
    let mut facets = Vec::with_capacity(k.len());
    for i in 0..k.len() {
        let active = k.is_active(i);
        let v = s[i].scaled(h[i] / deg);
        let (area, cone_volume) = if active { unweighted_measures(k, i)? } else { (0.0, 0.0) };
        let route_value = |r: QuadratureResult| RouteValue {
            value: r.value,
            error_estimate: r.error_estimate,
            delta: r.value - v.value,
        };
        let radial = if want(Route::Radial) {
            Some(route_value(weighted_cone_volume_radial(k, density, &[i], settings)?))
        } else {
            None
        };
        let mc = if want(Route::Mc) {
            let seed = settings.seed.wrapping_add(i as u64);
            Some(route_value(weighted_cone_volume_mc(k, density, i, settings.samples, seed)?))
        } else {
            None
        };
        facets.push(FacetMeasure {
            index: i,
            normal: k.normals()[i].iter().cloned().collect(),
            support: h[i],
            active,
            weighted_surface_area: s[i].value,
            weighted_surface_area_error: s[i].error_estimate,
            weighted_cone_volume: v.value,
            weighted_cone_volume_error: v.error_estimate,
            surface_area: area,
            cone_volume,
            radial,
            mc,
            target: None,
            residual: None,
        });
    }
    let mut used = vec![Route::Facet];
    used.extend(routes.iter().filter(|r| **r != Route::Facet));
    used.sort();
    used.dedup();
    Ok(MeasureReport {
        dim: k.dim(),
        q: density.q(),
        routes: used,
        weighted_covolume: facets.iter().map(|f| f.weighted_cone_volume).sum(),
        weighted_covolume_error: facets.iter().map(|f| f.weighted_cone_volume_error).sum(),
        covolume: facets.iter().map(|f| f.cone_volume).sum(),
        origin_distance: k.origin_distance(),
        min_height: k.min_height(),
        facets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cone::orthant;
    use crate::linalg::vector;
    use std::f64::consts::{FRAC_PI_8, SQRT_2};

    fn example() -> PseudoCone {
        let c = orthant(2);
        PseudoCone::wulff(&c, &[-c.axis().clone()], &[1.0]).unwrap()
    }

    #[test]
    fn unweighted_triangle() {
        let (s, v) = unweighted_measures(&example(), 0).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_and_radial_agree() {
        let k = example();
        let d = WeightDensity::constant(2, 1.5).unwrap();
        let facet = weighted_cone_volume(&k, &d, 0, 1e-10).unwrap();
        let radial = weighted_cone_volume_radial(&k, &d, &[0], &QuadratureSettings::default()).unwrap();
        assert!((facet.value - radial.value).abs() < 1e-8 * facet.value);
        assert_eq!(weighted_cone_volume_radial(&k, &d, &[], &QuadratureSettings::default()).unwrap().value, 0.0);
    }

    #[test]
    fn inactive_atom_has_zero_measure() {
        let c = orthant(2);
        let u = vector(&[-FRAC_PI_8.cos(), -FRAC_PI_8.sin()]);
        let k = PseudoCone::wulff(&c, &[-c.axis().clone(), u], &[1.0, 0.5]).unwrap();
        let d = WeightDensity::constant(2, 1.5).unwrap();
        assert_eq!(weighted_surface_area(&k, &d, 1, 1e-8).unwrap().value, 0.0);
        let report = evaluate(&k, &d, &QuadratureSettings::default(), &[]).unwrap();
        assert!(!report.facets[1].active);
        assert_eq!(report.facets[1].cone_volume, 0.0);
        assert!((report.facets[0].surface_area - 2.0).abs() < 1e-12);
        assert!(report.facets[0].support - 1.0 < 1e-15);
        assert!((report.facets[1].support - SQRT_2 * FRAC_PI_8.sin()).abs() < 1e-12);
    }

    #[test]
    fn route_names() {
        assert_eq!("mc".parse::<Route>().unwrap(), Route::Mc);
        assert!("simpson".parse::<Route>().is_err());
        assert_eq!(Route::Radial.to_string(), "radial");
    }
}
