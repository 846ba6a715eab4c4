//! Integrals over the spherical region `Ω_C = S^{n-1} ∩ int C`.
//!
//! In the plane `Ω_C` is an arc and the integral is computed by adaptive
//! Gauss–Kronrod quadrature, split at caller-supplied breakpoints where the
//! integrand has kinks. In higher dimensions it is estimated by Monte Carlo:
//! stratified over the cap around the axis that bounds `Ω_C` when `n = 3`,
//! plain sampling of the whole sphere otherwise.

use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::cone::ConeSpec;
use crate::linalg::Vector;
use crate::quadrature::monte_carlo::{block_rng, gaussian, Accumulator, BLOCK};
use crate::quadrature::{QuadratureResult, QuadratureSettings};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Maximum number of live subintervals in the adaptive 1D rule.
pub const MAX_INTERVALS: usize = 100_000;

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod (7, 15) integral of `f` over `[a, b]`,
/// split first at the sorted `breakpoints` lying strictly inside.
pub fn integrate_interval(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<QuadratureResult> {
    let mut cuts: Vec<f64> = breakpoints.iter().cloned().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    let mut edges = vec![a];
    edges.extend(cuts);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    for w in edges.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk15(&f, w[0], w[1]);
            heap.push(Interval { a: w[0], b: w[1], value, error });
        }
    }
    let mut evaluations = 15 * heap.len();
    loop {
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), i| (v + i.value, e + i.error));
        if error <= tol.max(64.0 * f64::EPSILON * value.abs()) {
            return Ok(QuadratureResult { value, error_estimate: error, evaluations });
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::BudgetExceeded { evaluations, error });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&f, a, b);
            heap.push(Interval { a, b, value, error });
        }
        evaluations += 30;
    }
}

/// Arc parametrization `θ ↦ cos θ · e + sin θ · e'` of `Ω_C` for a planar
/// cone, with `θ ∈ [0, width]`.
#[derive(Debug, Clone)]
pub struct Arc2 {
    pub e: Vector,
    pub e_perp: Vector,
    pub width: f64,
}

impl Arc2 {
    pub fn new(cone: &ConeSpec) -> Self {
        assert_eq!(cone.dim(), 2, "arc parametrization needs a planar cone");
        let r0 = &cone.rays()[0];
        let r1 = &cone.rays()[1];
        let e = r0.clone();
        let e_perp = (r1 - r0 * r0.dot(r1)).normalize();
        let width = r1.dot(&e_perp).atan2(r1.dot(&e));
        Arc2 { e, e_perp, width }
    }

    pub fn point(&self, theta: f64) -> Vector {
        &self.e * theta.cos() + &self.e_perp * theta.sin()
    }

    pub fn angle(&self, v: &Vector) -> f64 {
        v.dot(&self.e_perp).atan2(v.dot(&self.e))
    }
}

/// `∫_{Ω_C} g(v) dv` with the default breakpoints and settings.
pub fn spherical_region_integral(
    cone: &ConeSpec,
    g: &(dyn Fn(&Vector) -> f64 + Sync),
    tol: f64,
) -> Result<QuadratureResult> {
    let settings = QuadratureSettings { tol, ..QuadratureSettings::default() };
    spherical_region_integral_with(cone, g, &settings, &[])
}

/// `∫_{Ω_C} g(v) dv`. For `n = 2` the arc is split at the directions in
/// `breakpoints` and integrated to `settings.tol`; for `n ≥ 3` the result is
/// a Monte Carlo estimate from `settings.samples` draws whose error estimate
/// is one standard error.
pub fn spherical_region_integral_with(
    cone: &ConeSpec,
    g: &(dyn Fn(&Vector) -> f64 + Sync),
    settings: &QuadratureSettings,
    breakpoints: &[Vector],
) -> Result<QuadratureResult> {
    match cone.dim() {
        2 => {
            let arc = Arc2::new(cone);
            let cuts: Vec<f64> = breakpoints.iter().map(|v| arc.angle(v)).collect();
            integrate_interval(|t| g(&arc.point(t)), 0.0, arc.width, &cuts, settings.tol)
        }
        3 => Ok(stratified_cap(cone, g, settings.samples.max(1), settings.seed)),
        _ => Ok(whole_sphere(cone, g, settings.samples.max(1), settings.seed)),
    }
}

/// Stratified sampling of the cap `{⟨v, 𝔳⟩ ≥ cos β}` in `ℝ³`, with `β` the
/// aperture, on an `M × M` grid in `(z, φ)`.
fn stratified_cap(cone: &ConeSpec, g: &(dyn Fn(&Vector) -> f64 + Sync), samples: usize, seed: u64) -> QuadratureResult {
    let axis = cone.axis();
    let helper = if axis[0].abs() < 0.9 {
        Vector::from_column_slice(&[1.0, 0.0, 0.0])
    } else {
        Vector::from_column_slice(&[0.0, 1.0, 0.0])
    };
    let e1 = (&helper - axis * axis.dot(&helper)).normalize();
    let e2 = axis.cross(&e1);
    let z0 = cone.aperture().cos();
    let area = 2.0 * PI * (1.0 - z0);

    let m = ((samples as f64 / 16.0).sqrt().floor() as usize).max(1);
    let per = (samples / (m * m)).max(2);
    let cell = area / (m * m) as f64;

    let rows: Vec<(f64, f64)> = (0..m)
        .into_par_iter()
        .map(|row| {
            let mut rng = block_rng(seed, row as u64);
            let mut value = 0.0;
            let mut variance = 0.0;
            for col in 0..m {
                let mut acc = Accumulator::default();
                for _ in 0..per {
                    let z = z0 + (1.0 - z0) * (row as f64 + rng.random::<f64>()) / m as f64;
                    let phi = 2.0 * PI * (col as f64 + rng.random::<f64>()) / m as f64;
                    let rho = (1.0 - z * z).max(0.0).sqrt();
                    let v = axis * z + &e1 * (rho * phi.cos()) + &e2 * (rho * phi.sin());
                    acc.push(if cone.in_interior(&v) { g(&v) } else { 0.0 });
                }
                value += cell * acc.mean();
                variance += cell * cell * acc.variance_of_mean();
            }
            (value, variance)
        })
        .collect();
    let (value, variance) = rows.iter().fold((0.0, 0.0), |(v, s), r| (v + r.0, s + r.1));
    QuadratureResult { value, error_estimate: variance.sqrt(), evaluations: m * m * per }
}

fn sphere_area(n: usize) -> f64 {
    // |S^{n-1}| obeys |S^{n+1}| = 2π/n · |S^{n-1}|.
    let (mut area, mut k) = if n % 2 == 0 { (2.0 * PI, 2) } else { (4.0 * PI, 3) };
    while k < n {
        area *= 2.0 * PI / k as f64;
        k += 2;
    }
    area
}

fn whole_sphere(cone: &ConeSpec, g: &(dyn Fn(&Vector) -> f64 + Sync), samples: usize, seed: u64) -> QuadratureResult {
    let n = cone.dim();
    let blocks = samples.div_ceil(BLOCK);
    let accs: Vec<Accumulator> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng: ChaCha8Rng = block_rng(seed, b as u64);
            let count = BLOCK.min(samples - b * BLOCK);
            let mut acc = Accumulator::default();
            for _ in 0..count {
                let v = Vector::from_fn(n, |_, _| gaussian(&mut rng)).normalize();
                acc.push(if cone.in_interior(&v) { g(&v) } else { 0.0 });
            }
            acc
        })
        .collect();
    let acc = accs.into_iter().fold(Accumulator::default(), |a, b| a.merge(&b));
    let area = sphere_area(n);
    QuadratureResult {
        value: area * acc.mean(),
        error_estimate: area * acc.variance_of_mean().sqrt(),
        evaluations: samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cone::orthant;

    #[test]
    fn quarter_circle() {
        let r = spherical_region_integral(&orthant(2), &|_| 1.0, 1e-12).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn octant_solid_angle() {
        let settings = QuadratureSettings { samples: 200_000, ..QuadratureSettings::default() };
        let r = spherical_region_integral_with(&orthant(3), &|_| 1.0, &settings, &[]).unwrap();
        assert!((r.value - PI / 2.0).abs() < 3.0 * r.error_estimate, "{r:?}");
    }

    #[test]
    fn orthant_in_four_dimensions() {
        let settings = QuadratureSettings { samples: 200_000, ..QuadratureSettings::default() };
        let r = spherical_region_integral_with(&orthant(4), &|_| 1.0, &settings, &[]).unwrap();
        assert!((r.value - sphere_area(4) / 16.0).abs() < 4.0 * r.error_estimate, "{r:?}");
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn kinked_integrand_with_breakpoint() {
        let r = integrate_interval(|x| (x - 0.3).abs(), 0.0, 1.0, &[0.3], 1e-14).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
    }
}
