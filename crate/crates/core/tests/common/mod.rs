#![allow(dead_code)]

use pseudocone::geometry::{orthant, polygonal_cone, ConeSpec, PseudoCone};
use pseudocone::linalg::Vector;
use pseudocone::measures::unweighted_measures;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The three cone families of the test suite.
pub fn families() -> Vec<(&'static str, ConeSpec)> {
    vec![("quadrant", orthant(2)), ("octant", orthant(3)), ("pentagonal", polygonal_cone(5, 1.5).unwrap())]
}

/// A uniformly random direction in `Ω_{C°}` at least `margin` from its
/// boundary.
pub fn dual_direction(cone: &ConeSpec, margin: f64, rng: &mut impl Rng) -> Vector {
    let n = cone.dim();
    loop {
        let g = Vector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = g.norm();
        if norm < 1e-6 {
            continue;
        }
        let u = g / norm;
        if cone.in_dual_interior(&u) && cone.boundary_distance(&u) > margin {
            return u;
        }
    }
}

/// Support magnitude of the ball of radius `r` centred at `c 𝔳 + p`:
/// `-c ⟨u, 𝔳⟩ - r - ⟨p, u⟩`. Its Wulff shapes have every facet active as
/// long as the ball lies inside `C`.
pub fn ball_support(cone: &ConeSpec, c: f64, r: f64, p: &Vector, u: &Vector) -> f64 {
    let value = -c * u.dot(cone.axis()) - r - p.dot(u);
    assert!(value > 0.0, "direction too steep for the ball");
    value
}

/// Random polyhedral pseudo-cone with `m` facets, all active: the Wulff
/// shape of the support values of a ball inside `C`. Normals are at
/// least `0.6/m` apart and no facet has less than 2% of the mean facet area,
/// which keeps finite differences at a fixed step accurate.
pub fn random_body(cone: &ConeSpec, m: usize, rng: &mut impl Rng) -> PseudoCone {
    let separation = 0.6 / m as f64;
    loop {
        let normals: Vec<Vector> = (0..m).map(|_| dual_direction(cone, 0.05, rng)).collect();
        let close = (0..m).any(|i| (0..i).any(|j| normals[i].dot(&normals[j]).min(1.0).acos() < separation));
        if close {
            continue;
        }
        let shift: f64 = rng.random_range(0.0..0.5);
        let scale: f64 = rng.random_range(0.5..2.0);
        let p = cone.axis() * shift;
        let f: Vec<f64> = normals.iter().map(|u| scale * ball_support(cone, 2.5, 1.0, &p, u)).collect();
        let k = PseudoCone::wulff(cone, &normals, &f).unwrap();
        if !k.active().iter().all(|a| *a) {
            continue;
        }
        let areas: Vec<f64> = (0..m).map(|i| unweighted_measures(&k, i).unwrap().0).collect();
        let mean = areas.iter().sum::<f64>() / m as f64;
        if areas.iter().all(|a| *a >= 0.02 * mean) {
            return k;
        }
    }
}

/// Adaptive Simpson rule on `[a, b]` with absolute tolerance `tol`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫_F Θ dH¹` over a planar segment `F = [p, q]` by adaptive Simpson.
pub fn segment_integral(theta: &dyn Fn(&Vector) -> f64, p: &Vector, q: &Vector, tol: f64) -> f64 {
    let len = (q - p).norm();
    let g = |s: f64| theta(&(p + (q - p) * s));
    len * simpson(&g, 0.0, 1.0, tol / len)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
