//! Globally adaptive cubature over simplices.
//!
//! The base rule is the degree-5 Grundmann–Möller rule. Each region carries
//! the rule applied to itself and to the two halves of its longest-edge
//! bisection; the difference is the error estimate and the sum of the halves
//! is the accepted value. The estimate never drops below a fixed fraction of
//! the parent's, and at the top level never below the gap to the degree-3
//! rule. The region with the largest estimate is split until the total
//! estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::min_norm::min_norm_point;
use crate::linalg::{self, Vector};
use crate::quadrature::density::WeightDensity;
use crate::quadrature::QuadratureResult;

/// Maximum number of live regions before giving up.
pub const MAX_REGIONS: usize = 200_000;

/// Factor by which a child's error estimate may fall below its parent's.
const INHERITED_DECAY: f64 = 64.0;

/// Relative distance below which the origin counts as touching a simplex.
const ORIGIN_EPS: f64 = 1e-9;

/// Grundmann–Möller rule of degree `2s + 1` on a `d`-simplex, as barycentric
/// points and weights summing to one.
#[derive(Debug, Clone)]
pub struct SimplexRule {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl SimplexRule {
    pub fn grundmann_moller(d: usize, s: usize) -> Self {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for i in 0..=s {
            let m = s - i;
            let denom = (d + 2 * s - 2 * i + 1) as f64;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            let w = sign * denom.powi(2 * s as i32 + 1) / (linalg::factorial(i) * linalg::factorial(d + 2 * s + 1 - i));
            compositions(m, d + 1, &mut |beta| {
                points.push(beta.iter().map(|&b| (2 * b + 1) as f64 / denom).collect());
                weights.push(w);
            });
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        SimplexRule { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Rule applied to the simplex with the given vertices.
    pub fn apply(&self, f: &impl Fn(&Vector) -> f64, vertices: &[Vector]) -> f64 {
        let vol = linalg::simplex_volume(vertices);
        if vol == 0.0 {
            return 0.0;
        }
        let mut sum = 0.0;
        let mut x = Vector::zeros(vertices[0].len());
        for (bary, w) in self.points.iter().zip(&self.weights) {
            x.fill(0.0);
            for (b, v) in bary.iter().zip(vertices) {
                x.axpy(*b, v, 1.0);
            }
            sum += w * f(&x);
        }
        sum * vol
    }
}

fn compositions(total: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(rest: usize, slot: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if slot + 1 == cur.len() {
            cur[slot] = rest;
            f(cur);
            return;
        }
        for k in (0..=rest).rev() {
            cur[slot] = k;
            rec(rest - k, slot + 1, cur, f);
        }
    }
    let mut cur = vec![0; parts];
    rec(total, 0, &mut cur, f);
}

struct Region {
    vertices: Vec<Vector>,
    halves: (f64, f64),
    value: f64,
    error: f64,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Region {}
impl PartialOrd for Region {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Region {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn bisect(vertices: &[Vector]) -> (Vec<Vector>, Vec<Vector>) {
    let mut best = (0, 1, -1.0);
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            let len = (&vertices[a] - &vertices[b]).norm_squared();
            if len > best.2 {
                best = (a, b, len);
            }
        }
    }
    let mid = (&vertices[best.0] + &vertices[best.1]) * 0.5;
    let mut left = vertices.to_vec();
    let mut right = vertices.to_vec();
    left[best.1] = mid.clone();
    right[best.0] = mid;
    (left, right)
}

fn region(rule: &SimplexRule, f: &impl Fn(&Vector) -> f64, vertices: Vec<Vector>, coarse: f64, floor: f64) -> Region {
    let (l, r) = bisect(&vertices);
    let halves = (rule.apply(f, &l), rule.apply(f, &r));
    let fine = halves.0 + halves.1;
    Region { vertices, halves, value: fine, error: (coarse - fine).abs().max(floor) }
}

/// Adaptive integral of `f` over the union of `simplices` (all of the same
/// dimension `d ≥ 1`) with absolute error estimate at most `tol`.
pub fn integrate_simplices_with(
    f: impl Fn(&Vector) -> f64,
    simplices: &[Vec<Vector>],
    tol: f64,
) -> Result<QuadratureResult> {
    if simplices.is_empty() {
        return Ok(QuadratureResult::zero());
    }
    let d = simplices[0].len() - 1;
    let rule = SimplexRule::grundmann_moller(d, 2);
    let low = SimplexRule::grundmann_moller(d, 1);
    let per_region = 2 * rule.len();

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for s in simplices {
        let coarse = rule.apply(&f, s);
        let floor = (low.apply(&f, s) - coarse).abs();
        heap.push(region(&rule, &f, s.clone(), coarse, floor));
        evaluations += per_region + rule.len() + low.len();
    }
    let totals = |heap: &BinaryHeap<Region>| heap.iter().fold((0.0, 0.0), |(v, e), r| (v + r.value, e + r.error));
    let (mut value, mut error) = totals(&heap);
    let mut steps = 0usize;
    loop {
        let floor = 64.0 * f64::EPSILON * value.abs();
        if error <= tol.max(floor) {
            break;
        }
        if heap.len() >= MAX_REGIONS {
            return Err(Error::BudgetExceeded { evaluations, error });
        }
        let worst = heap.pop().expect("heap is nonempty");
        let (l, r) = bisect(&worst.vertices);
        let inherited = worst.error / INHERITED_DECAY;
        let rl = region(&rule, &f, l, worst.halves.0, inherited);
        let rr = region(&rule, &f, r, worst.halves.1, inherited);
        evaluations += 2 * per_region;
        value += rl.value + rr.value - worst.value;
        error += rl.error + rr.error - worst.error;
        heap.push(rl);
        heap.push(rr);
        steps += 1;
        if steps % 1024 == 0 {
            (value, error) = totals(&heap);
        }
    }
    let (value, error) = totals(&heap);
    Ok(QuadratureResult { value, error_estimate: error, evaluations })
}

fn check_origin(simplices: &[Vec<Vector>]) -> Result<()> {
    for s in simplices {
        let scale = s.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let distance = min_norm_point(s).norm();
        if distance <= ORIGIN_EPS * scale {
            return Err(Error::OriginTooClose { distance });
        }
    }
    Ok(())
}

/// `∫_S Θ dH^{n-1}` over a simplex `S` not touching the origin.
pub fn integrate_simplex(density: &WeightDensity, simplex: &[Vector], tol: f64) -> Result<QuadratureResult> {
    integrate_simplices(density, &[simplex.to_vec()], tol)
}

/// `∫ Θ` over a union of simplices, adapting globally across all of them.
pub fn integrate_simplices(density: &WeightDensity, simplices: &[Vec<Vector>], tol: f64) -> Result<QuadratureResult> {
    check_origin(simplices)?;
    integrate_simplices_with(|y| density.eval(y), simplices, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;

    fn exact_monomial(rule: &SimplexRule) -> bool {
        // ∫ x^a y^b over the unit triangle is a! b! / (a + b + 2)!.
        let tri = [vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])];
        for a in 0..=5i32 {
            for b in 0..=(5 - a) {
                let got = rule.apply(&|x: &Vector| x[0].powi(a) * x[1].powi(b), &tri);
                let want = linalg::factorial(a as usize) * linalg::factorial(b as usize)
                    / linalg::factorial((a + b + 2) as usize);
                if (got - want).abs() > 1e-14 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rule_is_exact_to_degree_five() {
        let rule = SimplexRule::grundmann_moller(2, 2);
        assert!(exact_monomial(&rule));
        let seg = SimplexRule::grundmann_moller(1, 2);
        let got = seg.apply(&|x: &Vector| x[0].powi(5), &[vector(&[0.0]), vector(&[2.0])]);
        assert!((got - 64.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_volume() {
        let rule = SimplexRule::grundmann_moller(3, 2);
        let tet =
            [vector(&[0.0, 0.0, 0.0]), vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0]), vector(&[0.0, 0.0, 1.0])];
        assert!((rule.apply(&|_: &Vector| 1.0, &tet) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_reaches_tolerance() {
        let seg = vec![vec![vector(&[1.0, 0.0]), vector(&[1.0, 5.0])]];
        let d = WeightDensity::constant(2, 1.5).unwrap();
        let r = integrate_simplices(&d, &seg, 1e-10).unwrap();
        let fine = integrate_simplices(&d, &seg, 1e-13).unwrap();
        assert!(r.error_estimate <= 1e-10);
        assert!((r.value - fine.value).abs() < 1e-10);
    }

    #[test]
    fn origin_on_simplex_is_rejected() {
        let d = WeightDensity::constant(2, 1.5).unwrap();
        let seg = [vector(&[-1.0, 0.0]), vector(&[1.0, 0.0])];
        assert!(matches!(integrate_simplex(&d, &seg, 1e-8), Err(Error::OriginTooClose { .. })));
    }
}
