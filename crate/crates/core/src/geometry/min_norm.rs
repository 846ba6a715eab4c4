//! Wolfe's algorithm for the minimum-norm point of a polytope given as the
//! convex hull of finitely many points.

use nalgebra::{DMatrix, DVector};

use crate::linalg::Vector;

const MAX_MAJOR: usize = 10_000;

/// Point of `conv(points)` nearest to the origin, with its convex weights.
#[derive(Debug, Clone)]
pub struct MinNormPoint {
    pub point: Vector,
    /// Support indices into `points` with their positive convex weights.
    pub weights: Vec<(usize, f64)>,
}

impl MinNormPoint {
    pub fn norm(&self) -> f64 {
        self.point.norm()
    }
}

/// Minimum-norm point of the convex hull of `points` (nonempty).
pub fn min_norm_point(points: &[Vector]) -> MinNormPoint {
    assert!(!points.is_empty(), "min_norm_point needs at least one point");
    let scale = points.iter().map(|p| p.norm_squared()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let eps = 1e-13 * scale;

    let start =
        (0..points.len()).min_by(|&a, &b| points[a].norm_squared().total_cmp(&points[b].norm_squared())).unwrap();
    let mut support: Vec<usize> = vec![start];
    let mut lambda: Vec<f64> = vec![1.0];
    let mut x = points[start].clone();

    for _ in 0..MAX_MAJOR {
        // Most improving vertex.
        let (j, best) =
            points.iter().enumerate().map(|(i, p)| (i, x.dot(p))).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        if x.norm_squared() - best <= eps || support.contains(&j) {
            break;
        }
        support.push(j);
        lambda.push(0.0);

        for _ in 0..=points.len() {
            let alpha = affine_min_norm(points, &support);
            if alpha.iter().all(|&a| a > 1e-15) {
                lambda = alpha;
                break;
            }
            let mut theta: f64 = 1.0;
            for (l, a) in lambda.iter().zip(&alpha) {
                if *a <= 1e-15 {
                    let d = l - a;
                    if d > 0.0 {
                        theta = theta.min(l / d);
                    }
                }
            }
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let mut k = 0;
            while k < support.len() {
                if lambda[k] <= 1e-15 {
                    support.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= total);
            if support.len() == 1 {
                lambda[0] = 1.0;
                break;
            }
        }
        x = combine(points, &support, &lambda);
    }
    MinNormPoint { point: x, weights: support.into_iter().zip(lambda).collect() }
}

/// Distance from `p` to `conv(points)`.
pub fn distance_to_hull(p: &Vector, points: &[Vector]) -> f64 {
    let shifted: Vec<Vector> = points.iter().map(|q| q - p).collect();
    min_norm_point(&shifted).norm()
}

/// Hausdorff distance between the convex hulls of two point sets.
pub fn hausdorff_distance(a: &[Vector], b: &[Vector]) -> f64 {
    let ab = a.iter().map(|p| distance_to_hull(p, b)).fold(0.0, f64::max);
    let ba = b.iter().map(|p| distance_to_hull(p, a)).fold(0.0, f64::max);
    ab.max(ba)
}

fn combine(points: &[Vector], support: &[usize], lambda: &[f64]) -> Vector {
    let mut x = DVector::zeros(points[0].len());
    for (&i, &l) in support.iter().zip(lambda) {
        x += &points[i] * l;
    }
    x
}

/// Weights of the minimum-norm point of the affine hull of the support.
fn affine_min_norm(points: &[Vector], support: &[usize]) -> Vec<f64> {
    let k = support.len();
    let mut m = DMatrix::zeros(k + 1, k + 1);
    for a in 0..k {
        for b in 0..k {
            m[(a, b)] = points[support[a]].dot(&points[support[b]]);
        }
        m[(a, k)] = 1.0;
        m[(k, a)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m
        .clone()
        .lu()
        .solve(&rhs)
        .unwrap_or_else(|| m.svd(true, true).solve(&rhs, 1e-14).expect("SVD solve cannot fail with both bases"));
    sol.iter().take(k).cloned().collect()
}
