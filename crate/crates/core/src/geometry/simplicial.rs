//! Centroid triangulation of convex polytopes given by their vertices.
//!
//! Works in any dimension by discovering ridges with brute-force supporting
//! hyperplane enumeration in local affine coordinates, then coning each
//! recursively triangulated ridge from the centroid. Intended for the small
//! vertex counts of individual facets.

use std::collections::BTreeSet;

use crate::linalg::{self, Vector};

const REL_TOL: f64 = 1e-9;

/// Simplices (each a list of `k + 1` ambient points) covering the convex hull
/// of `points`, where `k` is the affine dimension of the hull. Returns an
/// empty list if the hull has dimension below `expected_dim`.
pub fn triangulate(points: &[Vector], expected_dim: usize) -> Vec<Vec<Vector>> {
    if points.is_empty() {
        return Vec::new();
    }
    let scale = linalg::diameter(points).max(f64::MIN_POSITIVE);
    let unique = dedup(points, REL_TOL * scale);
    let k = linalg::affine_rank(&unique, REL_TOL * scale);
    if k < expected_dim {
        return Vec::new();
    }
    triangulate_rec(&unique, k, REL_TOL * scale)
}

/// `(k)`-volume of the convex hull of `points`, or 0 if it has dimension
/// below `k`.
pub fn polytope_volume(points: &[Vector], k: usize) -> f64 {
    triangulate(points, k).iter().filter(|s| s.len() == k + 1).map(|s| linalg::simplex_volume(s)).sum()
}

fn dedup(points: &[Vector], tol: f64) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| (q - p).norm() <= tol) {
            out.push(p.clone());
        }
    }
    out
}

fn triangulate_rec(points: &[Vector], k: usize, tol: f64) -> Vec<Vec<Vector>> {
    if k == 0 {
        return vec![vec![points[0].clone()]];
    }
    let c = linalg::centroid(points);
    let diffs: Vec<Vector> = points.iter().map(|p| p - &c).collect();
    let basis = linalg::span_basis(&diffs, c.len(), REL_TOL);
    let basis = if basis.ncols() > k { basis.columns(0, k).into_owned() } else { basis };
    let local: Vec<Vector> = diffs.iter().map(|d| basis.transpose() * d).collect();

    if k == 1 {
        let (imin, imax) = extreme_pair(&local);
        return vec![vec![points[imin].clone(), points[imax].clone()]];
    }

    let mut simplices = Vec::new();
    for ridge in ridges(&local, k, tol) {
        let ridge_points: Vec<Vector> = ridge.iter().map(|&i| points[i].clone()).collect();
        for mut s in triangulate_rec(&ridge_points, k - 1, tol) {
            s.push(c.clone());
            simplices.push(s);
        }
    }
    simplices
}

fn extreme_pair(local: &[Vector]) -> (usize, usize) {
    let mut imin = 0;
    let mut imax = 0;
    for (i, p) in local.iter().enumerate() {
        if p[0] < local[imin][0] {
            imin = i;
        }
        if p[0] > local[imax][0] {
            imax = i;
        }
    }
    (imin, imax)
}

/// Vertex index sets of the facets of a full-dimensional polytope in ℝᵏ.
fn ridges(local: &[Vector], k: usize, tol: f64) -> Vec<Vec<usize>> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    linalg::for_each_subset(local.len(), k, |subset| {
        let base = &local[subset[0]];
        let dirs: Vec<Vector> = subset[1..].iter().map(|&i| &local[i] - base).collect();
        let normal = linalg::hyperplane_normal(&dirs, k, REL_TOL);
        let Some(normal) = normal else { return };
        let offset = normal.dot(base);
        let side: Vec<f64> = local.iter().map(|p| normal.dot(p) - offset).collect();
        let above = side.iter().any(|&s| s > tol);
        let below = side.iter().any(|&s| s < -tol);
        if above && below {
            return;
        }
        let on: Vec<usize> = (0..local.len()).filter(|&i| side[i].abs() <= tol).collect();
        found.insert(on);
    });
    found.into_iter().collect()
}
