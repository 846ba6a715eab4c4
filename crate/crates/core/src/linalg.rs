//! Small dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

pub type Vector = DVector<f64>;

pub fn vector(coords: &[f64]) -> Vector {
    DVector::from_column_slice(coords)
}

/// Orthonormal basis (as columns) of the span of `vectors`, using singular
/// values above `tol` relative to the largest one.
pub fn span_basis(vectors: &[Vector], dim: usize, tol: f64) -> DMatrix<f64> {
    if vectors.is_empty() {
        return DMatrix::zeros(dim, 0);
    }
    let m = DMatrix::from_columns(vectors);
    let svd = m.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return DMatrix::zeros(dim, 0);
    }
    let keep: Vec<usize> =
        svd.singular_values.iter().enumerate().filter(|(_, &s)| s > tol * smax).map(|(i, _)| i).collect();
    DMatrix::from_fn(dim, keep.len(), |r, c| u[(r, keep[c])])
}

pub fn rank(vectors: &[Vector], dim: usize, tol: f64) -> usize {
    span_basis(vectors, dim, tol).ncols()
}

/// Dimension of the affine hull of `points`, with `tol` an absolute length.
pub fn affine_rank(points: &[Vector], tol: f64) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let base = &points[0];
    let diffs: Vec<Vector> = points[1..].iter().map(|p| p - base).collect();
    let m = DMatrix::from_columns(&diffs);
    let svd = m.svd(false, false);
    svd.singular_values.iter().filter(|&&s| s > tol).count()
}

/// Unit normal of the hyperplane spanned by `n - 1` vectors in ℝⁿ, or `None`
/// if they are linearly dependent (relative tolerance `tol`).
pub fn hyperplane_normal(vectors: &[Vector], dim: usize, tol: f64) -> Option<Vector> {
    debug_assert_eq!(vectors.len() + 1, dim);
    if dim == 1 {
        return Some(vector(&[1.0]));
    }
    // Pad with a zero row so the SVD exposes the full right singular basis.
    let m = DMatrix::from_fn(dim, dim, |r, c| if r < vectors.len() { vectors[r][c] } else { 0.0 });
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let smax = svd.singular_values[order[dim - 1]];
    if smax == 0.0 || svd.singular_values[order[1]] <= tol * smax {
        return None;
    }
    Some(v_t.row(order[0]).transpose().normalize())
}

/// Volume of the k-simplex with the given `k + 1` vertices, embedded in any
/// ambient dimension.
pub fn simplex_volume(vertices: &[Vector]) -> f64 {
    let k = vertices.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let base = &vertices[0];
    let g = DMatrix::from_columns(&vertices[1..].iter().map(|v| v - base).collect::<Vec<_>>());
    let gram = g.transpose() * &g;
    let det = gram.determinant().max(0.0);
    det.sqrt() / factorial(k)
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

pub fn centroid(points: &[Vector]) -> Vector {
    let mut c = DVector::zeros(points[0].len());
    for p in points {
        c += p;
    }
    c / points.len() as f64
}

pub fn diameter(points: &[Vector]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Visit every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_enumerated_once() {
        let mut seen = Vec::new();
        for_each_subset(5, 3, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        let mut empty = 0;
        for_each_subset(3, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }

    #[test]
    fn normal_of_plane() {
        let n = hyperplane_normal(&[vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0])], 3, 1e-12).unwrap();
        assert!((n[2].abs() - 1.0).abs() < 1e-12);
        assert!(hyperplane_normal(&[vector(&[1.0, 0.0, 0.0]), vector(&[2.0, 0.0, 0.0])], 3, 1e-12).is_none());
    }

    #[test]
    fn triangle_volume() {
        let t = [vector(&[0.0, 0.0, 1.0]), vector(&[2.0, 0.0, 1.0]), vector(&[0.0, 3.0, 1.0])];
        assert!((simplex_volume(&t) - 3.0).abs() < 1e-12);
        assert_eq!(affine_rank(&t, 1e-9), 2);
    }
}
