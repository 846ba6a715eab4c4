//! Vertex and facet description of `K ∩ C⁻(t)` by incremental halfspace
//! intersection (double description).
//!
//! The starting polytope is `C⁻(t) = conv{o, t·r/⟨r,v⟩}` whose incidences are
//! known from the cone. Each constraint `⟨x,u_i⟩ ≤ -f_i` then cuts it: kept
//! vertices stay, removed vertices disappear, and every edge between a kept
//! and a removed vertex contributes its crossing point. Edges are detected
//! combinatorially: two vertices are adjacent iff no third vertex is incident
//! to all constraints they share.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::geometry::cone::{ConeSpec, TOL};
use crate::linalg::{self, Vector};

/// Provenance of a truncation facet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FacetKind {
    /// Facet of the cone `C` (index into `ConeSpec::facet_normals`).
    Cone(usize),
    /// The cap `H(v, t)`.
    Cap,
    /// Facet supported by the defining constraint with this index.
    Constraint(usize),
}

#[derive(Debug, Clone)]
pub struct TruncationFacet {
    pub kind: FacetKind,
    /// Outer unit normal.
    pub normal: Vector,
    /// Offset `b` in `⟨x, normal⟩ ≤ b`.
    pub offset: f64,
    pub vertices: Vec<usize>,
}

/// The polytope `K ∩ C⁻(t)`.
#[derive(Debug, Clone)]
pub struct TruncationPolytope {
    pub height: f64,
    pub vertices: Vec<Vector>,
    pub facets: Vec<TruncationFacet>,
}

impl TruncationPolytope {
    pub fn facet(&self, kind: FacetKind) -> Option<&TruncationFacet> {
        self.facets.iter().find(|f| f.kind == kind)
    }

    pub fn facet_points(&self, facet: &TruncationFacet) -> Vec<Vector> {
        facet.vertices.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    /// Vertices strictly below the cap, i.e. vertices of `K` itself.
    pub fn body_vertices(&self) -> Vec<Vector> {
        let cap = self.facet(FacetKind::Cap).map(|f| f.vertices.clone()).unwrap_or_default();
        self.vertices.iter().enumerate().filter(|(i, _)| !cap.contains(i)).map(|(_, v)| v.clone()).collect()
    }
}

struct Halfspace {
    kind: FacetKind,
    normal: Vector,
    offset: f64,
}

/// Intersects `C⁻(height)` with the halfspaces `⟨x, normals[i]⟩ ≤ -values[i]`.
pub(crate) fn intersect(
    cone: &ConeSpec,
    normals: &[Vector],
    values: &[f64],
    height: f64,
) -> Result<TruncationPolytope> {
    let n = cone.dim();
    let nf = cone.facet_normals().len();
    let mut halfspaces: Vec<Halfspace> = cone
        .facet_normals()
        .iter()
        .enumerate()
        .map(|(j, w)| Halfspace { kind: FacetKind::Cone(j), normal: w.clone(), offset: 0.0 })
        .collect();
    halfspaces.push(Halfspace { kind: FacetKind::Cap, normal: cone.axis().clone(), offset: height });
    for (i, (u, &f)) in normals.iter().zip(values).enumerate() {
        halfspaces.push(Halfspace { kind: FacetKind::Constraint(i), normal: u.clone(), offset: -f });
    }
    let total = halfspaces.len();
    let cap = nf;
    let eps = TOL * height.abs().max(f64::MIN_POSITIVE);

    let mut vertices: Vec<Vector> = Vec::new();
    let mut incidence: Vec<FixedBitSet> = Vec::new();
    let mut origin = FixedBitSet::with_capacity(total);
    origin.insert_range(0..nf);
    vertices.push(Vector::zeros(n));
    incidence.push(origin);
    for (j, r) in cone.rays().iter().enumerate() {
        let mut inc = FixedBitSet::with_capacity(total);
        inc.insert(cap);
        for &k in cone.ray_facets(j) {
            inc.insert(k);
        }
        vertices.push(r * (height / r.dot(cone.axis())));
        incidence.push(inc);
    }

    for k in nf + 1..total {
        let h = &halfspaces[k];
        let slack: Vec<f64> = vertices.iter().map(|x| x.dot(&h.normal) - h.offset).collect();
        let plus: Vec<usize> = (0..vertices.len()).filter(|&i| slack[i] > eps).collect();
        if plus.is_empty() {
            for (i, s) in slack.iter().enumerate() {
                if s.abs() <= eps {
                    incidence[i].insert(k);
                }
            }
            continue;
        }
        let minus: Vec<usize> = (0..vertices.len()).filter(|&i| slack[i] < -eps).collect();
        if minus.is_empty() {
            return Err(Error::DegenerateIntersection(format!(
                "constraint {:?} leaves no full-dimensional part below height {height}",
                h.kind
            )));
        }

        let mut new_vertices: Vec<Vector> = Vec::new();
        let mut new_incidence: Vec<FixedBitSet> = Vec::new();
        for &p in &plus {
            for &m in &minus {
                let mut common = incidence[p].clone();
                common.intersect_with(&incidence[m]);
                if common.count_ones(..) < n - 1 {
                    continue;
                }
                let adjacent = (0..vertices.len()).all(|w| w == p || w == m || !common.is_subset(&incidence[w]));
                if !adjacent {
                    continue;
                }
                let lambda = slack[m] / (slack[m] - slack[p]);
                let x = &vertices[m] + (&vertices[p] - &vertices[m]) * lambda;
                common.insert(k);
                if let Some(dup) = new_vertices.iter().position(|y| (y - &x).norm() <= eps) {
                    new_incidence[dup].union_with(&common);
                } else {
                    new_vertices.push(x);
                    new_incidence.push(common);
                }
            }
        }

        let mut kept_vertices = Vec::new();
        let mut kept_incidence = Vec::new();
        for (i, (x, mut inc)) in vertices.drain(..).zip(incidence.drain(..)).enumerate() {
            if slack[i] > eps {
                continue;
            }
            if slack[i] >= -eps {
                inc.insert(k);
            }
            kept_vertices.push(x);
            kept_incidence.push(inc);
        }
        kept_vertices.extend(new_vertices);
        kept_incidence.extend(new_incidence);
        vertices = kept_vertices;
        incidence = kept_incidence;
    }

    // Final geometric incidence pass.
    for (x, inc) in vertices.iter().zip(incidence.iter_mut()) {
        for (k, h) in halfspaces.iter().enumerate() {
            let s = x.dot(&h.normal) - h.offset;
            if s > 10.0 * eps {
                return Err(Error::DegenerateIntersection(format!("vertex violates {:?} by {s}", h.kind)));
            }
            if s.abs() <= eps {
                inc.insert(k);
            }
        }
    }

    if vertices.iter().any(|v| !v.iter().all(|x| x.is_finite())) {
        return Err(Error::DegenerateIntersection("non-finite vertex".into()));
    }
    let mut facets = Vec::new();
    for (k, h) in halfspaces.into_iter().enumerate() {
        let on: Vec<usize> = (0..vertices.len()).filter(|&i| incidence[i].contains(k)).collect();
        let pts: Vec<Vector> = on.iter().map(|&i| vertices[i].clone()).collect();
        if on.len() >= n && linalg::affine_rank(&pts, eps) == n - 1 {
            facets.push(TruncationFacet { kind: h.kind, normal: h.normal, offset: h.offset, vertices: on });
        }
    }
    if linalg::affine_rank(&vertices, eps) < n {
        return Err(Error::DegenerateIntersection("intersection is not full-dimensional".into()));
    }
    Ok(TruncationPolytope { height, vertices, facets })
}
