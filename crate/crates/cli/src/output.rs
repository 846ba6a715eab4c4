//! JSON, CSV and OFF writers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use pseudocone::format::csv12;
use pseudocone::geometry::TruncationPolytope;
use pseudocone::linalg::Vector;
use serde::Serialize;

use crate::failure::Failure;

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    text.push('\n');
    write(path, &text)
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    write(path, &text)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

/// The polytope as an OFF mesh with every face wound counterclockwise
/// around its outer normal.
pub fn off_mesh(p: &TruncationPolytope) -> String {
    let faces: Vec<Vec<usize>> =
        p.facets.iter().filter(|f| f.vertices.len() >= 3).map(|f| wind(&p.vertices, &f.vertices, &f.normal)).collect();
    let mut edges = std::collections::BTreeSet::new();
    for face in &faces {
        for (k, &a) in face.iter().enumerate() {
            let b = face[(k + 1) % face.len()];
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let mut out = format!("OFF\n{} {} {}\n", p.vertices.len(), faces.len(), edges.len());
    for v in &p.vertices {
        let coords: Vec<String> = v.iter().map(|x| csv12(*x)).collect();
        let _ = writeln!(out, "{}", coords.join(" "));
    }
    for face in &faces {
        let ids: Vec<String> = face.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "{} {}", face.len(), ids.join(" "));
    }
    out
}

fn wind(vertices: &[Vector], ids: &[usize], normal: &Vector) -> Vec<usize> {
    let c = ids.iter().fold(Vector::zeros(3), |acc, &i| acc + &vertices[i]) / ids.len() as f64;
    let e1 = (&vertices[ids[0]] - &c).normalize();
    let e2 = cross(normal, &e1);
    let mut keyed: Vec<(f64, usize)> = ids
        .iter()
        .map(|&i| {
            let d = &vertices[i] - &c;
            (d.dot(&e2).atan2(d.dot(&e1)), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, i)| i).collect()
}

fn cross(a: &Vector, b: &Vector) -> Vector {
    Vector::from_vec(vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])
}
