//! The four subcommands and the reports they write.

use std::path::{Path, PathBuf};

use log::info;
use pseudocone::bounds::{cone_volume_growth_audit, containment_radius, BoundAudit, Containment};
use pseudocone::format::{csv12, sig12, sig12_vec};
use pseudocone::geometry::PseudoCone;
use pseudocone::measures::{evaluate, MeasureReport, Route};
use pseudocone::solver::{convergence_sweep, solve_with_status, Corridor, SolveStatus, SweepReport};
use serde::Serialize;

use crate::config::{Problem, ProblemConfig, SCHEMA_VERSION};
use crate::failure::Failure;
use crate::output::{off_mesh, write_csv, write_json};

/// Command-line options shared by all subcommands, plus the ones specific
/// to `bounds` and `convergence`.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub out: Option<PathBuf>,
    pub routes: Option<Vec<Route>>,
    pub seed: Option<u64>,
    /// `Some(None)` selects every atom.
    pub omega: Option<Option<Vec<usize>>>,
    pub sweep: bool,
    pub nest: Option<Vec<Vec<usize>>>,
}

fn load(config: &Path, opts: &Options) -> Result<(Problem, PathBuf), Failure> {
    let mut c = ProblemConfig::load(config)?;
    c.apply_seed(opts.seed);
    let out =
        opts.out.clone().or_else(|| c.output.dir.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out).map_err(|e| Failure::Input(format!("cannot create {}: {e}", out.display())))?;
    Ok((c.build()?, out))
}

#[derive(Serialize)]
struct AtomRow {
    index: usize,
    #[serde(serialize_with = "sig12_vec")]
    direction: Vec<f64>,
    #[serde(serialize_with = "sig12")]
    support: f64,
    #[serde(serialize_with = "sig12")]
    weighted_surface_area: f64,
    #[serde(serialize_with = "sig12")]
    weighted_cone_volume: f64,
    #[serde(serialize_with = "sig12")]
    target: f64,
    #[serde(serialize_with = "sig12")]
    residual: f64,
}

#[derive(Serialize)]
struct Totals {
    #[serde(serialize_with = "sig12")]
    target_mass: f64,
    #[serde(serialize_with = "sig12")]
    weighted_covolume: f64,
    #[serde(serialize_with = "sig12")]
    max_abs_residual: f64,
    /// `max_abs_residual / target_mass`.
    #[serde(serialize_with = "sig12")]
    relative_residual: f64,
}

#[derive(Serialize)]
struct SolveReport<'a> {
    schema_version: u32,
    command: &'static str,
    input: &'a ProblemConfig,
    status: SolveStatus,
    iterations: usize,
    #[serde(serialize_with = "sig12")]
    dilation: f64,
    corridor: Corridor,
    #[serde(serialize_with = "sig12")]
    origin_distance: f64,
    #[serde(serialize_with = "sig12")]
    stored_height: f64,
    atoms: Vec<AtomRow>,
    totals: Totals,
    measures: MeasureReport,
}

pub fn solve(config: &Path, opts: &Options) -> Result<(), Failure> {
    let (p, out) = load(config, opts)?;
    let target = p.target()?;
    let sol = solve_with_status(&p.cone, &p.density, &target, &p.config.solver)?;
    let all: Vec<usize> = (0..sol.body.len()).collect();
    let containment = containment_radius(&sol.body, &all)?;
    if !containment.holds {
        return Err(Failure::Internal(format!(
            "facet vertex of norm {} escapes the containment radius {}",
            containment.max_vertex_norm, containment.radius
        )));
    }
    let measures = sol.report(&p.density, &p.config.quadrature, &p.routes(opts.routes.as_deref()))?;
    let atoms: Vec<AtomRow> = sol
        .target
        .kept
        .iter()
        .zip(&measures.facets)
        .map(|(&index, f)| AtomRow {
            index,
            direction: f.normal.clone(),
            support: f.support,
            weighted_surface_area: f.weighted_surface_area,
            weighted_cone_volume: f.weighted_cone_volume,
            target: f.target.unwrap_or(0.0),
            residual: f.residual.unwrap_or(0.0),
        })
        .collect();
    let max_abs_residual = measures.max_abs_residual().unwrap_or(0.0);
    let trace = &sol.trace;
    let report = SolveReport {
        schema_version: SCHEMA_VERSION,
        command: "solve",
        input: &p.config,
        status: trace.status,
        iterations: trace.records.len() - 1,
        dilation: trace.dilation,
        corridor: trace.corridor,
        origin_distance: sol.body.origin_distance(),
        stored_height: sol.body.stored_height(),
        atoms,
        totals: Totals {
            target_mass: sol.target.total,
            weighted_covolume: measures.weighted_covolume,
            max_abs_residual,
            relative_residual: max_abs_residual / sol.target.total,
        },
        measures,
    };
    write_json(&out.join("report.json"), &report)?;

    let rows: Vec<Vec<String>> = trace
        .records
        .iter()
        .map(|r| {
            vec![
                r.iteration.to_string(),
                csv12(r.objective),
                csv12(r.residual),
                csv12(r.origin_distance),
                csv12(r.covolume),
                csv12(r.step),
                r.backtracks.to_string(),
            ]
        })
        .collect();
    let header = ["iteration", "objective", "residual", "origin_distance", "covolume", "step", "backtracks"];
    write_csv(&out.join("trace.csv"), &header, &rows)?;

    if p.cone.dim() == 3 {
        let mesh = off_mesh(&sol.body.truncate(sol.body.stored_height())?);
        std::fs::write(out.join("mesh.off"), mesh)?;
    }
    info!("solve finished with status {:?} after {} iterations", trace.status, report.iterations);
    match trace.status {
        SolveStatus::Converged => Ok(()),
        status => Err(Failure::NotConverged(format!(
            "solver stopped with status {status:?} at residual {}",
            trace.final_residual()
        ))),
    }
}

/// Worst disagreement of one route with the facet route.
#[derive(Serialize)]
struct RouteDiagnostic {
    route: Route,
    #[serde(serialize_with = "sig12")]
    max_abs_delta: f64,
    /// Largest `|delta| / V^Θ_i` over active atoms.
    #[serde(serialize_with = "sig12")]
    max_relative_delta: f64,
    /// Largest `|delta| / error_estimate`.
    #[serde(serialize_with = "sig12")]
    max_sigma: f64,
}

#[derive(Serialize)]
struct EvaluateReport<'a> {
    schema_version: u32,
    command: &'static str,
    input: &'a ProblemConfig,
    measures: MeasureReport,
    diagnostics: Vec<RouteDiagnostic>,
}

fn diagnostics(report: &MeasureReport) -> Vec<RouteDiagnostic> {
    let mut out = Vec::new();
    for route in [Route::Radial, Route::Mc] {
        if !report.routes.contains(&route) {
            continue;
        }
        let mut d = RouteDiagnostic { route, max_abs_delta: 0.0, max_relative_delta: 0.0, max_sigma: 0.0 };
        for f in &report.facets {
            let Some(v) = (match route {
                Route::Radial => f.radial,
                _ => f.mc,
            }) else {
                continue;
            };
            d.max_abs_delta = d.max_abs_delta.max(v.delta.abs());
            if f.weighted_cone_volume > 0.0 {
                d.max_relative_delta = d.max_relative_delta.max(v.delta.abs() / f.weighted_cone_volume);
            }
            if v.error_estimate > 0.0 {
                d.max_sigma = d.max_sigma.max(v.delta.abs() / v.error_estimate);
            }
        }
        out.push(d);
    }
    out
}

pub fn evaluate_cmd(config: &Path, opts: &Options) -> Result<(), Failure> {
    let (p, out) = load(config, opts)?;
    let k = PseudoCone::wulff(&p.cone, &p.directions, p.support()?)?;
    let mut measures = evaluate(&k, &p.density, &p.config.quadrature, &p.routes(opts.routes.as_deref()))?;
    if let Some(m) = &p.config.target.masses {
        measures = measures.with_target(m);
    }
    let report = EvaluateReport {
        schema_version: SCHEMA_VERSION,
        command: "evaluate",
        input: &p.config,
        diagnostics: diagnostics(&measures),
        measures,
    };
    write_json(&out.join("report.json"), &report)?;
    info!("evaluated {} atoms", k.len());
    Ok(())
}

#[derive(Serialize)]
struct BoundsReport<'a> {
    schema_version: u32,
    command: &'static str,
    input: &'a ProblemConfig,
    omega: Vec<usize>,
    audit: BoundAudit,
    containment: Containment,
}

pub fn bounds(config: &Path, opts: &Options) -> Result<(), Failure> {
    let (p, out) = load(config, opts)?;
    let k = PseudoCone::wulff(&p.cone, &p.directions, p.support()?)?;
    let omega = match opts.omega.clone().unwrap_or_else(|| p.config.omega.clone()) {
        Some(o) => o,
        None => (0..k.len()).collect(),
    };
    if omega.is_empty() {
        return Err(Failure::Input("ω is empty".into()));
    }
    if let Some(&i) = omega.iter().find(|&&i| i >= k.len()) {
        return Err(Failure::Input(format!("ω index {i} out of range for {} atoms", k.len())));
    }
    let audit = cone_volume_growth_audit(&k, &omega)?;
    let containment = containment_radius(&k, &omega)?;
    let pass = audit.pass && containment.holds;

    if opts.sweep {
        let mut order = omega.clone();
        order.sort_unstable();
        order.dedup();
        let delta = |i: &usize| p.cone.boundary_distance(&k.normals()[*i]);
        order.sort_by(|a, b| delta(b).total_cmp(&delta(a)).then(a.cmp(b)));
        let mut rows = Vec::with_capacity(order.len());
        for j in 1..=order.len() {
            let a = cone_volume_growth_audit(&k, &order[..j])?;
            rows.push(vec![
                j.to_string(),
                order[j - 1].to_string(),
                csv12(a.delta),
                csv12(a.measured),
                csv12(a.bound),
                csv12(a.scaled_measured),
                csv12(a.scaled_bound),
                csv12(a.slack),
                a.pass.to_string(),
            ]);
        }
        let header =
            ["atoms", "added", "delta", "measured", "bound", "scaled_measured", "scaled_bound", "slack", "pass"];
        write_csv(&out.join("bounds_sweep.csv"), &header, &rows)?;
    }

    let report =
        BoundsReport { schema_version: SCHEMA_VERSION, command: "bounds", input: &p.config, omega, audit, containment };
    write_json(&out.join("bounds.json"), &report)?;
    if pass {
        info!("bound audit passed with slack {}", report.audit.slack);
        Ok(())
    } else {
        Err(Failure::Internal(format!(
            "bound audit failed: measured {} against bound {}",
            report.audit.measured, report.audit.bound
        )))
    }
}

#[derive(Serialize)]
struct ConvergenceReport<'a> {
    schema_version: u32,
    command: &'static str,
    input: &'a ProblemConfig,
    nest: &'a [Vec<usize>],
    #[serde(flatten)]
    sweep: &'a SweepReport,
}

pub fn convergence(config: &Path, opts: &Options) -> Result<(), Failure> {
    let (p, out) = load(config, opts)?;
    let nest = opts
        .nest
        .clone()
        .or_else(|| p.config.nest.clone())
        .ok_or_else(|| Failure::Input("a nest is required (config \"nest\" or --nest)".into()))?;
    let target = p.target()?;
    let sweep = convergence_sweep(&p.cone, &p.density, &target, &nest, &p.config.solver)?;

    let m = target.len();
    let mut header: Vec<String> =
        ["level", "atoms", "mass_fraction", "gap", "residual", "iterations"].iter().map(|s| s.to_string()).collect();
    header.extend((0..sweep.levels.first().map_or(0, |l| l.panel.len())).map(|k| format!("panel_{k}")));
    header.extend((0..m).map(|i| format!("support_{i}")));
    let rows: Vec<Vec<String>> = sweep
        .levels
        .iter()
        .map(|l| {
            let mut row = vec![
                l.level.to_string(),
                l.atoms.len().to_string(),
                csv12(l.mass_fraction),
                l.gap.map_or(String::new(), csv12),
                csv12(l.residual),
                l.iterations.to_string(),
            ];
            row.extend(l.panel.iter().map(|x| csv12(*x)));
            row.extend(l.support.iter().map(|x| csv12(*x)));
            row
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(&out.join("convergence.csv"), &header, &rows)?;

    let report = ConvergenceReport {
        schema_version: SCHEMA_VERSION,
        command: "convergence",
        input: &p.config,
        nest: &nest,
        sweep: &sweep,
    };
    write_json(&out.join("convergence.json"), &report)?;
    info!("sweep over {} levels: stabilized = {}", sweep.levels.len(), sweep.stabilized);
    Ok(())
}
