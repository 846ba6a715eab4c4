//! Solver for the weighted cone-volume Minkowski problem with atomic data.
//!
//! For a target `φ = Σ φ_i δ_{u_i}` the solver maximizes the scale-invariant
//! log-objective
//!
//! ```text
//! G(f) = Σ φ̂_i log f_i - log V_Θ([f]) / (n - q)
//! ```
//!
//! over support values `f > 0`, with `φ̂ = φ/φ(ϖ)`. Its stationarity condition
//! is `V^Θ_{[f]}({u_i}) = φ̂_i V_Θ([f])`, so after normalizing to `V_Θ = 1` the
//! residual `max_i |V^Θ_i - φ̂_i|` certifies the solution. A final dilation by
//! `φ(ϖ)^{1/(n-q)}` restores the total mass.

pub mod sweep;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig12;
use crate::geometry::cone::{ConeSpec, TOL};
use crate::geometry::pseudo_cone::PseudoCone;
use crate::linalg::Vector;
use crate::measures::{evaluate, weighted_covolume, weighted_surface_areas, MeasureReport, Route};
use crate::quadrature::{spherical_factor_integral, QuadratureSettings, WeightDensity};
use nalgebra::{DMatrix, DVector};

pub use sweep::{check_nested, convergence_sweep, SweepLevel, SweepReport};

/// A finite atomic measure `Σ φ_i δ_{u_i}` on `Ω_{C°}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetMeasure {
    pub directions: Vec<Vector>,
    pub masses: Vec<f64>,
}

impl TargetMeasure {
    pub fn new(directions: Vec<Vector>, masses: Vec<f64>) -> Result<Self> {
        if directions.len() != masses.len() {
            return Err(Error::InvalidInput(format!("{} directions but {} masses", directions.len(), masses.len())));
        }
        Ok(TargetMeasure { directions, masses })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// The atoms with the given indices.
    pub fn restrict(&self, atoms: &[usize]) -> Self {
        TargetMeasure {
            directions: atoms.iter().map(|&i| self.directions[i].clone()).collect(),
            masses: atoms.iter().map(|&i| self.masses[i]).collect(),
        }
    }
}

/// A target with zero atoms removed and masses scaled to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedTarget {
    pub directions: Vec<Vector>,
    pub weights: Vec<f64>,
    pub total: f64,
    /// Index in the original target of each kept atom.
    pub kept: Vec<usize>,
}

/// Drops zero-mass atoms (with a warning) and normalizes the rest.
pub fn normalize_target(cone: &ConeSpec, target: &TargetMeasure) -> Result<NormalizedTarget> {
    let mut directions = Vec::new();
    let mut masses = Vec::new();
    let mut kept = Vec::new();
    for (i, (u, &m)) in target.directions.iter().zip(&target.masses).enumerate() {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::NonpositiveValue { index: i, value: m });
        }
        cone.check_dim(u)?;
        let norm = u.norm();
        if (norm - 1.0).abs() > TOL {
            return Err(Error::NotUnit { index: i, norm });
        }
        if !cone.in_dual_interior(u) {
            return Err(Error::DirectionOnBoundary { index: i });
        }
        if m == 0.0 {
            warn!("dropping atom {i} with zero mass");
            continue;
        }
        directions.push(u / norm);
        masses.push(m);
        kept.push(i);
    }
    let total: f64 = masses.iter().sum();
    if masses.is_empty() || !(total > 0.0) {
        return Err(Error::ZeroMeasure);
    }
    let weights = masses.iter().map(|m| m / total).collect();
    Ok(NormalizedTarget { directions, weights, total, kept })
}

/// `G(f)` and `∂G/∂f_i = φ̂_i/f_i - S^Θ_i / ((n - q) V_Θ)`.
pub fn objective_gradient(
    cone: &ConeSpec,
    density: &WeightDensity,
    normals: &[Vector],
    f: &[f64],
    weights: &[f64],
    tol: f64,
) -> Result<(f64, Vec<f64>)> {
    let k = PseudoCone::wulff(cone, normals, f)?;
    let s = weighted_surface_areas(&k, density, tol)?;
    let deg = density.degree();
    let h = k.support_magnitudes();
    let v: f64 = s.iter().zip(h).map(|(s, h)| h * s.value / deg).sum();
    let g = weights.iter().zip(f).map(|(w, f)| w * f.ln()).sum::<f64>() - v.ln() / deg;
    let grad = (0..f.len()).map(|i| weights[i] / f[i] - s[i].value / (deg * v)).collect();
    Ok((g, grad))
}

/// Largest spread `max_i d_i - min_i d_i` of a full step in `log f`.
const MAX_LOG_STEP: f64 = 20.0;

/// Settings of [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    pub max_iterations: usize,
    /// Tolerance on `max_i |V^Θ_i - φ̂_i|`.
    pub residual_tol: f64,
    /// Initial step `γ ∈ (0, 1]` of the line search.
    pub damping: f64,
    /// Factor by which a rejected step is shortened.
    pub backtrack: f64,
    /// Sufficient-increase constant of the line search.
    pub armijo: f64,
    /// Absolute tolerance of the facet integrals inside the loop.
    pub quadrature_tol: f64,
    /// Lower bound on the support values.
    pub floor: f64,
    /// Compare the gradient with central differences every this many
    /// iterations; zero disables the check.
    pub gradient_check_every: usize,
    /// Relative step of the finite-difference check.
    pub gradient_check_step: f64,
    /// Relative tolerance of the finite-difference check.
    pub gradient_check_tol: f64,
    /// Samples for the corridor constants when `n ≥ 3`.
    pub corridor_samples: usize,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_iterations: 500,
            residual_tol: 1e-8,
            damping: 0.5,
            backtrack: 0.5,
            armijo: 1e-4,
            quadrature_tol: 1e-11,
            floor: 1e-12,
            gradient_check_every: 0,
            gradient_check_step: 1e-5,
            gradient_check_tol: 1e-3,
            corridor_samples: 1_000_000,
            seed: 42,
        }
    }
}

impl SolveConfig {
    fn validate(&self) -> Result<()> {
        let positive = [self.residual_tol, self.backtrack, self.armijo, self.quadrature_tol, self.floor];
        if self.max_iterations == 0
            || positive.iter().any(|x| !(*x > 0.0))
            || !(self.damping > 0.0 && self.damping <= 1.0)
            || self.backtrack >= 1.0
        {
            return Err(Error::InvalidInput("solver settings must be positive with damping in (0, 1]".into()));
        }
        Ok(())
    }
}

/// One accepted iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    /// `G` at the accepted point.
    #[serde(serialize_with = "sig12")]
    pub objective: f64,
    #[serde(serialize_with = "sig12")]
    pub residual: f64,
    /// `b(K)` of the normalized iterate.
    #[serde(serialize_with = "sig12")]
    pub origin_distance: f64,
    /// `V_Θ([f])` before normalization.
    #[serde(serialize_with = "sig12")]
    pub covolume: f64,
    /// Accepted step length (zero for the initial point).
    #[serde(serialize_with = "sig12")]
    pub step: f64,
    pub backtracks: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    LineSearchStalled,
}

/// The bounds `lower < b(K) < upper` on the origin distance of every
/// normalized iterate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corridor {
    #[serde(serialize_with = "sig12")]
    pub lower: f64,
    #[serde(serialize_with = "sig12")]
    pub upper: f64,
}

impl Corridor {
    /// With `b(K) = 1` every facet with normal in `ϖ` lies in `R Bⁿ`,
    /// `R = 1/sin Δ(ϖ)`, so `1 = V_Θ < b^{n-q} H^n_Θ(C ∩ R Bⁿ)`. Conversely
    /// `C ∩ b Bⁿ ⊂ C∖K` gives `H^n_Θ(C ∩ b Bⁿ) < 1`. Monte Carlo values of
    /// `∫ψ` are widened by three standard errors in the safe direction.
    pub fn new(
        cone: &ConeSpec,
        density: &WeightDensity,
        normals: &[Vector],
        settings: &QuadratureSettings,
    ) -> Result<Self> {
        let delta = normals.iter().map(|u| cone.boundary_distance(u)).fold(f64::INFINITY, f64::min);
        let psi = spherical_factor_integral(cone, density, settings)?;
        let widen = if cone.dim() == 2 { psi.error_estimate } else { 3.0 * psi.error_estimate };
        let (hi, lo) = (psi.value + widen, (psi.value - widen).max(f64::MIN_POSITIVE));
        let deg = density.degree();
        let radius = 1.0 / delta.sin();
        let c = radius.powf(deg) / deg * hi;
        Ok(Corridor { lower: (1.0 / c).powf(1.0 / deg), upper: (deg / lo).powf(1.0 / deg) })
    }

    pub fn contains(&self, b: f64) -> bool {
        b > self.lower && b < self.upper
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveTrace {
    pub records: Vec<TraceRecord>,
    pub status: SolveStatus,
    pub corridor: Corridor,
    /// Dilation factor `φ(ϖ)^{1/(n-q)}` applied to the normalized solution.
    #[serde(serialize_with = "sig12")]
    pub dilation: f64,
}

impl SolveTrace {
    pub fn final_residual(&self) -> f64 {
        self.records.last().map(|r| r.residual).unwrap_or(f64::INFINITY)
    }
}

/// Outcome of [`solve_with_status`].
#[derive(Debug, Clone)]
pub struct Solution {
    /// The solution `K` (dilated to carry the full target mass).
    pub body: PseudoCone,
    pub trace: SolveTrace,
    pub target: NormalizedTarget,
}

/// A normalized iterate with `V_Θ([f]) = 1`.
struct Iterate {
    x: Vec<f64>,
    body: PseudoCone,
    /// `V^Θ_i` after normalization.
    volumes: Vec<f64>,
    /// Relative error estimate of the covolume.
    noise: f64,
    covolume: f64,
    objective: f64,
    grad: Vec<f64>,
}

struct Problem<'a> {
    cone: &'a ConeSpec,
    density: &'a WeightDensity,
    target: &'a NormalizedTarget,
    cfg: &'a SolveConfig,
}

impl Problem<'_> {
    fn evaluate(&self, x: &[f64]) -> Result<Iterate> {
        let floor = self.cfg.floor.ln();
        let x: Vec<f64> = x.iter().map(|&xi| xi.max(floor)).collect();
        let f: Vec<f64> = x.iter().map(|xi| xi.exp()).collect();
        let body = PseudoCone::wulff(self.cone, &self.target.directions, &f)?;
        let s = weighted_surface_areas(&body, self.density, self.cfg.quadrature_tol)?;
        let deg = self.density.degree();
        let h = body.support_magnitudes();
        let volumes: Vec<f64> = s.iter().zip(h).map(|(s, h)| h * s.value / deg).collect();
        let errors: f64 = s.iter().zip(h).map(|(s, h)| h * s.error_estimate / deg).sum();
        let covolume: f64 = volumes.iter().sum();

        // Rescale to V_Θ = 1; G is unchanged.
        let shift = -covolume.ln() / deg;
        let lambda = shift.exp();
        let x: Vec<f64> = x.iter().map(|xi| xi + shift).collect();
        let body = body.dilate(lambda);
        let volumes: Vec<f64> = volumes.iter().map(|v| v / covolume).collect();
        let objective = self.target.weights.iter().zip(&x).map(|(w, xi)| w * xi).sum();
        let grad = self.target.weights.iter().zip(&volumes).map(|(w, v)| w - v).collect();
        Ok(Iterate { x, body, volumes, noise: errors / covolume, covolume, objective, grad })
    }

    /// Central differences of `V_Θ([f])` against `S^Θ_i` at a normalized
    /// iterate, where `∂V_Θ/∂f_i = S^Θ_i`.
    fn check_gradient(&self, it: &Iterate) -> Result<()> {
        let f: Vec<f64> = it.x.iter().map(|x| x.exp()).collect();
        let deg = self.density.degree();
        let tol = self.cfg.quadrature_tol;
        for i in 0..f.len() {
            if !it.body.is_active(i) {
                continue;
            }
            let analytic = it.volumes[i] * deg / f[i];
            let h = self.cfg.gradient_check_step * f[i];
            let mut plus = f.clone();
            let mut minus = f.clone();
            plus[i] += h;
            minus[i] -= h;
            let kp = PseudoCone::wulff(self.cone, &self.target.directions, &plus)?;
            let km = PseudoCone::wulff(self.cone, &self.target.directions, &minus)?;
            if kp.active() != it.body.active() || km.active() != it.body.active() {
                // The covolume has a kink between the two points.
                continue;
            }
            let vp = weighted_covolume(&kp, self.density, tol)?;
            let vm = weighted_covolume(&km, self.density, tol)?;
            let numeric = (vp.value - vm.value) / (2.0 * h);
            if (numeric - analytic).abs() > self.cfg.gradient_check_tol * analytic.abs() {
                return Err(Error::GradientMismatch { index: i, analytic, numeric });
            }
        }
        Ok(())
    }
}

fn active_set(it: &Iterate) -> Vec<bool> {
    (0..it.x.len()).map(|i| it.body.is_active(i)).collect()
}

/// Inverse-curvature estimate for the ascent, built by BFGS updates from
/// successive gradients and started from the diagonal
/// `1/((n - q) max(φ̂_i, V^Θ_i))`.
struct Metric {
    inverse: DMatrix<f64>,
    updates: usize,
}

impl Metric {
    fn new(it: &Iterate, weights: &[f64], deg: f64) -> Self {
        let diag = DVector::from_iterator(
            weights.len(),
            weights.iter().zip(&it.volumes).map(|(w, v)| 1.0 / (deg * w.max(*v))),
        );
        Metric { inverse: DMatrix::from_diagonal(&diag), updates: 0 }
    }

    fn direction(&self, grad: &[f64]) -> Vec<f64> {
        (&self.inverse * DVector::from_column_slice(grad)).iter().copied().collect()
    }

    /// Update from `it` to `next`; skipped unless the curvature pair is
    /// strictly positive. Steps are taken modulo the scaling direction.
    fn update(&mut self, it: &Iterate, next: &Iterate) {
        let m = it.x.len();
        let mut s = DVector::from_fn(m, |i, _| next.x[i] - it.x[i]);
        let mean = s.mean();
        s.add_scalar_mut(-mean);
        let y = DVector::from_fn(m, |i, _| it.grad[i] - next.grad[i]);
        let sy = s.dot(&y);
        if !(sy > 1e-12 * s.norm() * y.norm()) {
            return;
        }
        let rho = 1.0 / sy;
        let left = DMatrix::identity(m, m) - rho * &s * y.transpose();
        self.inverse = &left * &self.inverse * left.transpose() + rho * &s * s.transpose();
        self.updates += 1;
    }
}

fn residual(it: &Iterate) -> f64 {
    it.grad.iter().fold(0.0, |a: f64, g| a.max(g.abs()))
}

/// Runs the ascent and reports how it ended. Geometry, quadrature and
/// runtime-check failures are errors; running out of iterations or line
/// search is recorded in the status.
pub fn solve_with_status(
    cone: &ConeSpec,
    density: &WeightDensity,
    target: &TargetMeasure,
    cfg: &SolveConfig,
) -> Result<Solution> {
    run(cone, density, target, cfg, None)
}

/// [`solve_with_status`] started from the support values `initial`, one per
/// atom of `target`, instead of the uniform start.
pub fn solve_from(
    cone: &ConeSpec,
    density: &WeightDensity,
    target: &TargetMeasure,
    cfg: &SolveConfig,
    initial: &[f64],
) -> Result<Solution> {
    if initial.len() != target.len() {
        return Err(Error::InvalidInput("one initial value per atom is required".into()));
    }
    if let Some(i) = initial.iter().position(|f| !(*f > 0.0 && f.is_finite())) {
        return Err(Error::NonpositiveValue { index: i, value: initial[i] });
    }
    run(cone, density, target, cfg, Some(initial))
}

fn run(
    cone: &ConeSpec,
    density: &WeightDensity,
    target: &TargetMeasure,
    cfg: &SolveConfig,
    initial: Option<&[f64]>,
) -> Result<Solution> {
    cfg.validate()?;
    if density.dim() != cone.dim() {
        return Err(Error::InvalidInput("density and cone dimensions differ".into()));
    }
    let target = normalize_target(cone, target)?;
    let settings = QuadratureSettings { tol: 1e-12, samples: cfg.corridor_samples, seed: cfg.seed };
    let corridor = Corridor::new(cone, density, &target.directions, &settings)?;
    let problem = Problem { cone, density, target: &target, cfg };
    let deg = density.degree();
    let m = target.weights.len();

    let start: Vec<f64> = match initial {
        Some(f) => target.kept.iter().map(|&i| f[i].ln()).collect(),
        None => vec![0.0; m],
    };
    let mut it = problem.evaluate(&start)?;
    let mut records = Vec::new();
    let mut status = SolveStatus::MaxIterations;
    let mut metric = Metric::new(&it, &target.weights, deg);
    let mut step = 0.0;
    let mut backtracks = 0;
    for iteration in 0..=cfg.max_iterations {
        let b = it.body.origin_distance();
        if !corridor.contains(b) {
            return Err(Error::CorridorViolation { distance: b, lower: corridor.lower, upper: corridor.upper });
        }
        let res = residual(&it);
        records.push(TraceRecord {
            iteration,
            objective: it.objective,
            residual: res,
            origin_distance: b,
            covolume: it.covolume,
            step,
            backtracks,
        });
        debug!("iteration {iteration}: G = {:.15}, residual = {res:.3e}, step = {step:.3e}", it.objective);
        if cfg.gradient_check_every > 0 && iteration % cfg.gradient_check_every == 0 {
            problem.check_gradient(&it)?;
        }
        if res <= cfg.residual_tol {
            status = SolveStatus::Converged;
            break;
        }
        if iteration == cfg.max_iterations {
            break;
        }

        let mut d = metric.direction(&it.grad);
        let mut slope: f64 = d.iter().zip(&it.grad).map(|(d, g)| d * g).sum();
        if !(slope > 0.0) {
            metric = Metric::new(&it, &target.weights, deg);
            d = metric.direction(&it.grad);
            slope = d.iter().zip(&it.grad).map(|(d, g)| d * g).sum();
        }
        let reach =
            d.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - d.iter().cloned().fold(f64::INFINITY, f64::min);
        if reach > MAX_LOG_STEP {
            let scale = MAX_LOG_STEP / reach;
            d.iter_mut().for_each(|di| *di *= scale);
            slope *= scale;
        }
        let allowance = 4.0 * it.noise / deg + 1e-14 * (1.0 + it.objective.abs());
        let mut trial = if metric.updates == 0 { cfg.damping } else { 1.0 };
        backtracks = 0;
        let accepted = loop {
            let x: Vec<f64> = it.x.iter().zip(&d).map(|(x, d)| x + trial * d).collect();
            match problem.evaluate(&x) {
                Ok(next) => {
                    let gain = cfg.armijo * trial * slope;
                    let ok = if gain > allowance {
                        next.objective >= it.objective + gain - allowance
                    } else {
                        let ahead: f64 = d.iter().zip(&next.grad).map(|(d, g)| d * g).sum();
                        ahead >= -(1.0 - 2.0 * cfg.armijo) * slope && next.objective >= it.objective - allowance
                    };
                    if ok {
                        break Some(next);
                    }
                }
                Err(
                    e
                    @ (Error::DegenerateIntersection(_) | Error::OriginTooClose { .. } | Error::BudgetExceeded { .. }),
                ) => {
                    debug!("rejected trial step {trial:.3e}: {e}");
                }
                Err(e) => return Err(e),
            }
            trial *= cfg.backtrack;
            backtracks += 1;
            if trial < 1e-12 {
                break None;
            }
        };
        match accepted {
            Some(next) => {
                step = trial;
                if active_set(&next) != active_set(&it) {
                    metric = Metric::new(&next, &target.weights, deg);
                } else {
                    metric.update(&it, &next);
                }
                it = next;
            }
            None => {
                status = SolveStatus::LineSearchStalled;
                break;
            }
        }
    }

    let dilation = target.total.powf(1.0 / deg);
    let body = it.body.dilate(dilation);
    Ok(Solution { body, trace: SolveTrace { records, status, corridor, dilation }, target })
}

/// Solves `V^Θ_K = φ`, failing unless the residual tolerance is reached.
pub fn solve(cone: &ConeSpec, density: &WeightDensity, target: &TargetMeasure, cfg: &SolveConfig) -> Result<Solution> {
    let sol = solve_with_status(cone, density, target, cfg)?;
    let residual = sol.trace.final_residual();
    match sol.trace.status {
        SolveStatus::Converged => Ok(sol),
        SolveStatus::MaxIterations => Err(Error::MaxIterations {
            iterations: sol.trace.records.len() - 1,
            residual,
            residual_history: sol.trace.records.iter().map(|r| r.residual).collect(),
        }),
        SolveStatus::LineSearchStalled => {
            Err(Error::LineSearchStalled { iteration: sol.trace.records.len() - 1, residual })
        }
    }
}

impl Solution {
    /// Measure report of the solution with target masses and residuals
    /// attached, in the order of the kept atoms.
    pub fn report(
        &self,
        density: &WeightDensity,
        settings: &QuadratureSettings,
        routes: &[Route],
    ) -> Result<MeasureReport> {
        let masses: Vec<f64> = self.target.weights.iter().map(|w| w * self.target.total).collect();
        Ok(evaluate(&self.body, density, settings, routes)?.with_target(&masses))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cone::orthant;
    use crate::linalg::vector;
    use std::f64::consts::FRAC_PI_8;

    #[test]
    fn normalization() {
        let c = orthant(2);
        let u = -c.axis().clone();
        let t = TargetMeasure::new(vec![u.clone(), u.clone()], vec![2.0, 3.0]).unwrap();
        let n = normalize_target(&c, &t).unwrap();
        assert_eq!(n.weights, vec![0.4, 0.6]);
        assert_eq!(n.total, 5.0);
        let t = TargetMeasure::new(vec![u.clone(), u.clone()], vec![1.0, 0.0]).unwrap();
        let n = normalize_target(&c, &t).unwrap();
        assert_eq!(n.kept, vec![0]);
        assert_eq!(n.total, 1.0);
        let t = TargetMeasure::new(vec![], vec![]).unwrap();
        assert_eq!(normalize_target(&c, &t).unwrap_err(), Error::ZeroMeasure);
    }

    #[test]
    fn single_atom_gradient_vanishes() {
        let c = orthant(2);
        let d = WeightDensity::constant(2, 1.5).unwrap();
        let (_, g) = objective_gradient(&c, &d, &[-c.axis().clone()], &[3.0], &[1.0], 1e-12).unwrap();
        assert!(g[0].abs() < 1e-12);
    }

    #[test]
    fn inactive_coordinate_pushes_up() {
        let c = orthant(2);
        let d = WeightDensity::constant(2, 1.5).unwrap();
        let u = vector(&[-FRAC_PI_8.cos(), -FRAC_PI_8.sin()]);
        let f = [1.0, 0.5];
        let (_, g) = objective_gradient(&c, &d, &[-c.axis().clone(), u], &f, &[0.5, 0.5], 1e-12).unwrap();
        assert!((g[1] - 0.5 / 0.5).abs() < 1e-12);
    }

    #[test]
    fn objective_is_scale_invariant() {
        let c = orthant(2);
        let d = WeightDensity::constant(2, 1.5).unwrap();
        let normals = [-c.axis().clone(), vector(&[-FRAC_PI_8.cos(), -FRAC_PI_8.sin()])];
        let (g1, _) = objective_gradient(&c, &d, &normals, &[1.0, 0.9], &[0.3, 0.7], 1e-12).unwrap();
        let (g2, _) = objective_gradient(&c, &d, &normals, &[2.0, 1.8], &[0.3, 0.7], 1e-12).unwrap();
        assert!((g1 - g2).abs() < 1e-10);
    }

    #[test]
    fn converges_for_two_atoms() {
        let c = orthant(2);
        let d = WeightDensity::constant(2, 1.5).unwrap();
        let normals = vec![-c.axis().clone(), vector(&[-FRAC_PI_8.cos(), -FRAC_PI_8.sin()])];
        let t = TargetMeasure::new(normals, vec![1.0, 2.0]).unwrap();
        let cfg = SolveConfig { gradient_check_every: 5, ..SolveConfig::default() };
        let sol = solve(&c, &d, &t, &cfg).unwrap();
        assert_eq!(sol.trace.status, SolveStatus::Converged);
        assert!(sol.trace.records.len() < 40, "{}", sol.trace.records.len());
        let report = sol.report(&d, &QuadratureSettings::default(), &[]).unwrap();
        assert!(report.max_abs_residual().unwrap() < 1e-7);
    }
}
