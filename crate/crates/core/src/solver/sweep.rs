//! Solutions for an increasing sequence of atom sets `ω₁ ⊂ ω₂ ⊂ …` and
//! the stabilization of their truncations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{sig12, sig12_vec};
use crate::geometry::cone::ConeSpec;
use crate::geometry::min_norm::hausdorff_distance;
use crate::quadrature::WeightDensity;
use crate::solver::{solve, SolveConfig, SolveTrace, TargetMeasure};

/// Number of test functions `u ↦ ⟨u, -𝔳⟩^k`, `k = 0, 1, …`, in the panel.
pub const PANEL: usize = 3;

/// Gap below which the last two levels count as stabilized.
pub const STABLE_GAP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepLevel {
    pub level: usize,
    pub atoms: Vec<usize>,
    #[serde(serialize_with = "sig12")]
    pub mass_fraction: f64,
    /// `h̄_{K_j}(u)` for every direction of the full target.
    #[serde(serialize_with = "sig12_vec")]
    pub support: Vec<f64>,
    /// `∫ f dV^Θ_{K_j}` for the test-function panel.
    #[serde(serialize_with = "sig12_vec")]
    pub panel: Vec<f64>,
    /// Hausdorff distance of the truncation to that of the previous level.
    #[serde(serialize_with = "crate::format::sig12_opt")]
    pub gap: Option<f64>,
    #[serde(serialize_with = "sig12")]
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    /// Common truncation height.
    #[serde(serialize_with = "sig12")]
    pub height: f64,
    pub levels: Vec<SweepLevel>,
    /// Gaps shrink from level to level.
    pub monotone: bool,
    /// Last gap is at most [`STABLE_GAP`].
    pub stabilized: bool,
    #[serde(skip)]
    pub traces: Vec<SolveTrace>,
}

/// Checks that each set contains the previous one.
pub fn check_nested(nest: &[Vec<usize>], atoms: usize) -> Result<()> {
    if nest.is_empty() {
        return Err(Error::EmptyOmega);
    }
    for (j, level) in nest.iter().enumerate() {
        if level.is_empty() {
            return Err(Error::EmptyOmega);
        }
        if let Some(&bad) = level.iter().find(|&&i| i >= atoms) {
            return Err(Error::InvalidInput(format!("atom index {bad} out of range")));
        }
        if j + 1 < nest.len() && !level.iter().all(|i| nest[j + 1].contains(i)) {
            return Err(Error::NotNested { level: j, next: j + 1 });
        }
    }
    Ok(())
}

/// Solves for `φ` restricted to each level of `nest` and compares the
/// truncations `K_j ∩ C⁻(t)` at one common height `t`, the largest stored
/// height among the levels.
pub fn convergence_sweep(
    cone: &ConeSpec,
    density: &WeightDensity,
    target: &TargetMeasure,
    nest: &[Vec<usize>],
    cfg: &SolveConfig,
) -> Result<SweepReport> {
    check_nested(nest, target.len())?;
    let first: f64 = nest[0].iter().map(|&i| target.masses[i]).sum();
    if !(first > 0.0) {
        return Err(Error::ZeroMeasure);
    }
    let total = target.total();
    let mut solutions = Vec::with_capacity(nest.len());
    for level in nest {
        solutions.push(solve(cone, density, &target.restrict(level), cfg)?);
    }
    let height = solutions.iter().map(|s| s.body.stored_height()).fold(0.0, f64::max);
    let truncations =
        solutions.iter().map(|s| s.body.truncate(height).map(|t| t.vertices)).collect::<Result<Vec<_>>>()?;

    let down = -cone.axis().clone();
    let mut levels = Vec::with_capacity(nest.len());
    for (j, (level, sol)) in nest.iter().zip(&solutions).enumerate() {
        let support = target.directions.iter().map(|u| sol.body.support_value(u)).collect::<Result<Vec<_>>>()?;
        let volumes: Vec<f64> = sol.target.weights.iter().map(|w| w * sol.target.total).collect();
        let panel = (0..PANEL)
            .map(|k| sol.body.normals().iter().zip(&volumes).map(|(u, v)| u.dot(&down).powi(k as i32) * v).sum())
            .collect();
        let gap = (j > 0).then(|| hausdorff_distance(&truncations[j - 1], &truncations[j]));
        levels.push(SweepLevel {
            level: j,
            atoms: level.clone(),
            mass_fraction: level.iter().map(|&i| target.masses[i]).sum::<f64>() / total,
            support,
            panel,
            gap,
            residual: sol.trace.final_residual(),
            iterations: sol.trace.records.len() - 1,
        });
    }
    let gaps: Vec<f64> = levels.iter().filter_map(|l| l.gap).collect();
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
    let stabilized = gaps.last().is_none_or(|&g| g <= STABLE_GAP);
    Ok(SweepReport { height, levels, monotone, stabilized, traces: solutions.into_iter().map(|s| s.trace).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nesting_is_checked() {
        assert!(check_nested(&[vec![0], vec![0, 1]], 2).is_ok());
        assert_eq!(check_nested(&[vec![0, 1], vec![1]], 2).unwrap_err(), Error::NotNested { level: 0, next: 1 });
        assert!(check_nested(&[vec![3]], 2).is_err());
        assert_eq!(check_nested(&[], 2).unwrap_err(), Error::EmptyOmega);
    }
}
