use thiserror::Error;

/// Errors raised while building cones and pseudo-cones, integrating
/// densities, auditing bounds, or solving for a target measure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("the rays span a cone containing a line")]
    NotPointed,

    #[error("the rays span a cone of dimension {rank} < {dim}")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("axis must lie in int C with its negation in int C°; supply an explicit axis")]
    AxisInvalid,

    #[error("direction {index} is not a unit vector (norm {norm})")]
    NotUnit { index: usize, norm: f64 },

    #[error("normal {index} does not lie in the open dual region Ω_C°")]
    NormalOutsideDomain { index: usize },

    #[error("direction does not lie in the open region Ω_C")]
    DirectionOutsideOmegaC,

    #[error("direction {index} lies on the boundary of Ω_C°")]
    DirectionOnBoundary { index: usize },

    #[error("value {index} must be positive and finite, got {value}")]
    NonpositiveValue { index: usize, value: f64 },

    #[error("truncation height {height} does not exceed the minimal height {min_height}")]
    HeightTooSmall { height: f64, min_height: f64 },

    #[error("degenerate halfspace intersection: {0}")]
    DegenerateIntersection(String),

    #[error("constraint {index} does not support an (n-1)-dimensional facet")]
    InactiveConstraint { index: usize },

    #[error("q must lie in (n−1, n); got q = {q} for n = {dim}")]
    InvalidExponent { q: f64, dim: usize },

    #[error("integration domain passes within {distance} of the origin")]
    OriginTooClose { distance: f64 },

    #[error("quadrature budget exhausted after {evaluations} evaluations (error estimate {error})")]
    BudgetExceeded { evaluations: usize, error: f64 },

    #[error("integration region is empty")]
    EmptyRegion,

    #[error("direction set ω is empty")]
    EmptyOmega,

    #[error("target measure has no positive mass")]
    ZeroMeasure,

    #[error("direction sets are not nested: level {level} is not contained in level {next}")]
    NotNested { level: usize, next: usize },

    #[error("solver did not reach the residual tolerance in {iterations} iterations (residual {residual})")]
    MaxIterations { iterations: usize, residual: f64, residual_history: Vec<f64> },

    #[error("line search stalled at iteration {iteration} (residual {residual})")]
    LineSearchStalled { iteration: usize, residual: f64 },

    #[error("origin distance {distance} left the corridor ({lower}, {upper})")]
    CorridorViolation { distance: f64, lower: f64, upper: f64 },

    #[error("facet vertex of norm {norm} escapes the containment radius {radius}")]
    ContainmentViolation { norm: f64, radius: f64 },

    #[error("analytic gradient disagrees with finite differences in coordinate {index}: {analytic} vs {numeric}")]
    GradientMismatch { index: usize, analytic: f64, numeric: f64 },
}

impl Error {
    /// True for failures that indicate an internal inconsistency rather than
    /// bad input or a slow solve.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::CorridorViolation { .. }
                | Error::ContainmentViolation { .. }
                | Error::GradientMismatch { .. }
                | Error::DegenerateIntersection(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
