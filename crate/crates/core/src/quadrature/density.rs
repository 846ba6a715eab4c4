use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Vector;

/// Angular factor `ψ` of a homogeneous density.
#[derive(Clone)]
pub enum SphericalFactor {
    /// `ψ ≡ 1`.
    Constant,
    /// `ψ(v) = ⟨v, axis⟩^p` with `p ≥ 0`, clamped at zero outside the
    /// hemisphere of `axis`.
    AxisPower { p: f64, axis: Vector },
    /// Arbitrary positive continuous function of a unit vector.
    Custom(Arc<dyn Fn(&Vector) -> f64 + Send + Sync>),
}

impl fmt::Debug for SphericalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphericalFactor::Constant => write!(f, "Constant"),
            SphericalFactor::AxisPower { p, axis } => {
                f.debug_struct("AxisPower").field("p", p).field("axis", &axis.as_slice()).finish()
            }
            SphericalFactor::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// The density `Θ(y) = ‖y‖^{-q} ψ(y/‖y‖)` with `n - 1 < q < n`.
#[derive(Debug, Clone)]
pub struct WeightDensity {
    dim: usize,
    q: f64,
    psi: SphericalFactor,
}

impl WeightDensity {
    pub fn new(dim: usize, q: f64, psi: SphericalFactor) -> Result<Self> {
        let n = dim as f64;
        if !(q > n - 1.0 && q < n) {
            return Err(Error::InvalidExponent { q, dim });
        }
        if let SphericalFactor::AxisPower { p, axis } = &psi {
            if !(*p >= 0.0 && p.is_finite()) {
                return Err(Error::InvalidInput(format!("axis power must be nonnegative, got {p}")));
            }
            if axis.len() != dim || !(axis.norm() > 0.0) {
                return Err(Error::InvalidInput("axis of the spherical factor is invalid".into()));
            }
        }
        let psi = match psi {
            SphericalFactor::AxisPower { p, axis } => {
                let axis = &axis / axis.norm();
                SphericalFactor::AxisPower { p, axis }
            }
            other => other,
        };
        Ok(WeightDensity { dim, q, psi })
    }

    /// `Θ(y) = ‖y‖^{-q}`.
    pub fn constant(dim: usize, q: f64) -> Result<Self> {
        Self::new(dim, q, SphericalFactor::Constant)
    }

    pub fn axis_power(dim: usize, q: f64, p: f64, axis: &Vector) -> Result<Self> {
        Self::new(dim, q, SphericalFactor::AxisPower { p, axis: axis.clone() })
    }

    pub fn custom(dim: usize, q: f64, psi: impl Fn(&Vector) -> f64 + Send + Sync + 'static) -> Result<Self> {
        Self::new(dim, q, SphericalFactor::Custom(Arc::new(psi)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `n - q`, the homogeneity degree of the weighted covolume.
    pub fn degree(&self) -> f64 {
        self.dim as f64 - self.q
    }

    pub fn factor(&self) -> &SphericalFactor {
        &self.psi
    }

    /// `ψ(v)` for a unit vector `v`.
    pub fn psi(&self, v: &Vector) -> f64 {
        match &self.psi {
            SphericalFactor::Constant => 1.0,
            SphericalFactor::AxisPower { p, axis } => v.dot(axis).max(0.0).powf(*p),
            SphericalFactor::Custom(f) => f(v),
        }
    }

    /// `Θ(y)` for `y ≠ 0`.
    pub fn eval(&self, y: &Vector) -> f64 {
        let r = y.norm();
        r.powf(-self.q) * self.psi(&(y / r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector;

    #[test]
    fn exponent_range_is_enforced() {
        assert!(WeightDensity::constant(2, 1.5).is_ok());
        assert_eq!(WeightDensity::constant(2, 2.0).unwrap_err(), Error::InvalidExponent { q: 2.0, dim: 2 });
        assert!(WeightDensity::constant(3, 2.0).is_err());
        assert!(WeightDensity::constant(3, 2.5).is_ok());
    }

    #[test]
    fn homogeneity() {
        let axis = vector(&[1.0, 1.0, 1.0]);
        let d = WeightDensity::axis_power(3, 2.3, 1.5, &axis).unwrap();
        let y = vector(&[0.3, 0.9, 0.4]);
        let lam: f64 = 3.7;
        let lhs = d.eval(&(&y * lam));
        let rhs = lam.powf(-2.3) * d.eval(&y);
        assert!((lhs - rhs).abs() <= 1e-14 * rhs);
    }

    #[test]
    fn custom_factor() {
        let d = WeightDensity::custom(2, 1.5, |v| 1.0 + v[0] * v[0]).unwrap();
        assert!((d.eval(&vector(&[2.0, 0.0])) - 2f64.powf(-1.5) * 2.0).abs() < 1e-15);
        assert_eq!(format!("{:?}", d.factor()), "Custom(..)");
    }
}
