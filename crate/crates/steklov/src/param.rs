//! Problem families, domains and validated scalar parameters.

use crate::error::{Result, SteklovError};
use serde::{Deserialize, Serialize};

/// The four eigenvalue problems treated by this crate.
///
/// * `BsM`: fourth-order problem with fixed boundary weight `mu` on the trace;
///   the eigenvalue multiplies the normal-derivative trace.
/// * `BsL`: fixed weight `lambda` on the normal-derivative trace; the
///   eigenvalue multiplies the trace.
/// * `Dbs`: limiting problem on functions with zero trace.
/// * `Nbs`: limiting problem on functions with zero normal derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProblemKind {
    BsM,
    BsL,
    Dbs,
    Nbs,
}

impl ProblemKind {
    /// Short lowercase name used in CLI output and file headers.
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::BsM => "bsm",
            ProblemKind::BsL => "bsl",
            ProblemKind::Dbs => "dbs",
            ProblemKind::Nbs => "nbs",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bsm" => Ok(ProblemKind::BsM),
            "bsl" => Ok(ProblemKind::BsL),
            "dbs" => Ok(ProblemKind::Dbs),
            "nbs" => Ok(ProblemKind::Nbs),
            other => Err(SteklovError::InvalidParameter(format!(
                "unknown problem '{other}' (expected bsm, bsl, dbs or nbs)"
            ))),
        }
    }
}

/// Fixed spectral parameter selecting a problem family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpectralParameter {
    /// Trace weight for the `BsM` family.
    Mu(f64),
    /// Normal-derivative weight for the `BsL` family.
    Lambda(f64),
}

impl SpectralParameter {
    pub fn value(self) -> f64 {
        match self {
            SpectralParameter::Mu(v) | SpectralParameter::Lambda(v) => v,
        }
    }

    pub fn kind(self) -> ProblemKind {
        match self {
            SpectralParameter::Mu(_) => ProblemKind::BsM,
            SpectralParameter::Lambda(_) => ProblemKind::BsL,
        }
    }
}

/// Poisson-type coefficient of the interior quadratic form.
///
/// The admissible range in dimension `N` is `-1/(N-1) < sigma < 1`, which is
/// exactly the range where the form is nonnegative with kernel the affine
/// functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaParameter {
    value: f64,
    dim: u32,
}

impl SigmaParameter {
    pub fn new(value: f64, dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(SteklovError::InvalidParameter(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        let lower = -1.0 / (dim as f64 - 1.0);
        if !(value > lower && value < 1.0) || !value.is_finite() {
            return Err(SteklovError::InvalidParameter(format!(
                "sigma = {value} outside the admissible range ({lower}, 1) in dimension {dim}"
            )));
        }
        Ok(SigmaParameter { value, dim })
    }

    pub fn value(self) -> f64 {
        self.value
    }

    pub fn dim(self) -> u32 {
        self.dim
    }
}

/// Planar computational domains supported by the Galerkin discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Geometry {
    /// Unit disk centered at the origin.
    Disk,
    /// Unit square (0,1) x (0,1).
    Square,
}

impl Geometry {
    /// Perimeter of the domain boundary.
    pub fn boundary_measure(self) -> f64 {
        match self {
            Geometry::Disk => 2.0 * std::f64::consts::PI,
            Geometry::Square => 4.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Disk => "disk",
            Geometry::Square => "square",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "disk" => Ok(Geometry::Disk),
            "square" => Ok(Geometry::Square),
            other => Err(SteklovError::InvalidParameter(format!(
                "unknown geometry '{other}' (expected disk or square)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_range_depends_on_dimension() {
        assert!(SigmaParameter::new(0.0, 2).is_ok());
        assert!(SigmaParameter::new(-0.9, 2).is_ok());
        assert!(SigmaParameter::new(-0.9, 3).is_err());
        assert!(SigmaParameter::new(-0.4, 3).is_ok());
        assert!(SigmaParameter::new(1.0, 2).is_err());
        assert!(SigmaParameter::new(-1.0, 2).is_err());
        assert!(SigmaParameter::new(f64::NAN, 2).is_err());
    }

    #[test]
    fn spectral_parameter_selects_family() {
        assert_eq!(SpectralParameter::Mu(-1.0).kind(), ProblemKind::BsM);
        assert_eq!(SpectralParameter::Lambda(0.5).kind(), ProblemKind::BsL);
    }
}
