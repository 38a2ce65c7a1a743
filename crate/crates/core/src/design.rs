//! Coupler design objective: distance to a target coupling plus linear
//! penalties for leaving the allowed impedance window.
//!
//! A position is a `(w, s, h)` triple. Its cost is
//!
//! ```text
//! cost = |coupling - target| + weight * (max(0, z_min - zoo) + max(0, zoe - z_max))
//! ```
//!
//! so the cost equals the raw coupling error whenever both mode impedances
//! sit inside the open window `(z_min, z_max)`. Geometries the model rejects
//! map to a large finite sentinel instead of an error, keeping the objective
//! total over any bounded search space. Because the model sees only the
//! ratios `w/h` and `s/h`, the cost is scale invariant and every solution
//! comes with a whole family of equally good scaled siblings.

use serde::Serialize;
use thiserror::Error;

use crate::bat::{Objective, SearchSpace};
use crate::microstrip::{analyze, CouplerAnalysis, CouplerGeometry};

/// Cost assigned to geometries the analysis chain rejects.
pub const ANALYSIS_FAILURE_COST: f64 = 1e6;

/// Invalid design-target configuration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid design spec: {0}")]
pub struct DesignError(String);

/// Target and constraints of one coupler design problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignSpec {
    /// Desired coupling coefficient, in (0, 1).
    pub target_coupling: f64,
    /// Substrate dielectric constant, in (1, 6).
    pub eps_r: f64,
    /// Lower edge of the allowed impedance window in ohms.
    pub z_min: f64,
    /// Upper edge of the allowed impedance window in ohms.
    pub z_max: f64,
    /// Weight of the linear window-violation penalties.
    pub penalty_weight: f64,
    /// Search bounds over `(w, s, h)`; all bounds must be positive.
    #[serde(skip)]
    pub bounds: SearchSpace,
}

impl Default for DesignSpec {
    fn default() -> Self {
        Self {
            target_coupling: 0.2,
            eps_r: 3.9,
            z_min: 20.0,
            z_max: 75.0,
            penalty_weight: 10.0,
            bounds: SearchSpace::cube(0.5, 20.0, 3).expect("static default bounds are valid"),
        }
    }
}

impl DesignSpec {
    /// Checks every documented field range, including that the bounds form a
    /// positive three-dimensional box.
    pub fn validate(&self) -> Result<(), DesignError> {
        if !(self.target_coupling > 0.0 && self.target_coupling < 1.0) {
            return Err(DesignError(format!(
                "target coupling must lie in (0, 1), got {}",
                self.target_coupling
            )));
        }
        if !(self.eps_r > 1.0 && self.eps_r < 6.0) {
            return Err(DesignError(format!(
                "dielectric constant must lie in (1, 6), got {}",
                self.eps_r
            )));
        }
        if !(self.z_min > 0.0 && self.z_min < self.z_max && self.z_max.is_finite()) {
            return Err(DesignError(format!(
                "impedance window needs 0 < z_min < z_max, got [{}, {}]",
                self.z_min, self.z_max
            )));
        }
        if !(self.penalty_weight.is_finite() && self.penalty_weight > 0.0) {
            return Err(DesignError(format!(
                "penalty weight must be positive, got {}",
                self.penalty_weight
            )));
        }
        if self.bounds.dims() != 3 {
            return Err(DesignError(format!(
                "bounds must cover (w, s, h), got {} dimensions",
                self.bounds.dims()
            )));
        }
        if self.bounds.lower().iter().any(|lo| *lo <= 0.0) {
            return Err(DesignError(
                "bounds must keep all dimensions positive".into(),
            ));
        }
        Ok(())
    }
}

/// True when both mode impedances sit strictly inside the window.
///
/// `zoo < zoe` always holds, so checking `z_min < zoo` and `zoe < z_max`
/// covers both ends for both impedances.
pub fn feasible(analysis: &CouplerAnalysis, spec: &DesignSpec) -> bool {
    spec.z_min < analysis.zoo && analysis.zoe < spec.z_max
}

/// Penalized cost of one `(w, s, h)` position.
///
/// Total over all inputs: degenerate geometries cost
/// [`ANALYSIS_FAILURE_COST`] instead of raising.
pub fn cost(position: &[f64], spec: &DesignSpec) -> f64 {
    debug_assert_eq!(position.len(), 3, "a design position is (w, s, h)");
    let analysis = CouplerGeometry::new(position[0], position[1], position[2], spec.eps_r)
        .and_then(|geometry| analyze(&geometry));
    match analysis {
        Err(_) => ANALYSIS_FAILURE_COST,
        Ok(a) => {
            let below = (spec.z_min - a.zoo).max(0.0);
            let above = (a.zoe - spec.z_max).max(0.0);
            (a.coupling - spec.target_coupling).abs() + spec.penalty_weight * (below + above)
        }
    }
}

/// The design cost packaged as an optimizer objective.
#[derive(Debug, Clone)]
pub struct CouplerObjective {
    spec: DesignSpec,
}

impl CouplerObjective {
    /// Validates `spec` and wraps it.
    pub fn new(spec: DesignSpec) -> Result<Self, DesignError> {
        spec.validate()?;
        Ok(Self { spec })
    }

    /// The wrapped design spec.
    pub fn spec(&self) -> &DesignSpec {
        &self.spec
    }
}

impl Objective for CouplerObjective {
    fn dims(&self) -> usize {
        3
    }

    fn evaluate(&self, position: &[f64]) -> f64 {
        cost(position, &self.spec)
    }
}
