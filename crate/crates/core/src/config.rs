//! Solver tolerances and iteration caps.
//!
//! Every numeric tolerance used by the planners lives here; modules take a
//! `&SolverConfig` (or a field of it) instead of carrying their own literals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Relative tolerance on the corner/center loss balance.
    pub metric_tol: f64,
    /// Relative width at which the velocity bisection stops.
    pub v_tol: f64,
    /// Angular width (rad) at which the connecting-angle bisection stops.
    pub angle_tol: f64,
    /// Relative slack on the connector-length constraint of the radius step.
    pub feas_tol: f64,
    /// Exit-point movement (m) below which the connection sweeps stop.
    pub point_tol: f64,
    /// Relative tolerance for the non-increasing objective checks.
    pub monotonic_tol: f64,
    /// Points closer than `boundary_rel_tol * radius` to a circle count as on it.
    pub boundary_rel_tol: f64,
    /// Maximum gap (m) between consecutive path segments.
    pub contiguity_tol: f64,
    pub max_bisect_iters: usize,
    /// Inner alternations of angle and radius per connecting point.
    pub max_inner_iters: usize,
    /// Outer coordinate-descent sweeps over all connecting points.
    pub max_sweeps: usize,
    /// Largest region count ordered by exact dynamic programming.
    pub exact_order_limit: usize,
    /// Coverage-oracle grid spacing (m); `None` means scanning radius / 100.
    pub grid_step: Option<f64>,
    /// Coverage-oracle time step (s); `None` sweeps at most Φa/50 rad per step.
    pub dt: Option<f64>,
    /// Accepted relative shortfall of delivered data in the coverage oracle.
    pub rel_slack: f64,
    /// Largest relative change of min delivered data allowed when dt is halved.
    pub refinement_tol: f64,
    /// Seed for randomized checks.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            metric_tol: 1e-9,
            v_tol: 1e-9,
            angle_tol: 1e-10,
            feas_tol: 1e-12,
            point_tol: 1e-9,
            monotonic_tol: 1e-9,
            boundary_rel_tol: 1e-9,
            contiguity_tol: 1e-6,
            max_bisect_iters: 200,
            max_inner_iters: 20,
            max_sweeps: 50,
            exact_order_limit: 9,
            grid_step: None,
            dt: None,
            rel_slack: 0.01,
            refinement_tol: 0.01,
            seed: 0x15AC,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("metric_tol", self.metric_tol),
            ("v_tol", self.v_tol),
            ("angle_tol", self.angle_tol),
            ("feas_tol", self.feas_tol),
            ("point_tol", self.point_tol),
            ("monotonic_tol", self.monotonic_tol),
            ("boundary_rel_tol", self.boundary_rel_tol),
            ("contiguity_tol", self.contiguity_tol),
            ("rel_slack", self.rel_slack),
            ("refinement_tol", self.refinement_tol),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Validation(format!(
                    "solver.{name} must be positive, got {value}"
                )));
            }
        }
        for (name, value) in [("grid_step", self.grid_step), ("dt", self.dt)] {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Validation(format!(
                        "solver.{name} must be positive, got {v}"
                    )));
                }
            }
        }
        if self.max_bisect_iters == 0 || self.max_inner_iters == 0 || self.max_sweeps == 0 {
            return Err(Error::Validation(
                "solver iteration caps must be at least 1".into(),
            ));
        }
        Ok(())
    }
}
