//! Two-phase mission: one revolution over the whole scanning area, then a
//! tour over the building circles joined by straight connectors.

use std::f64::consts::TAU;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::geometry::{tour_length, Arc, Line, PathSegment, Point2D};
use crate::linkbudget::LinkParams;
use crate::single_circle::{solve_velocity, SingleCirclePlan, VelocityLimit};

use super::connect::{ConnectState, RegionSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MissionSegment {
    Arc {
        arc: Arc,
        angular_velocity: f64,
        /// Index into the region list; `None` for the scanning-area circle.
        region: Option<usize>,
    },
    Line { line: Line, speed: f64 },
}

impl MissionSegment {
    pub fn path(&self) -> PathSegment {
        match self {
            MissionSegment::Arc { arc, .. } => PathSegment::Arc(*arc),
            MissionSegment::Line { line, .. } => PathSegment::Line(*line),
        }
    }

    pub fn duration(&self) -> f64 {
        match self {
            MissionSegment::Arc { arc, angular_velocity, .. } => arc.sweep / angular_velocity,
            MissionSegment::Line { line, speed } => {
                let length = line.length();
                if length == 0.0 {
                    0.0
                } else {
                    length / speed
                }
            }
        }
    }

    pub fn speed_is_positive(&self) -> bool {
        match self {
            MissionSegment::Arc { angular_velocity, .. } => *angular_velocity > 0.0,
            MissionSegment::Line { speed, .. } => *speed > 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionTiming {
    pub region: usize,
    pub radius: f64,
    pub angular_velocity: f64,
    pub traversal_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionPlan {
    pub segments: Vec<MissionSegment>,
    pub total_time: f64,
    pub per_region: Vec<RegionTiming>,
}

impl MissionPlan {
    /// One full revolution of a single-circle plan starting at polar angle 0.
    pub fn from_single(plan: &SingleCirclePlan) -> Self {
        let arc = Arc::full(plan.region.with_radius(plan.r_u), 0.0);
        let segment = MissionSegment::Arc {
            arc,
            angular_velocity: plan.angular_velocity,
            region: None,
        };
        MissionPlan {
            total_time: segment.duration(),
            segments: vec![segment],
            per_region: Vec::new(),
        }
    }

    /// Rebuilds the total from segment durations.
    pub fn recompute_total(&mut self) {
        self.total_time = self.segments.iter().map(MissionSegment::duration).sum();
    }

    pub fn path(&self) -> Vec<PathSegment> {
        self.segments.iter().map(MissionSegment::path).collect()
    }

    pub fn path_length(&self, contiguity_tol: f64) -> Result<f64> {
        tour_length(&self.path(), contiguity_tol)
    }
}

/// Joins the scanning-area revolution and the region tour into one
/// contiguous path. The big circle is left at the point facing the first
/// region; connectors are flown at the linear speed limit.
pub fn assemble_mission(
    big: &SingleCirclePlan,
    regions: &[RegionSpec],
    state: &ConnectState,
    params: &LinkParams,
    vlim: &VelocityLimit,
    cfg: &SolverConfig,
) -> Result<MissionPlan> {
    if state.order.len() != state.exit_points.len() || state.order.len() != state.radii.len() {
        return Err(Error::Validation("connection state lengths disagree".into()));
    }
    let big_circle = big.region.with_radius(big.r_u);
    let entry_angle = state
        .order
        .first()
        .map(|&i| regions[i].circle.center - big_circle.center)
        .filter(|d| d.norm() > crate::geometry::DEGENERATE_DISTANCE)
        .map_or(0.0, Point2D::angle);
    let mut segments = vec![MissionSegment::Arc {
        arc: Arc::full(big_circle, entry_angle),
        angular_velocity: big.angular_velocity,
        region: None,
    }];
    let mut per_region = Vec::with_capacity(state.order.len());
    let mut cursor = big_circle.point_at(entry_angle);
    for (k, &i) in state.order.iter().enumerate() {
        let region = &regions[i];
        let exit = state.exit_points[k];
        let r = state.radii[k];
        segments.push(MissionSegment::Line {
            line: Line { from: cursor, to: exit },
            speed: vlim.linear_max,
        });
        let circle = region.circle.with_radius(r);
        let v = solve_velocity(r, &region.coverage(), region.r_th, params, vlim, cfg)?;
        segments.push(MissionSegment::Arc {
            arc: Arc::full(circle, circle.angle_of(exit)),
            angular_velocity: v,
            region: Some(i),
        });
        per_region.push(RegionTiming {
            region: i,
            radius: r,
            angular_velocity: v,
            traversal_time: TAU / v,
        });
        cursor = exit;
    }
    let mut plan = MissionPlan {
        segments,
        total_time: 0.0,
        per_region,
    };
    plan.path_length(cfg.contiguity_tol)?;
    plan.recompute_total();
    Ok(plan)
}
