//! Single circular trajectory: loss-balancing radius, largest feasible
//! angular velocity, and the savings of the balanced radius over `R/2`.
//!
//! The UAV flies a circle of radius `r_u` about the region center with
//! constant angular velocity `v`. Every ground point in the conic footprint
//! stays in the beam for at least `Φa/v` seconds while its rate is at least
//! the rate at the footprint's worst corner, so the delivered data is
//! bounded below by `(Φa/v)·B·SE(corner)`. Meeting the threshold with
//! equality gives the velocity; the radius is chosen where the corner and
//! center losses balance.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::geometry::{Circle, Point2D};
use crate::linkbudget::{
    corner_distance, loss_metric, spectral_efficiency_from_metric, worst_corner_offset,
    worst_point_loss_metric, LinkParams, MetricTarget,
};

/// A circular area served by one trajectory. `indoor` selects the
/// penetration loss applied to its worst point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageRegion {
    pub circle: Circle,
    pub indoor: bool,
}

impl CoverageRegion {
    pub fn new(circle: Circle, indoor: bool) -> Self {
        CoverageRegion { circle, indoor }
    }
}

/// Maximum linear speed of the UAV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VelocityLimit {
    pub linear_max: f64,
}

impl VelocityLimit {
    pub const MPH_TO_M_S: f64 = 0.44704;

    pub fn new(linear_max: f64) -> Result<Self> {
        if !(linear_max.is_finite() && linear_max > 0.0) {
            return Err(Error::Validation(format!(
                "v_max must be positive, got {linear_max}"
            )));
        }
        Ok(VelocityLimit { linear_max })
    }

    pub fn from_mph(mph: f64) -> Result<Self> {
        Self::new(mph * Self::MPH_TO_M_S)
    }

    /// Angular-velocity cap shared by every trajectory inside a region of
    /// radius `region_radius`: no point of such a trajectory moves faster
    /// than `linear_max`.
    pub fn angular_cap(&self, region_radius: f64) -> f64 {
        self.linear_max / region_radius
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleCirclePlan {
    pub region: Circle,
    pub r_u: f64,
    pub angular_velocity: f64,
    pub completion_time: f64,
    /// Worst footprint corner when the UAV sits at polar angle 0.
    pub worst_corner: Point2D,
    /// Lower bound on data delivered to every covered point.
    pub data_at_worst: f64,
    pub clamped: bool,
}

/// Spectral efficiency at the worst footprint corner for trajectory radius `r_u`.
pub fn worst_corner_se(r_u: f64, region: &CoverageRegion, params: &LinkParams) -> f64 {
    let d = corner_distance(r_u, region.circle.radius, params.half_beamwidth_rad);
    spectral_efficiency_from_metric(loss_metric(d, params), params.point_loss(region.indoor), params)
}

/// Lower bound on data delivered per revolution at angular velocity `v`.
pub fn delivered_bound(r_u: f64, v: f64, region: &CoverageRegion, params: &LinkParams) -> f64 {
    params.half_beamwidth_rad / v * params.data_bandwidth_hz * worst_corner_se(r_u, region, params)
}

fn balance_gap(r: f64, region: &Circle, params: &LinkParams) -> Result<(f64, f64)> {
    let corner = worst_point_loss_metric(r, MetricTarget::WorstCorner, region, params)?.value();
    let center = worst_point_loss_metric(r, MetricTarget::Center, region, params)?.value();
    Ok((corner - center, center))
}

/// Radius in `[R/2, R]` where the worst-corner and center losses are equal,
/// found by bisection on the sign of their difference.
pub fn solve_balanced_radius(region: &Circle, params: &LinkParams, cfg: &SolverConfig) -> Result<f64> {
    let (mut lo, mut hi) = (region.radius / 2.0, region.radius);
    let (gap_lo, center_lo) = balance_gap(lo, region, params)?;
    let (gap_hi, center_hi) = balance_gap(hi, region, params)?;
    if gap_lo.abs() <= cfg.metric_tol * center_lo {
        return Ok(lo);
    }
    if gap_hi.abs() <= cfg.metric_tol * center_hi {
        return Ok(hi);
    }
    if gap_lo.signum() == gap_hi.signum() {
        let corner = |r| worst_point_loss_metric(r, MetricTarget::WorstCorner, region, params);
        let fallback_radius = if corner(lo)? <= corner(hi)? { lo } else { hi };
        return Err(Error::NoSignChange { fallback_radius });
    }
    let lo_positive = gap_lo > 0.0;
    for _ in 0..cfg.max_bisect_iters {
        let mid = 0.5 * (lo + hi);
        let (gap, center) = balance_gap(mid, region, params)?;
        if gap.abs() <= cfg.metric_tol * center {
            return Ok(mid);
        }
        if (gap > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Unclamped velocity meeting the data threshold with equality.
pub fn closed_form_velocity(r_u: f64, region: &CoverageRegion, r_th: f64, params: &LinkParams) -> f64 {
    params.half_beamwidth_rad * params.data_bandwidth_hz * worst_corner_se(r_u, region, params) / r_th
}

/// Largest angular velocity whose data bound meets `r_th`, capped by the
/// region's angular limit. Bisection over `[0, cap]`; stops once the
/// bracket is narrower than `v_tol` relative and returns its feasible end.
pub fn solve_velocity(
    r_u: f64,
    region: &CoverageRegion,
    r_th: f64,
    params: &LinkParams,
    vlim: &VelocityLimit,
    cfg: &SolverConfig,
) -> Result<f64> {
    let radius = region.circle.radius;
    if !(r_th.is_finite() && r_th > 0.0) {
        return Err(Error::Validation(format!("R_th must be positive, got {r_th}")));
    }
    if !(r_u >= radius / 2.0 * (1.0 - 1e-12) && r_u <= radius * (1.0 + 1e-12)) {
        return Err(Error::OutOfRange {
            name: "r_u",
            value: r_u,
            lo: radius / 2.0,
            hi: radius,
        });
    }
    let se = worst_corner_se(r_u, region, params);
    if se.is_nan() || se <= 0.0 {
        return Err(Error::InfeasibleThreshold);
    }
    let meets = |v: f64| params.half_beamwidth_rad / v * params.data_bandwidth_hz * se >= r_th;
    let cap = vlim.angular_cap(radius);
    if meets(cap) {
        return Ok(cap);
    }
    let (mut lo, mut hi) = (0.0, cap);
    for _ in 0..cfg.max_bisect_iters {
        if lo > 0.0 && hi - lo <= cfg.v_tol * lo {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if meets(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == 0.0 {
        return Err(Error::InfeasibleThreshold);
    }
    Ok(lo)
}

/// Plan for a fixed trajectory radius.
pub fn plan_at_radius(
    r_u: f64,
    region: &CoverageRegion,
    r_th: f64,
    params: &LinkParams,
    vlim: &VelocityLimit,
    cfg: &SolverConfig,
) -> Result<SingleCirclePlan> {
    let v = solve_velocity(r_u, region, r_th, params, vlim, cfg)?;
    let cap = vlim.angular_cap(region.circle.radius);
    Ok(SingleCirclePlan {
        region: region.circle,
        r_u,
        angular_velocity: v,
        completion_time: TAU / v,
        worst_corner: region.circle.center
            + worst_corner_offset(region.circle.radius, params.half_beamwidth_rad),
        data_at_worst: delivered_bound(r_u, v, region, params),
        clamped: v >= cap,
    })
}

/// Balanced radius followed by the largest feasible velocity.
pub fn plan_single(
    region: &CoverageRegion,
    r_th: f64,
    params: &LinkParams,
    vlim: &VelocityLimit,
    cfg: &SolverConfig,
) -> Result<SingleCirclePlan> {
    let r_u = solve_balanced_radius(&region.circle, params, cfg)?;
    plan_at_radius(r_u, region, r_th, params, vlim, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Both radii fly at the velocity cap.
    Zero,
    /// Only the balanced radius is capped; savings grow linearly.
    Ramp,
    /// Neither is capped; the savings percentage is constant.
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SavingsRow {
    pub r_th: f64,
    pub v_half: f64,
    pub v_opt: f64,
    pub t_half: f64,
    pub t_opt: f64,
    /// `t_half - t_opt`.
    pub t_sav: f64,
    pub savings_pct: f64,
    pub regime: Regime,
}

/// Completion time at `r_u = R/2` versus the balanced radius for each threshold.
pub fn savings_profile(
    region: &CoverageRegion,
    r_th_grid: &[f64],
    params: &LinkParams,
    vlim: &VelocityLimit,
    cfg: &SolverConfig,
) -> Result<Vec<SavingsRow>> {
    if r_th_grid.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::Validation("R_th grid must be strictly increasing".into()));
    }
    let r_opt = solve_balanced_radius(&region.circle, params, cfg)?;
    let r_half = region.circle.radius / 2.0;
    r_th_grid
        .iter()
        .map(|&r_th| {
            let half = plan_at_radius(r_half, region, r_th, params, vlim, cfg)?;
            let opt = plan_at_radius(r_opt, region, r_th, params, vlim, cfg)?;
            let regime = match (half.clamped, opt.clamped) {
                (true, true) => Regime::Zero,
                (false, true) => Regime::Ramp,
                _ => Regime::Constant,
            };
            let t_sav = half.completion_time - opt.completion_time;
            Ok(SavingsRow {
                r_th,
                v_half: half.angular_velocity,
                v_opt: opt.angular_velocity,
                t_half: half.completion_time,
                t_opt: opt.completion_time,
                t_sav,
                savings_pct: 100.0 * t_sav / half.completion_time,
                regime,
            })
        })
        .collect()
}
