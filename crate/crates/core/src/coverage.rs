//! Brute-force check that every ground point receives the data threshold.
//!
//! The UAV position is sampled along each arc with the midpoint rule and
//! the spectral efficiency of every grid point inside the conic footprint
//! is accumulated. Connectors carry no data.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::geometry::{Circle, Point2D};
use crate::linkbudget::{in_conic_footprint, loss_metric, spectral_efficiency_from_metric, LinkParams};
use crate::multi_region::{MissionPlan, MissionSegment};

/// Beam sweep per time step used when no explicit `dt` is configured.
const DEFAULT_SWEEP_DIVISOR: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub grid_step: f64,
    pub dt: f64,
    pub rel_slack: f64,
    pub refinement_tol: f64,
}

impl VerifyOptions {
    /// Resolutions from `cfg`, falling back to `R/100` and a time step that
    /// sweeps at most `Φa/50` per step on the fastest arc.
    pub fn from_config(cfg: &SolverConfig, plan: &MissionPlan, scanning_area: &Circle, params: &LinkParams) -> Self {
        let fastest = plan
            .segments
            .iter()
            .filter_map(|s| match s {
                MissionSegment::Arc { angular_velocity, .. } => Some(*angular_velocity),
                MissionSegment::Line { .. } => None,
            })
            .fold(0.0f64, f64::max);
        let default_dt = if fastest > 0.0 {
            params.half_beamwidth_rad / DEFAULT_SWEEP_DIVISOR / fastest
        } else {
            1.0
        };
        VerifyOptions {
            grid_step: cfg.grid_step.unwrap_or(scanning_area.radius / 100.0),
            dt: cfg.dt.unwrap_or(default_dt),
            rel_slack: cfg.rel_slack,
            refinement_tol: cfg.refinement_tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub x_m: f64,
    pub y_m: f64,
    pub delivered_bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub grid_step: f64,
    pub dt: f64,
    pub points: usize,
    pub min_delivered: f64,
    pub min_location: Point2D,
    /// Minimum delivered data with the time step halved.
    pub refined_min_delivered: f64,
    /// Sorted by coordinates.
    pub violations: Vec<Violation>,
    /// Points whose connection windows break `0 ≤ t_s ≤ t_e ≤ T` or overlap.
    pub window_errors: usize,
    pub uncovered_points: usize,
    /// Every segment has nonzero speed.
    pub mobile: bool,
    pub threshold: f64,
    pub rel_slack: f64,
    pub pass: bool,
}

/// In-beam intervals of one ground point, in mission time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConnectionWindows {
    pub intervals: Vec<(f64, f64)>,
}

impl ConnectionWindows {
    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    pub fn total(&self) -> f64 {
        self.intervals.iter().map(|(s, e)| e - s).sum()
    }

    /// Intervals are ordered, disjoint and inside `[0, horizon]`.
    pub fn is_valid(&self, horizon: f64) -> bool {
        let mut last_end = 0.0;
        self.intervals.iter().all(|&(s, e)| {
            let ok = s >= last_end && s <= e && e <= horizon;
            last_end = e;
            ok
        })
    }
}

/// A simulated mission: arcs with the disc each one serves.
struct Footprints<'a> {
    plan: &'a MissionPlan,
    served: Vec<Option<Circle>>,
    buildings: &'a [Circle],
    params: &'a LinkParams,
}

impl<'a> Footprints<'a> {
    fn new(plan: &'a MissionPlan, scanning_area: &Circle, buildings: &'a [Circle], params: &'a LinkParams) -> Result<Self> {
        let served = plan
            .segments
            .iter()
            .map(|s| match s {
                MissionSegment::Arc { region: None, .. } => Ok(Some(*scanning_area)),
                MissionSegment::Arc { region: Some(i), .. } => buildings
                    .get(*i)
                    .copied()
                    .map(Some)
                    .ok_or_else(|| Error::Validation(format!("plan refers to unknown region {i}"))),
                MissionSegment::Line { .. } => Ok(None),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Footprints { plan, served, buildings, params })
    }

    /// Delivered data and connection windows at `x`.
    fn simulate(&self, x: Point2D, dt: f64) -> (f64, ConnectionWindows) {
        let indoor = self.buildings.iter().any(|b| b.contains(x));
        let loss = self.params.point_loss(indoor);
        let half = self.params.half_beamwidth_rad;
        let mut data = 0.0;
        let mut windows = ConnectionWindows::default();
        let mut t0 = 0.0;
        for (segment, served) in self.plan.segments.iter().zip(&self.served) {
            let duration = segment.duration();
            if let (MissionSegment::Arc { arc, .. }, Some(disc)) = (segment, served) {
                if x.distance(disc.center) <= disc.radius {
                    let steps = (duration / dt).ceil().max(1.0) as usize;
                    let h = duration / steps as f64;
                    let mut open: Option<f64> = None;
                    for j in 0..steps {
                        let s = (j as f64 + 0.5) / steps as f64;
                        let phi = arc.angle_at(s);
                        let start = t0 + j as f64 * h;
                        if in_conic_footprint(x, disc.center, disc.radius, phi, half) {
                            let uav = arc.circle.point_at(phi);
                            let metric = loss_metric(x.distance(uav), self.params);
                            data += self.params.data_bandwidth_hz
                                * spectral_efficiency_from_metric(metric, loss, self.params)
                                * h;
                            open.get_or_insert(start);
                        } else if let Some(s0) = open.take() {
                            windows.intervals.push((s0, start));
                        }
                    }
                    if let Some(s0) = open {
                        windows.intervals.push((s0, t0 + duration));
                    }
                }
            }
            t0 += duration;
        }
        (data, windows)
    }
}

/// Grid points inside `area`, row by row.
pub fn grid_points(area: &Circle, step: f64) -> Vec<Point2D> {
    let n = (area.radius / step).floor() as i64;
    let mut pts = Vec::new();
    for i in -n..=n {
        for j in -n..=n {
            let p = area.center + Point2D::new(i as f64 * step, j as f64 * step);
            if p.distance(area.center) <= area.radius {
                pts.push(p);
            }
        }
    }
    pts
}

/// Total in-beam time and window count of `x` over the plan.
pub fn dwell_time(
    x: Point2D,
    plan: &MissionPlan,
    scanning_area: &Circle,
    buildings: &[Circle],
    params: &LinkParams,
    dt: f64,
) -> Result<(f64, usize)> {
    let fp = Footprints::new(plan, scanning_area, buildings, params)?;
    let (_, windows) = fp.simulate(x, dt);
    Ok((windows.total(), windows.count()))
}

pub fn connection_windows(
    x: Point2D,
    plan: &MissionPlan,
    scanning_area: &Circle,
    buildings: &[Circle],
    params: &LinkParams,
    dt: f64,
) -> Result<ConnectionWindows> {
    let fp = Footprints::new(plan, scanning_area, buildings, params)?;
    Ok(fp.simulate(x, dt).1)
}

fn min_over(values: &[(Point2D, f64)]) -> (Point2D, f64) {
    values
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((Point2D::ORIGIN, f64::INFINITY))
}

/// Simulates `plan` over the scanning-area grid and checks the threshold.
///
/// Fails with [`Error::ResolutionTooCoarse`] when halving `dt` moves the
/// minimum delivered data by more than `opts.refinement_tol`.
pub fn verify(
    plan: &MissionPlan,
    scanning_area: &Circle,
    buildings: &[Circle],
    params: &LinkParams,
    r_th: f64,
    opts: &VerifyOptions,
) -> Result<CoverageReport> {
    if !(opts.grid_step > 0.0 && opts.dt > 0.0) {
        return Err(Error::Validation("grid_step and dt must be positive".into()));
    }
    let fp = Footprints::new(plan, scanning_area, buildings, params)?;
    let horizon: f64 = plan.segments.iter().map(MissionSegment::duration).sum();
    let points = grid_points(scanning_area, opts.grid_step);
    let results: Vec<(Point2D, f64, ConnectionWindows)> = points
        .par_iter()
        .map(|&x| {
            let (data, windows) = fp.simulate(x, opts.dt);
            (x, data, windows)
        })
        .collect();
    let refined: Vec<(Point2D, f64)> = points
        .par_iter()
        .map(|&x| (x, fp.simulate(x, opts.dt / 2.0).0))
        .collect();

    let coarse: Vec<(Point2D, f64)> = results.iter().map(|(x, d, _)| (*x, *d)).collect();
    let (min_location, min_delivered) = min_over(&coarse);
    let (_, refined_min) = min_over(&refined);
    let change = (min_delivered - refined_min).abs() / refined_min.abs().max(f64::MIN_POSITIVE);
    if change > opts.refinement_tol {
        return Err(Error::ResolutionTooCoarse {
            coarse: min_delivered,
            fine: refined_min,
        });
    }

    let floor = r_th * (1.0 - opts.rel_slack);
    let mut violations: Vec<Violation> = coarse
        .iter()
        .filter(|(_, d)| *d < floor)
        .map(|(x, d)| Violation { x_m: x.x, y_m: x.y, delivered_bits: *d })
        .collect();
    violations.sort_by(|a, b| a.x_m.total_cmp(&b.x_m).then(a.y_m.total_cmp(&b.y_m)));
    let window_errors = results.iter().filter(|(_, _, w)| !w.is_valid(horizon)).count();
    let uncovered_points = results.iter().filter(|(_, _, w)| w.count() == 0).count();
    let mobile = plan.segments.iter().all(MissionSegment::speed_is_positive);
    let pass = violations.is_empty() && window_errors == 0 && mobile;
    log::info!(
        "coverage: {} points, min {:.6e} bits at ({:.1}, {:.1}), {} violations",
        points.len(),
        min_delivered,
        min_location.x,
        min_location.y,
        violations.len()
    );
    Ok(CoverageReport {
        grid_step: opts.grid_step,
        dt: opts.dt,
        points: points.len(),
        min_delivered,
        min_location,
        refined_min_delivered: refined_min,
        violations,
        window_errors,
        uncovered_points,
        mobile,
        threshold: r_th,
        rel_slack: opts.rel_slack,
        pass,
    })
}
