//! Connecting points between consecutive circular trajectories.
//!
//! Each region is flown as one full circle that starts and ends at its exit
//! point; straight connectors join consecutive exit points. The exit point
//! of one region is moved at a time (angle, then radius) while its
//! neighbours stay fixed, so the total mission time never increases.

use std::f64::consts::TAU;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::geometry::{nearest_point_on_circle, smaller_arc_between, Circle, Point2D};
use crate::linkbudget::LinkParams;
use crate::single_circle::{closed_form_velocity, solve_balanced_radius, CoverageRegion, VelocityLimit};

/// Brackets scanned for sign changes of the angle derivative before bisecting.
const ANGLE_SCAN_BRACKETS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSpec {
    pub circle: Circle,
    /// Loss-balancing trajectory radius.
    pub r_opt: f64,
    pub r_th: f64,
    pub indoor: bool,
}

impl RegionSpec {
    /// Builds a region with its balanced radius. Beyond the balance range
    /// the endpoint with the smaller corner loss is used.
    pub fn new(circle: Circle, r_th: f64, indoor: bool, params: &LinkParams, cfg: &SolverConfig) -> Result<Self> {
        let r_opt = match solve_balanced_radius(&circle, params, cfg) {
            Ok(r) => r,
            Err(Error::NoSignChange { fallback_radius }) => fallback_radius,
            Err(e) => return Err(e),
        };
        Ok(RegionSpec { circle, r_opt, r_th, indoor })
    }

    /// Largest radius the connection search may use. The traversal time
    /// only decreases in `r` while the worst corner gets closer, i.e. up to
    /// `R cos Φa`.
    pub fn radius_upper(&self, half_beamwidth: f64) -> f64 {
        let r_min = self.circle.radius / 2.0;
        self.r_opt.min(self.circle.radius * half_beamwidth.cos()).max(r_min)
    }

    pub fn coverage(&self) -> CoverageRegion {
        CoverageRegion::new(self.circle, self.indoor)
    }
}

/// Link and speed limits used to price a tour.
#[derive(Debug, Clone, Copy)]
pub struct TourTiming<'a> {
    pub params: &'a LinkParams,
    pub vlim: VelocityLimit,
}

impl TourTiming<'_> {
    /// One revolution of `region` at trajectory radius `r`.
    pub fn circle_time(&self, region: &RegionSpec, r: f64) -> f64 {
        let cap = self.vlim.angular_cap(region.circle.radius);
        let v = closed_form_velocity(r, &region.coverage(), region.r_th, self.params).min(cap);
        TAU / v
    }

    pub fn connector_time(&self, length: f64) -> f64 {
        length / self.vlim.linear_max
    }
}

/// Exit points and trajectory radii in visiting order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectState {
    /// `order[k]` is the index of the k-th visited region.
    pub order: Vec<usize>,
    pub exit_points: Vec<Point2D>,
    pub radii: Vec<f64>,
    pub connector_sum: f64,
}

impl ConnectState {
    pub fn recompute_connector_sum(&mut self) {
        self.connector_sum = connector_sum(&self.exit_points);
    }

    /// Connector travel plus circle traversal time.
    pub fn total_time(&self, regions: &[RegionSpec], timing: &TourTiming) -> f64 {
        let circles: f64 = self
            .order
            .iter()
            .zip(&self.radii)
            .map(|(&i, &r)| timing.circle_time(&regions[i], r))
            .sum();
        circles + timing.connector_time(connector_sum(&self.exit_points))
    }
}

pub fn connector_sum(exit_points: &[Point2D]) -> f64 {
    exit_points.windows(2).map(|w| w[0].distance(w[1])).sum()
}

fn pull(q: Point2D, prev: Point2D, next: Point2D) -> f64 {
    q.distance(prev) + q.distance(next)
}

fn unit(v: Point2D) -> Point2D {
    let n = v.norm();
    if n <= 0.0 {
        Point2D::ORIGIN
    } else {
        v * (1.0 / n)
    }
}

/// Angle on `circle` minimizing `‖prev − q‖ + ‖next − q‖`, searched on the
/// smaller arc between the points nearest to `prev` and `next`.
///
/// The derivative sign is scanned on a fixed set of brackets and each
/// upward crossing is refined by bisection; the best candidate (arc
/// endpoints included) wins.
pub fn optimize_angle(circle: &Circle, prev: Point2D, next: Point2D, cfg: &SolverConfig) -> Result<f64> {
    for p in [prev, next] {
        if p.distance(circle.center) < circle.radius * (1.0 - cfg.boundary_rel_tol) {
            return Err(Error::DegenerateInput(format!(
                "neighbour ({}, {}) lies inside the trajectory circle",
                p.x, p.y
            )));
        }
    }
    let a = nearest_point_on_circle(circle, prev)?;
    let b = nearest_point_on_circle(circle, next)?;
    let arc = smaller_arc_between(circle, a, b, cfg.boundary_rel_tol)?;
    if arc.sweep <= cfg.angle_tol {
        return Ok(arc.start_angle);
    }
    let span = arc.direction.sign() * arc.sweep;
    let angle = |s: f64| arc.start_angle + span * s;
    let value = |s: f64| pull(circle.point_at(angle(s)), prev, next);
    let slope = |s: f64| {
        let phi = angle(s);
        let q = circle.point_at(phi);
        let tangent = Point2D::new(-phi.sin(), phi.cos()) * (circle.radius * span);
        unit(q - prev).dot(tangent) + unit(q - next).dot(tangent)
    };

    let mut candidates = vec![0.0, 1.0];
    let step = 1.0 / ANGLE_SCAN_BRACKETS as f64;
    for k in 0..ANGLE_SCAN_BRACKETS {
        let (mut lo, mut hi) = (k as f64 * step, (k + 1) as f64 * step);
        if !(slope(lo) <= 0.0 && slope(hi) > 0.0) {
            continue;
        }
        for _ in 0..cfg.max_bisect_iters {
            if (hi - lo) * arc.sweep <= cfg.angle_tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if slope(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        candidates.push(0.5 * (lo + hi));
    }
    let best = candidates
        .into_iter()
        .min_by(|&x, &y| value(x).total_cmp(&value(y)))
        .unwrap_or(0.0);
    Ok(crate::geometry::normalize_angle(angle(best)))
}

/// Largest `r ∈ [r_lo, r_hi]` whose exit point at angle `phi` keeps the
/// connector length within `zeta`. The connector length is convex in `r`
/// and `r_lo` is feasible, so the feasible set is an interval starting at
/// `r_lo`.
#[allow(clippy::too_many_arguments)]
pub fn optimize_radius(
    center: Point2D,
    phi: f64,
    prev: Point2D,
    next: Point2D,
    r_lo: f64,
    r_hi: f64,
    zeta: f64,
    cfg: &SolverConfig,
) -> f64 {
    let limit = zeta * (1.0 + cfg.feas_tol);
    let feasible = |r: f64| pull(center + Point2D::from_polar(r, phi), prev, next) <= limit;
    if r_hi <= r_lo || feasible(r_hi) {
        return r_hi.max(r_lo);
    }
    let (mut lo, mut hi) = (r_lo, r_hi);
    for _ in 0..cfg.max_bisect_iters {
        if hi - lo <= cfg.point_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalOutcome {
    pub exit_point: Point2D,
    pub radius: f64,
    pub iterations: usize,
    /// Local time (neighbour connectors plus this circle) before and after each iteration.
    pub objective_trace: Vec<f64>,
}

fn local_time(q: Point2D, r: f64, region: &RegionSpec, neighbours: &[Point2D], timing: &TourTiming) -> f64 {
    let connectors: f64 = neighbours.iter().map(|p| q.distance(*p)).sum();
    timing.connector_time(connectors) + timing.circle_time(region, r)
}

/// Alternating angle/radius refinement of one exit point with its
/// neighbours held fixed. `neighbours` holds one point for the first and
/// last regions of the tour and two otherwise.
pub fn algorithm2(
    region: &RegionSpec,
    start: Point2D,
    radius: f64,
    neighbours: &[Point2D],
    timing: &TourTiming,
    cfg: &SolverConfig,
) -> Result<LocalOutcome> {
    let (prev, next) = match neighbours {
        [p] => (*p, *p),
        [p, n] => (*p, *n),
        _ => {
            return Err(Error::DegenerateInput(format!(
                "a region needs one or two neighbours, got {}",
                neighbours.len()
            )))
        }
    };
    let center = region.circle.center;
    let r_hi = region.radius_upper(timing.params.half_beamwidth_rad);
    let mut q = start;
    let mut r = radius;
    let mut objective = local_time(q, r, region, neighbours, timing);
    let mut trace = vec![objective];
    let mut iterations = 0;
    for _ in 0..cfg.max_inner_iters {
        iterations += 1;
        let phi = optimize_angle(&region.circle.with_radius(r), prev, next, cfg)?;
        let zeta = pull(center + Point2D::from_polar(r, phi), prev, next);
        let r_new = optimize_radius(center, phi, prev, next, r, r_hi, zeta, cfg);
        let q_new = center + Point2D::from_polar(r_new, phi);
        let after = local_time(q_new, r_new, region, neighbours, timing);
        if after > objective * (1.0 + cfg.monotonic_tol) {
            return Err(Error::MonotonicityViolation {
                stage: "connecting point",
                before: objective,
                after,
            });
        }
        let moved = q_new.distance(q);
        q = q_new;
        r = r_new;
        objective = after;
        trace.push(objective);
        if moved <= cfg.point_tol {
            break;
        }
    }
    Ok(LocalOutcome {
        exit_point: q,
        radius: r,
        iterations,
        objective_trace: trace,
    })
}

/// Result of the coordinate-descent sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub state: ConnectState,
    pub initial_connector_sum: f64,
    /// Total tour time initially and after every single-region update.
    pub time_trace: Vec<f64>,
    pub sweeps: usize,
}

/// Radii start at `R/2`; the first exit point faces the second region's
/// center and every later one is the point nearest to its predecessor.
pub fn initial_state(regions: &[RegionSpec], order: &[usize], timing: &TourTiming) -> Result<ConnectState> {
    let mut exit_points = Vec::with_capacity(order.len());
    let mut radii = Vec::with_capacity(order.len());
    for (k, &i) in order.iter().enumerate() {
        let region = &regions[i];
        if order.len() == 1 {
            let r = region.radius_upper(timing.params.half_beamwidth_rad);
            exit_points.push(region.circle.center + Point2D::new(r, 0.0));
            radii.push(r);
            break;
        }
        let r = region.circle.radius / 2.0;
        let circle = region.circle.with_radius(r);
        let target = if k == 0 {
            regions[order[1]].circle.center
        } else {
            exit_points[k - 1]
        };
        exit_points.push(nearest_point_on_circle(&circle, target)?);
        radii.push(r);
    }
    let mut state = ConnectState {
        order: order.to_vec(),
        exit_points,
        radii,
        connector_sum: 0.0,
    };
    state.recompute_connector_sum();
    Ok(state)
}

/// Coordinate descent over exit points: each sweep runs [`algorithm2`] on
/// every region in visiting order. Stops after `cfg.max_sweeps` sweeps or
/// when no exit point moves more than `cfg.point_tol`.
pub fn algorithm3(
    regions: &[RegionSpec],
    order: &[usize],
    timing: &TourTiming,
    cfg: &SolverConfig,
) -> Result<SweepOutcome> {
    if order.is_empty() {
        return Err(Error::DegenerateInput("no regions to connect".into()));
    }
    let mut state = initial_state(regions, order, timing)?;
    let initial_connector_sum = state.connector_sum;
    let mut total = state.total_time(regions, timing);
    let mut time_trace = vec![total];
    let n = order.len();
    let mut sweeps = 0;
    if n > 1 {
        for _ in 0..cfg.max_sweeps {
            sweeps += 1;
            let mut max_move: f64 = 0.0;
            for k in 0..n {
                let mut neighbours = Vec::with_capacity(2);
                if k > 0 {
                    neighbours.push(state.exit_points[k - 1]);
                }
                if k + 1 < n {
                    neighbours.push(state.exit_points[k + 1]);
                }
                let local = algorithm2(
                    &regions[order[k]],
                    state.exit_points[k],
                    state.radii[k],
                    &neighbours,
                    timing,
                    cfg,
                )?;
                max_move = max_move.max(local.exit_point.distance(state.exit_points[k]));
                state.exit_points[k] = local.exit_point;
                state.radii[k] = local.radius;
                let after = state.total_time(regions, timing);
                if after > total * (1.0 + cfg.monotonic_tol) {
                    return Err(Error::MonotonicityViolation {
                        stage: "tour sweep",
                        before: total,
                        after,
                    });
                }
                total = after;
                time_trace.push(total);
            }
            if max_move <= cfg.point_tol {
                break;
            }
        }
    }
    state.recompute_connector_sum();
    log::debug!(
        "connection sweep finished after {sweeps} sweeps: connectors {:.3} m -> {:.3} m",
        initial_connector_sum,
        state.connector_sum
    );
    Ok(SweepOutcome {
        state,
        initial_connector_sum,
        time_trace,
        sweeps,
    })
}
