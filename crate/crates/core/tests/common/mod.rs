//! Seeded invariant checks shared by the property suites and the
//! acceptance report. Each check returns a [`Check`] instead of panicking so
//! the acceptance target can print every outcome.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use isac_planner::config::SolverConfig;
use isac_planner::coverage::{verify, VerifyOptions};
use isac_planner::geometry::{
    nearest_point_on_circle, smaller_arc_between, tour_length, Arc, Circle, Direction, Line,
    PathSegment, Point2D,
};
use isac_planner::linkbudget::{
    db_to_linear, in_conic_footprint, linear_to_db, loss_metric, path_gain, penetration_loss,
    spectral_efficiency_from_metric, worst_point_loss_metric, LinkParams, MetricTarget,
};
use isac_planner::multi_region::{algorithm3, optimize_angle, MissionPlan, RegionSpec, TourTiming};
use isac_planner::single_circle::{
    closed_form_velocity, plan_single, savings_profile, solve_balanced_radius, solve_velocity, worst_corner_se,
    CoverageRegion, VelocityLimit,
};

pub const SEED: u64 = 0x15AC;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

pub fn rng_for(seed: u64, index: u64) -> StdRng {
    StdRng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn vmax() -> VelocityLimit {
    VelocityLimit::from_mph(72.0).unwrap()
}

fn random_params(rng: &mut StdRng, phi_max: f64) -> LinkParams {
    let mut p = LinkParams::table_ii(rng.gen_range(1.0..10.0), rng.gen_range(0.1..phi_max));
    p.altitude_m = rng.gen_range(50.0..200.0);
    p.tx_power_dbm = rng.gen_range(10.0..30.0);
    p
}

fn random_circle(rng: &mut StdRng, span: f64) -> Circle {
    Circle::new(
        Point2D::new(rng.gen_range(-span..span), rng.gen_range(-span..span)),
        rng.gen_range(0.1..span),
    )
    .unwrap()
}

// ---------------------------------------------------------------- geometry

pub fn nearest_point_is_global(seed: u64, samples: u64, grid: usize) -> Check {
    let worst = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let c = random_circle(&mut rng, 10.0);
            let p = Point2D::new(rng.gen_range(-30.0..30.0), rng.gen_range(-30.0..30.0));
            let Ok(q) = nearest_point_on_circle(&c, p) else { return 0.0 };
            let d = q.distance(p);
            (0..grid)
                .map(|k| d - c.point_at(TAU * k as f64 / grid as f64).distance(p))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Check::new(
        "nearest point on circle is the global minimizer",
        worst <= 1e-9,
        format!("{samples} draws x {grid} grid; largest improvement found {worst:.3e} m (tol 1e-9)"),
    )
}

pub fn smaller_arc_at_most_pi(seed: u64, samples: u64) -> Check {
    let cfg = SolverConfig::default();
    let worst = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let c = random_circle(&mut rng, 10.0);
            let a = c.point_at(rng.gen_range(0.0..TAU));
            let b = c.point_at(rng.gen_range(0.0..TAU));
            smaller_arc_between(&c, a, b, cfg.boundary_rel_tol).map_or(f64::INFINITY, |arc| arc.sweep)
        })
        .reduce(|| 0.0, f64::max);
    Check::new(
        "smaller arc sweeps at most pi",
        worst <= PI,
        format!("{samples} draws; largest sweep {worst:.15}"),
    )
}

fn random_tour(rng: &mut StdRng) -> Vec<PathSegment> {
    let mut segments = Vec::new();
    let mut cursor = Point2D::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
    for _ in 0..rng.gen_range(1..8) {
        if rng.gen_bool(0.5) {
            let to = Point2D::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
            segments.push(PathSegment::Line(Line { from: cursor, to }));
            cursor = to;
        } else {
            let radius = rng.gen_range(1.0..20.0);
            let start = rng.gen_range(0.0..TAU);
            let center = cursor - Point2D::from_polar(radius, start);
            let arc = Arc {
                circle: Circle::new(center, radius).unwrap(),
                start_angle: start,
                sweep: rng.gen_range(0.1..TAU),
                direction: if rng.gen_bool(0.5) { Direction::Ccw } else { Direction::Cw },
            };
            cursor = arc.end_point();
            segments.push(PathSegment::Arc(arc));
        }
    }
    segments
}

fn moved(seg: &PathSegment, angle: f64, shift: Point2D) -> PathSegment {
    let f = |p: Point2D| p.rotate(angle) + shift;
    match *seg {
        PathSegment::Line(l) => PathSegment::Line(Line { from: f(l.from), to: f(l.to) }),
        PathSegment::Arc(a) => PathSegment::Arc(Arc {
            circle: Circle::new(f(a.circle.center), a.circle.radius).unwrap(),
            start_angle: a.start_angle + angle,
            ..a
        }),
    }
}

pub fn tour_length_additive_and_rigid(seed: u64, samples: u64) -> Check {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let tour = random_tour(&mut rng);
        let total = tour_length(&tour, cfg.contiguity_tol).unwrap();
        let parts: f64 = tour.iter().map(PathSegment::length).sum();
        let angle = rng.gen_range(0.0..TAU);
        let shift = Point2D::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0));
        let moved_tour: Vec<_> = tour.iter().map(|s| moved(s, angle, shift)).collect();
        let rigid = tour_length(&moved_tour, cfg.contiguity_tol).unwrap();
        let split = tour.len() / 2;
        let halves = tour_length(&tour[..split], cfg.contiguity_tol).unwrap()
            + tour_length(&tour[split..], cfg.contiguity_tol).unwrap();
        for other in [parts, rigid, halves] {
            worst = worst.max((other - total).abs() / total);
        }
    }
    Check::new(
        "tour length additive and invariant under rigid motion",
        worst <= 1e-12,
        format!("{samples} tours; worst relative error {worst:.3e} (tol 1e-12)"),
    )
}

// -------------------------------------------------------------- linkbudget

pub fn se_nonnegative_and_decreasing(seed: u64, samples: u64) -> Check {
    let mut failures = 0;
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let p = random_params(&mut rng, PI / 2.0 - 0.01);
        let loss = if rng.gen_bool(0.5) { penetration_loss(p.carrier_ghz) } else { 1.0 };
        let mut last = f64::INFINITY;
        // start past the nadir clamp, where the metric is strictly monotone
        let d0 = 1.0 + rng.gen_range(0.0..5.0);
        for k in 0..200 {
            let d = d0 + k as f64 * 10.0;
            let se = spectral_efficiency_from_metric(loss_metric(d, &p), loss, &p);
            if !(se >= 0.0 && se < last) {
                failures += 1;
                break;
            }
            last = se;
        }
    }
    Check::new(
        "spectral efficiency nonnegative and strictly decreasing in distance",
        failures == 0,
        format!("{samples} parameter draws x 200 distances; {failures} failures"),
    )
}

pub fn corner_bounds_footprint(seed: u64, samples: u64) -> Check {
    let mut rng = rng_for(seed, 0);
    let mut failures = 0;
    for _ in 0..samples {
        let p = random_params(&mut rng, PI / 3.0);
        let radius = rng.gen_range(100.0..2000.0);
        // past the balanced radius the center, not the corner, is the worst point
        let r_hat = radius / (2.0 * p.half_beamwidth_rad.cos());
        let r_u = rng.gen_range(radius / 2.0..r_hat);
        let corner = Point2D::from_polar(radius, p.half_beamwidth_rad).distance(Point2D::new(r_u, 0.0));
        let se_corner = spectral_efficiency_from_metric(loss_metric(corner, &p), 1.0, &p);
        let x = Point2D::from_polar(
            radius * rng.gen::<f64>().sqrt(),
            rng.gen_range(-p.half_beamwidth_rad..p.half_beamwidth_rad),
        );
        assert!(in_conic_footprint(x, Point2D::ORIGIN, radius, 0.0, p.half_beamwidth_rad));
        let se = spectral_efficiency_from_metric(loss_metric(x.distance(Point2D::new(r_u, 0.0)), &p), 1.0, &p);
        if se < se_corner - 1e-12 {
            failures += 1;
        }
    }
    Check::new(
        "worst corner lower-bounds every footprint point",
        failures == 0,
        format!("{samples} points, r_u in [R/2, balanced radius]; {failures} below the corner value"),
    )
}

fn metric_grid(p: &LinkParams, radius: f64, lo: f64, hi: f64, n: usize, target: MetricTarget) -> Vec<f64> {
    let c = Circle::new(Point2D::ORIGIN, radius).unwrap();
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .map(|r| worst_point_loss_metric(r, target, &c, p).unwrap().value())
        .collect()
}

fn strictly(values: &[f64], decreasing: bool) -> bool {
    values.windows(2).all(|w| if decreasing { w[1] < w[0] } else { w[1] > w[0] })
}

/// Literal form: corner metric strictly decreasing and center metric
/// strictly increasing over the whole of `[R/2, R]`.
pub fn corner_metric_monotone_literal(half_beamwidths: &[f64]) -> Check {
    let mut details = Vec::new();
    let mut pass = true;
    for &phi in half_beamwidths {
        let p = LinkParams::table_ii(3.0, phi);
        let corner = strictly(&metric_grid(&p, 1000.0, 500.0, 1000.0, 1000, MetricTarget::WorstCorner), true);
        let center = strictly(&metric_grid(&p, 1000.0, 500.0, 1000.0, 1000, MetricTarget::Center), false);
        pass &= corner && center;
        details.push(format!("phi={phi:.4}: corner decreasing={corner}, center increasing={center}"));
    }
    Check::new("corner/center metric monotone on [R/2, R] (literal)", pass, details.join("; "))
}

/// Corrected form: the corner metric falls on `[R/2, R cos Φa]` and rises
/// after it, the center metric rises throughout, and their difference
/// changes sign exactly once on `[R/2, R]` when `Φa < π/3`.
pub fn corner_metric_monotone_corrected(half_beamwidths: &[f64]) -> Check {
    let mut details = Vec::new();
    let mut pass = true;
    for &phi in half_beamwidths {
        let p = LinkParams::table_ii(3.0, phi);
        let knee = 1000.0 * phi.cos();
        let falling = strictly(&metric_grid(&p, 1000.0, 500.0, knee, 1000, MetricTarget::WorstCorner), true);
        let rising = strictly(&metric_grid(&p, 1000.0, knee, 1000.0, 1000, MetricTarget::WorstCorner), false);
        let center = strictly(&metric_grid(&p, 1000.0, 500.0, 1000.0, 1000, MetricTarget::Center), false);
        let corner = metric_grid(&p, 1000.0, 500.0, 1000.0, 1000, MetricTarget::WorstCorner);
        let centre = metric_grid(&p, 1000.0, 500.0, 1000.0, 1000, MetricTarget::Center);
        let gaps: Vec<f64> = corner.iter().zip(&centre).map(|(a, b)| a - b).collect();
        let changes = gaps.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
        let ok = falling && rising && center && changes == 1;
        pass &= ok;
        details.push(format!("phi={phi:.4}: sign changes={changes}, ok={ok}"));
    }
    Check::new(
        "corner metric falls then rises at R cos(phi); single balance crossing",
        pass,
        details.join("; "),
    )
}

pub fn db_round_trip(seed: u64, samples: u64) -> Check {
    let mut rng = rng_for(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let p = LinkParams::table_ii(rng.gen_range(0.5..30.0), PI / 6.0);
        let lp = penetration_loss(p.carrier_ghz);
        let g = path_gain(rng.gen_range(0.0..5000.0), &p);
        for x in [lp, g] {
            worst = worst.max((db_to_linear(linear_to_db(x)) - x).abs() / x);
        }
    }
    Check::new(
        "penetration loss and path gain survive dB round trip",
        worst <= 1e-12,
        format!("{samples} draws; worst relative error {worst:.3e} (tol 1e-12)"),
    )
}

// ----------------------------------------------------------- single circle

fn random_region(rng: &mut StdRng) -> CoverageRegion {
    CoverageRegion::new(
        Circle::new(Point2D::ORIGIN, rng.gen_range(100.0..2000.0)).unwrap(),
        rng.gen_bool(0.3),
    )
}

pub fn bisection_matches_closed_form(seed: u64, samples: u64) -> Check {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let p = random_params(&mut rng, PI / 3.0);
        let region = random_region(&mut rng);
        let radius = region.circle.radius;
        let r_u = rng.gen_range(radius / 2.0..radius);
        let r_th = 10f64.powf(rng.gen_range(-2.0..3.0));
        let vlim = VelocityLimit::new(1e12).unwrap();
        let v = solve_velocity(r_u, &region, r_th, &p, &vlim, &cfg).unwrap();
        let closed = closed_form_velocity(r_u, &region, r_th, &p);
        worst = worst.max((v - closed).abs() / closed);
    }
    Check::new(
        "bisection velocity equals the closed form",
        worst <= 1e-9,
        format!("{samples} draws; worst relative gap {worst:.3e} (tol 1e-9)"),
    )
}

/// Velocity grows with the radius below the balanced radius. Draws use
/// `Φa ≤ π/4`, where the balanced radius stays below `R cos Φa`.
pub fn velocity_grows_with_radius(seed: u64, samples: u64) -> Check {
    let cfg = SolverConfig::default();
    let mut failures = 0;
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let p = random_params(&mut rng, FRAC_PI_4);
        let region = random_region(&mut rng);
        let radius = region.circle.radius;
        let r_hat = solve_balanced_radius(&region.circle, &p, &cfg).unwrap();
        let a = rng.gen_range(radius / 2.0..r_hat);
        let b = rng.gen_range(radius / 2.0..r_hat);
        let (r1, r2) = if a > b { (a, b) } else { (b, a) };
        let vlim = VelocityLimit::new(1e12).unwrap();
        let v1 = solve_velocity(r1, &region, 1.0, &p, &vlim, &cfg).unwrap();
        let v2 = solve_velocity(r2, &region, 1.0, &p, &vlim, &cfg).unwrap();
        // the bisection returns within v_tol below the true root
        if v1 < v2 * (1.0 - cfg.v_tol) {
            failures += 1;
        }
    }
    Check::new(
        "velocity non-decreasing in radius below the balanced radius",
        failures == 0,
        format!("{samples} draws with phi <= pi/4; {failures} inversions"),
    )
}

pub fn savings_structure(seed: u64, samples: u64) -> Check {
    let cfg = SolverConfig::default();
    let mut failures = Vec::new();
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let p = random_params(&mut rng, FRAC_PI_4);
        let region = random_region(&mut rng);
        let vlim = vmax();
        let centre = closed_form_velocity(region.circle.radius / 2.0, &region, 1.0, &p)
            / vlim.angular_cap(region.circle.radius);
        let grid: Vec<f64> = (0..60).map(|k| centre * 10f64.powf(-1.5 + 3.0 * k as f64 / 59.0)).collect();
        let rows = savings_profile(&region, &grid, &p, &vlim, &cfg).unwrap();
        let non_negative = rows.iter().all(|r| r.t_sav >= -1e-9 * r.t_half);
        let ordered = rows.windows(2).all(|w| w[0].regime <= w[1].regime);
        if !(non_negative && ordered) {
            failures.push(i);
        }
    }
    Check::new(
        "savings non-negative with regimes ordered zero, ramp, constant",
        failures.is_empty(),
        format!("{samples} profiles; failing draws {failures:?}"),
    )
}

pub fn threshold_met_with_equality(seed: u64, samples: u64) -> Check {
    let cfg = SolverConfig::default();
    let mut worst: f64 = 0.0;
    let mut below = 0;
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let p = random_params(&mut rng, PI / 3.0);
        let region = random_region(&mut rng);
        let r_th = 10f64.powf(rng.gen_range(-2.0..3.0));
        let vlim = VelocityLimit::new(1e12).unwrap();
        let plan = match plan_single(&region, r_th, &p, &vlim, &cfg) {
            Ok(plan) => plan,
            Err(isac_planner::Error::NoSignChange { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        worst = worst.max((plan.data_at_worst - r_th).abs() / r_th);
        if plan.data_at_worst < r_th * (1.0 - 1e-9) {
            below += 1;
        }
    }
    Check::new(
        "unclamped velocity meets the threshold with equality",
        worst <= 1e-9 && below == 0,
        format!("{samples} draws; worst relative gap {worst:.3e}, {below} below threshold"),
    )
}

// ------------------------------------------------------------ multi region

fn outside_point(rng: &mut StdRng) -> Point2D {
    Point2D::from_polar(rng.gen_range(1.05..5.0), rng.gen_range(0.0..TAU))
}

fn pull(q: Point2D, a: Point2D, b: Point2D) -> f64 {
    q.distance(a) + q.distance(b)
}

pub fn straight_connectors_are_shortest(seed: u64, samples: u64) -> Check {
    let cfg = SolverConfig::default();
    let unit = Circle::new(Point2D::ORIGIN, 1.0).unwrap();
    let mut failures = 0;
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let (prev, next) = (outside_point(&mut rng), outside_point(&mut rng));
        let phi = optimize_angle(&unit, prev, next, &cfg).unwrap();
        let best = pull(unit.point_at(phi), prev, next);
        // a detour through an intermediate point
        let q = unit.point_at(phi);
        let via = Point2D::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let polyline = prev.distance(via) + via.distance(q) + q.distance(next);
        // entering at s and leaving at l after an extra arc m > 0
        let s_angle = rng.gen_range(0.0..TAU);
        let m = rng.gen_range(1e-3..PI);
        let (s, l) = (unit.point_at(s_angle), unit.point_at(s_angle + m));
        let split = prev.distance(s) + m + l.distance(next);
        if polyline < best - 1e-12 || split < best - 1e-12 {
            failures += 1;
        }
    }
    Check::new(
        "straight connectors with a shared exit point are never beaten",
        failures == 0,
        format!("{samples} two-region draws; {failures} shorter alternatives"),
    )
}

fn on_arc(arc: &Arc, phi: f64, tol: f64) -> bool {
    let offset = (arc.direction.sign() * (phi - arc.start_angle)).rem_euclid(TAU);
    offset <= arc.sweep + tol || offset >= TAU - tol
}

pub fn unconstrained_minimum_on_smaller_arc(seed: u64, samples: u64, grid: usize) -> Check {
    let cfg = SolverConfig::default();
    let unit = Circle::new(Point2D::ORIGIN, 1.0).unwrap();
    let step = TAU / grid as f64;
    let failures = (0..samples)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = rng_for(seed, i);
            let (prev, next) = (outside_point(&mut rng), outside_point(&mut rng));
            let a = nearest_point_on_circle(&unit, prev).unwrap();
            let b = nearest_point_on_circle(&unit, next).unwrap();
            let arc = smaller_arc_between(&unit, a, b, cfg.boundary_rel_tol).unwrap();
            let best = (0..grid)
                .map(|k| k as f64 * step)
                .min_by(|x, y| pull(unit.point_at(*x), prev, next).total_cmp(&pull(unit.point_at(*y), prev, next)))
                .unwrap();
            !on_arc(&arc, best, step)
        })
        .count();
    Check::new(
        "unconstrained minimum lies on the smaller arc",
        failures == 0,
        format!("{samples} draws, {grid}-point grid; {failures} outside the arc"),
    )
}

fn segment_crosses_unit_circle(a: Point2D, b: Point2D) -> bool {
    let ab = b - a;
    let t = (-(a.dot(ab)) / ab.dot(ab)).clamp(0.0, 1.0);
    (a + ab * t).norm() < 1.0
}

/// Counts sign changes of the finite-difference derivative of the
/// connector length on the restricted arc. The first check covers every
/// draw, the second only draws whose chord prev-next misses the circle.
pub fn restricted_arc_unimodality(seed: u64, samples: u64, points: usize) -> (Check, Check) {
    let cfg = SolverConfig::default();
    let unit = Circle::new(Point2D::ORIGIN, 1.0).unwrap();
    let results: Vec<(bool, bool)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let (prev, next) = (outside_point(&mut rng), outside_point(&mut rng));
            let a = nearest_point_on_circle(&unit, prev).unwrap();
            let b = nearest_point_on_circle(&unit, next).unwrap();
            let arc = smaller_arc_between(&unit, a, b, cfg.boundary_rel_tol).unwrap();
            let values: Vec<f64> = (0..points)
                .map(|k| pull(unit.point_at(arc.angle_at(k as f64 / (points - 1) as f64)), prev, next))
                .collect();
            let signs: Vec<f64> = values
                .windows(2)
                .map(|w| w[1] - w[0])
                .filter(|d| d.abs() > 1e-14)
                .map(f64::signum)
                .collect();
            let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
            (changes <= 1, segment_crosses_unit_circle(prev, next))
        })
        .collect();
    let bad_all = results.iter().filter(|(ok, _)| !ok).count();
    let bad_clear = results.iter().filter(|(ok, crossing)| !ok && !crossing).count();
    let crossing = results.iter().filter(|(_, c)| *c).count();
    (
        Check::new(
            "connector length unimodal on the restricted arc (literal, all draws)",
            bad_all == 0,
            format!("{samples} draws; {bad_all} with more than one derivative sign change"),
        ),
        Check::new(
            "connector length unimodal on the restricted arc when the chord misses the circle",
            bad_clear == 0,
            format!("{} draws without a crossing chord; {bad_clear} multimodal", samples as usize - crossing),
        ),
    )
}

pub fn connector_convex_in_radius(seed: u64, samples: u64) -> Check {
    let mut rng = rng_for(seed, 0);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let (prev, next) = (outside_point(&mut rng) * 3.0, outside_point(&mut rng) * 3.0);
        let phi = rng.gen_range(0.0..TAU);
        let f = |r: f64| pull(Point2D::from_polar(r, phi), prev, next);
        let (r1, r2) = (rng.gen_range(0.5..1.0), rng.gen_range(0.5..1.0));
        worst = worst.max(f(0.5 * (r1 + r2)) - 0.5 * (f(r1) + f(r2)));
    }
    Check::new(
        "connector length midpoint-convex in the radius",
        worst <= 1e-9,
        format!("{samples} draws; worst excess {worst:.3e} (tol 1e-9)"),
    )
}

fn random_layout(rng: &mut StdRng, count: usize) -> Vec<Circle> {
    let mut circles: Vec<Circle> = Vec::new();
    while circles.len() < count {
        let r = rng.gen_range(30.0..200.0);
        let c = Point2D::from_polar(rng.gen_range(0.0..1000.0 - r), rng.gen_range(0.0..TAU));
        if circles.iter().all(|o| o.center.distance(c) >= o.radius + r) {
            circles.push(Circle::new(c, r).unwrap());
        }
    }
    circles
}

pub fn sweep_trace_non_increasing(seed: u64, samples: u64) -> Check {
    let cfg = SolverConfig::default();
    let mut failures = Vec::new();
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let count = rng.gen_range(2..7);
        let layout = random_layout(&mut rng, count);
        let p = LinkParams::table_ii(
            if rng.gen_bool(0.5) { 3.0 } else { 6.0 },
            if rng.gen_bool(0.5) { PI / 6.0 } else { FRAC_PI_4 },
        );
        let r_th = 10f64.powf(rng.gen_range(0.0..8.0));
        let regions: Vec<RegionSpec> = layout
            .iter()
            .map(|c| RegionSpec::new(*c, r_th, true, &p, &cfg).unwrap())
            .collect();
        let order: Vec<usize> = (0..count).collect();
        let timing = TourTiming { params: &p, vlim: vmax() };
        match algorithm3(&regions, &order, &timing, &cfg) {
            Ok(out) => {
                let ok = out.time_trace.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
                if !ok {
                    failures.push(i);
                }
            }
            Err(_) => failures.push(i),
        }
    }
    Check::new(
        "connection sweep total time non-increasing",
        failures.is_empty(),
        format!("{samples} random layouts; failing draws {failures:?}"),
    )
}

// ---------------------------------------------------------------- coverage

pub fn oracle_respects_bound(seed: u64, samples: u64) -> Check {
    let cfg = SolverConfig::default();
    let mut worst = f64::INFINITY;
    let mut window_errors = 0;
    for i in 0..samples {
        let mut rng = rng_for(seed, i);
        let p = random_params(&mut rng, FRAC_PI_4);
        let region = random_region(&mut rng);
        let vlim = vmax();
        let cap = vlim.angular_cap(region.circle.radius);
        // keep the plan unclamped: aim for a velocity between 10% and 90% of the cap
        let r_hat = solve_balanced_radius(&region.circle, &p, &cfg).unwrap();
        let target = cap * rng.gen_range(0.1..0.9);
        let r_th = p.half_beamwidth_rad * worst_corner_se(r_hat, &region, &p) / target;
        let plan = plan_single(&region, r_th, &p, &vlim, &cfg).unwrap();
        assert!(!plan.clamped);
        let mission = MissionPlan::from_single(&plan);
        let buildings: Vec<Circle> = if region.indoor { vec![region.circle] } else { Vec::new() };
        let mut opts = VerifyOptions::from_config(&cfg, &mission, &region.circle, &p);
        opts.grid_step = region.circle.radius / 40.0;
        let report = verify(&mission, &region.circle, &buildings, &p, r_th, &opts).unwrap();
        worst = worst.min(report.min_delivered / r_th);
        window_errors += report.window_errors;
    }
    Check::new(
        "oracle never undershoots the single-circle bound by more than 2%",
        worst >= 0.98 && window_errors == 0,
        format!("{samples} unclamped plans (grid R/40); smallest min/R_th = {worst:.4}, {window_errors} window errors"),
    )
}

pub fn angle_search_matches_grid(seed: u64, samples: u64, grid: usize) -> Check {
    let cfg = SolverConfig::default();
    let unit = Circle::new(Point2D::ORIGIN, 1.0).unwrap();
    let worst = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let (prev, next) = (outside_point(&mut rng), outside_point(&mut rng));
            let phi = optimize_angle(&unit, prev, next, &cfg).unwrap();
            let found = pull(unit.point_at(phi), prev, next);
            let best = (0..grid)
                .map(|k| pull(unit.point_at(TAU * k as f64 / grid as f64), prev, next))
                .fold(f64::INFINITY, f64::min);
            found - best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Check::new(
        "angle search never worse than a dense grid",
        worst <= 1e-9,
        format!("{samples} draws, {grid}-point grid; worst excess {worst:.3e}"),
    )
}
