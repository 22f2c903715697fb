//! Planar primitives: points, circles, arcs and straight connectors.
//!
//! Angles are radians measured at the circle center from the +x axis and
//! normalized to `[0, 2π)`.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distances at or below this are treated as coincident points.
pub const DEGENERATE_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2D::new(radius * c, radius * s)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point2D) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn distance(self, other: Point2D) -> f64 {
        (self - other).norm()
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn rotate(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Point2D::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point2D {
    type Output = Point2D;
    fn add(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2D {
    type Output = Point2D;
    fn sub(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2D {
    type Output = Point2D;
    fn mul(self, k: f64) -> Point2D {
        Point2D::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2D {
    type Output = Point2D;
    fn neg(self) -> Point2D {
        Point2D::new(-self.x, -self.y)
    }
}

/// Wraps any finite angle into `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Absolute angular separation in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2D,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2D, radius: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::Validation("circle center must be finite".into()));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Validation(format!(
                "circle radius must be positive, got {radius}"
            )));
        }
        Ok(Circle { center, radius })
    }

    pub fn point_at(&self, angle: f64) -> Point2D {
        self.center + Point2D::from_polar(self.radius, angle)
    }

    /// Polar angle of `p` about the center.
    pub fn angle_of(&self, p: Point2D) -> f64 {
        (p - self.center).angle()
    }

    pub fn contains(&self, p: Point2D) -> bool {
        self.center.distance(p) <= self.radius
    }

    pub fn circumference(&self) -> f64 {
        TAU * self.radius
    }

    pub fn with_radius(&self, radius: f64) -> Circle {
        Circle {
            center: self.center,
            radius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ccw,
    Cw,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Ccw => 1.0,
            Direction::Cw => -1.0,
        }
    }
}

/// A portion of a circle traversed from `start_angle` through `sweep`
/// radians in `direction`. A full revolution has `sweep == 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub circle: Circle,
    pub start_angle: f64,
    pub sweep: f64,
    pub direction: Direction,
}

impl Arc {
    pub fn full(circle: Circle, start_angle: f64) -> Self {
        Arc {
            circle,
            start_angle: normalize_angle(start_angle),
            sweep: TAU,
            direction: Direction::Ccw,
        }
    }

    pub fn end_angle(&self) -> f64 {
        normalize_angle(self.start_angle + self.direction.sign() * self.sweep)
    }

    pub fn length(&self) -> f64 {
        self.circle.radius * self.sweep
    }

    /// Angle reached after traversing fraction `s ∈ [0, 1]` of the arc.
    pub fn angle_at(&self, s: f64) -> f64 {
        normalize_angle(self.start_angle + self.direction.sign() * self.sweep * s)
    }

    pub fn start_point(&self) -> Point2D {
        self.circle.point_at(self.start_angle)
    }

    pub fn end_point(&self) -> Point2D {
        self.circle
            .point_at(self.start_angle + self.direction.sign() * self.sweep)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub from: Point2D,
    pub to: Point2D,
}

impl Line {
    pub fn length(&self) -> f64 {
        self.from.distance(self.to)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathSegment {
    Arc(Arc),
    Line(Line),
}

impl PathSegment {
    pub fn start(&self) -> Point2D {
        match self {
            PathSegment::Arc(a) => a.start_point(),
            PathSegment::Line(l) => l.from,
        }
    }

    pub fn end(&self) -> Point2D {
        match self {
            PathSegment::Arc(a) => a.end_point(),
            PathSegment::Line(l) => l.to,
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            PathSegment::Arc(a) => a.length(),
            PathSegment::Line(l) => l.length(),
        }
    }
}

/// Closest point of the circle boundary to `p`.
pub fn nearest_point_on_circle(c: &Circle, p: Point2D) -> Result<Point2D> {
    let offset = p - c.center;
    let dist = offset.norm();
    if dist <= DEGENERATE_DISTANCE {
        return Err(Error::DegenerateInput(format!(
            "point ({}, {}) coincides with the circle center",
            p.x, p.y
        )));
    }
    Ok(c.center + offset * (c.radius / dist))
}

/// The arc of sweep at most π joining two boundary points. An exactly
/// antipodal pair yields the counter-clockwise arc starting at `a`.
pub fn smaller_arc_between(c: &Circle, a: Point2D, b: Point2D, boundary_rel_tol: f64) -> Result<Arc> {
    let tol = boundary_rel_tol * c.radius;
    for p in [a, b] {
        let offset = (c.center.distance(p) - c.radius).abs();
        if offset > tol {
            return Err(Error::not_on_boundary(p, offset));
        }
    }
    let start = c.angle_of(a);
    let ccw = normalize_angle(c.angle_of(b) - start);
    let (sweep, direction) = if ccw <= PI {
        (ccw, Direction::Ccw)
    } else {
        (TAU - ccw, Direction::Cw)
    };
    Ok(Arc {
        circle: *c,
        start_angle: start,
        sweep,
        direction,
    })
}

/// Total length of a contiguous sequence of arcs and straight segments.
pub fn tour_length(segments: &[PathSegment], contiguity_tol: f64) -> Result<f64> {
    for (k, pair) in segments.windows(2).enumerate() {
        let gap = pair[0].end().distance(pair[1].start());
        if gap > contiguity_tol {
            return Err(Error::Discontinuous {
                index: k,
                next: k + 1,
                gap,
            });
        }
    }
    Ok(segments.iter().map(PathSegment::length).sum())
}
