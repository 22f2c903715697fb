use thiserror::Error;

use crate::geometry::Point2D;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("point ({x}, {y}) is {offset:.3e} m off the circle boundary")]
    NotOnBoundary { x: f64, y: f64, offset: f64 },

    #[error("path is discontinuous between segments {index} and {next}: gap {gap:.3e} m")]
    Discontinuous { index: usize, next: usize, gap: f64 },

    #[error("elevation angle {0:.3e} rad is inside the beam but too close to nadir")]
    SingularElevation(f64),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// The corner/center loss difference keeps one sign over [R/2, R].
    /// `fallback_radius` is the endpoint with the smaller worst-corner loss.
    #[error("loss balance has no sign change on [R/2, R]; fallback radius {fallback_radius}")]
    NoSignChange { fallback_radius: f64 },

    #[error("data threshold cannot be met: worst point receives zero rate")]
    InfeasibleThreshold,

    #[error("{stage}: objective increased from {before} to {after}")]
    MonotonicityViolation {
        stage: &'static str,
        before: f64,
        after: f64,
    },

    #[error("time step too coarse: halving dt moved min delivered data from {coarse} to {fine}")]
    ResolutionTooCoarse { coarse: f64, fine: f64 },

    #[error("parse error in {source_name}: {message}")]
    Parse {
        source_name: String,
        message: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn not_on_boundary(p: Point2D, offset: f64) -> Self {
        Error::NotOnBoundary {
            x: p.x,
            y: p.y,
            offset,
        }
    }
}
