//! Air-to-ground link model: directional antenna gain, free-space path
//! gain, building penetration loss and the resulting spectral efficiency.
//!
//! Elevation angles are measured from nadir, `φe = atan(d / H)`, so a
//! ground point directly below the UAV has `φe = 0`. The antenna gain
//! `G0 / (Φa·|φe|)` diverges there; [`clamped_elevation`] bounds it below by
//! the angle subtended by a 1 m horizontal offset.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angular_distance, Circle, Point2D};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Elevation magnitudes below this are singular for the raw gain formula.
pub const MIN_ELEVATION: f64 = 1e-9;

/// Peak-gain constant `(√7500·π/180)²`.
pub fn default_g0() -> f64 {
    let k = 7500f64.sqrt() * PI / 180.0;
    k * k
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkParams {
    pub carrier_ghz: f64,
    pub tx_power_dbm: f64,
    pub noise_density_dbm_hz: f64,
    /// Receiver noise bandwidth Δf.
    pub bandwidth_hz: f64,
    /// Azimuth half-beamwidth Φa.
    pub half_beamwidth_rad: f64,
    pub altitude_m: f64,
    pub g0: f64,
    /// Linear attenuation applied to points outside buildings.
    pub outdoor_loss: f64,
    /// Multiplier turning integrated spectral efficiency (bit/Hz) into
    /// delivered data. `1.0` keeps data in bit/Hz.
    pub data_bandwidth_hz: f64,
}

impl LinkParams {
    /// Table II defaults at the given carrier and half-beamwidth.
    pub fn table_ii(carrier_ghz: f64, half_beamwidth_rad: f64) -> Self {
        LinkParams {
            carrier_ghz,
            tx_power_dbm: 20.0,
            noise_density_dbm_hz: -174.0,
            bandwidth_hz: 20e6,
            half_beamwidth_rad,
            altitude_m: 100.0,
            g0: default_g0(),
            outdoor_loss: 1.0,
            data_bandwidth_hz: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("carrier_ghz", self.carrier_ghz > 0.0),
            ("bandwidth_hz", self.bandwidth_hz > 0.0),
            (
                "half_beamwidth_rad",
                self.half_beamwidth_rad > 0.0 && self.half_beamwidth_rad < PI / 2.0,
            ),
            ("altitude_m", self.altitude_m > 0.0),
            ("g0", self.g0 > 0.0),
            ("outdoor_loss", self.outdoor_loss > 0.0),
            ("data_bandwidth_hz", self.data_bandwidth_hz > 0.0),
            ("tx_power_dbm", self.tx_power_dbm.is_finite()),
            ("noise_density_dbm_hz", self.noise_density_dbm_hz.is_finite()),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::Validation(format!("link.{name} is out of range")));
            }
        }
        if !self.gamma().is_finite() {
            return Err(Error::Validation("link SNR scale P/σ² is not finite".into()));
        }
        Ok(())
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_ghz * 1e9
    }

    /// Noise power σ² in dBm over the receiver bandwidth.
    pub fn noise_dbm(&self) -> f64 {
        self.noise_density_dbm_hz + 10.0 * self.bandwidth_hz.log10()
    }

    /// Transmit SNR scale γ = P/σ² (linear).
    pub fn gamma(&self) -> f64 {
        db_to_linear(self.tx_power_dbm - self.noise_dbm())
    }

    /// Linear attenuation for a ground point.
    pub fn point_loss(&self, indoor: bool) -> f64 {
        if indoor {
            penetration_loss(self.carrier_ghz)
        } else {
            self.outdoor_loss
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundPoint {
    pub position: Point2D,
    pub indoor: bool,
}

/// The SNR denominator `|φe|·Φa·(4π fc √(d²+H²) / c)²`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LossMetric(pub f64);

impl LossMetric {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Directional antenna gain: `G0/(Φa·|φe|)` inside the beam, zero outside.
pub fn antenna_gain(phi_e: f64, phi_az: f64, params: &LinkParams) -> Result<f64> {
    let in_beam = phi_e.abs() <= PI / 2.0 && phi_az.abs() <= params.half_beamwidth_rad;
    if !in_beam {
        return Ok(0.0);
    }
    if phi_e.abs() < MIN_ELEVATION {
        return Err(Error::SingularElevation(phi_e));
    }
    Ok(params.g0 / (params.half_beamwidth_rad * phi_e.abs()))
}

/// Wall penetration loss `10^(0.5 + 0.4 fc)` with `fc` in GHz.
pub fn penetration_loss(carrier_ghz: f64) -> f64 {
    10f64.powf(0.5 + 0.4 * carrier_ghz)
}

/// Free-space path gain `c² / (4π fc √(d²+H²))²`.
pub fn path_gain(horizontal_m: f64, params: &LinkParams) -> f64 {
    let slant = horizontal_m.hypot(params.altitude_m);
    let k = SPEED_OF_LIGHT / (4.0 * PI * params.carrier_hz() * slant);
    k * k
}

pub fn elevation_angle(horizontal_m: f64, params: &LinkParams) -> f64 {
    (horizontal_m / params.altitude_m).atan()
}

/// Elevation bounded below by `atan(1/H)`, keeping the gain finite at nadir.
pub fn clamped_elevation(horizontal_m: f64, params: &LinkParams) -> f64 {
    elevation_angle(horizontal_m, params).max((1.0 / params.altitude_m).atan())
}

pub fn loss_metric(horizontal_m: f64, params: &LinkParams) -> LossMetric {
    let slant = horizontal_m.hypot(params.altitude_m);
    let k = 4.0 * PI * params.carrier_hz() * slant / SPEED_OF_LIGHT;
    LossMetric(clamped_elevation(horizontal_m, params) * params.half_beamwidth_rad * k * k)
}

pub fn snr_from_metric(metric: LossMetric, loss: f64, params: &LinkParams) -> f64 {
    params.gamma() * params.g0 / (metric.0 * loss)
}

pub fn spectral_efficiency_from_metric(metric: LossMetric, loss: f64, params: &LinkParams) -> f64 {
    (1.0 + snr_from_metric(metric, loss, params)).log2()
}

/// Shannon spectral efficiency (bit/s/Hz) at `x` with the UAV overhead at
/// `uav_xy`; zero when the point lies outside the azimuth beam.
pub fn spectral_efficiency(
    x: &GroundPoint,
    uav_xy: Point2D,
    azimuth_ok: bool,
    params: &LinkParams,
) -> f64 {
    if !azimuth_ok {
        return 0.0;
    }
    let d = x.position.distance(uav_xy);
    spectral_efficiency_from_metric(loss_metric(d, params), params.point_loss(x.indoor), params)
}

/// Conic footprint test: `x` is served while its polar angle about `center`
/// is within ±Φa of the UAV's polar angle and it lies inside the served
/// disc. The cone apex (the center itself) is always inside.
pub fn in_conic_footprint(
    x: Point2D,
    center: Point2D,
    served_radius: f64,
    uav_polar: f64,
    half_beamwidth: f64,
) -> bool {
    let offset = x - center;
    let rho = offset.norm();
    if rho > served_radius {
        return false;
    }
    if rho <= served_radius * 1e-12 {
        return true;
    }
    angular_distance(offset.angle(), uav_polar) <= half_beamwidth
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricTarget {
    /// Far corner of the footprint cone, `(R cos Φa, R sin Φa)`.
    WorstCorner,
    /// Region center.
    Center,
}

/// Far footprint corner relative to the region center, with the UAV on the +x axis.
pub fn worst_corner_offset(region_radius: f64, half_beamwidth: f64) -> Point2D {
    Point2D::from_polar(region_radius, half_beamwidth)
}

/// Horizontal distance from a UAV at `(r_u, 0)` to the worst corner.
pub fn corner_distance(r_u: f64, region_radius: f64, half_beamwidth: f64) -> f64 {
    worst_corner_offset(region_radius, half_beamwidth).distance(Point2D::new(r_u, 0.0))
}

/// Loss metric at the worst corner or at the center for a circular
/// trajectory of radius `r_u ∈ [R/2, R]`.
pub fn worst_point_loss_metric(
    r_u: f64,
    target: MetricTarget,
    region: &Circle,
    params: &LinkParams,
) -> Result<LossMetric> {
    let (lo, hi) = (region.radius / 2.0, region.radius);
    let slack = 1e-12 * region.radius;
    if !(r_u >= lo - slack && r_u <= hi + slack) {
        return Err(Error::OutOfRange {
            name: "r_u",
            value: r_u,
            lo,
            hi,
        });
    }
    let d = match target {
        MetricTarget::WorstCorner => corner_distance(r_u, region.radius, params.half_beamwidth_rad),
        MetricTarget::Center => r_u,
    };
    Ok(loss_metric(d, params))
}
