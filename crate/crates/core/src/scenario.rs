//! Scenario files and the planning entry points built on them.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::geometry::{Circle, Point2D};
use crate::linkbudget::{db_to_linear, default_g0, penetration_loss, LinkParams};
use crate::multi_region::{
    algorithm3, assemble_mission, order_regions, MissionPlan, RegionSpec, SweepOutcome, TourTiming,
};
use crate::single_circle::{
    plan_single, savings_profile, CoverageRegion, SavingsRow, SingleCirclePlan, VelocityLimit,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkSection {
    carrier_ghz: f64,
    tx_power_dbm: f64,
    noise_density_dbm_hz: f64,
    bandwidth_hz: f64,
    half_beamwidth_rad: f64,
    altitude_m: f64,
    #[serde(default = "default_g0")]
    g0: f64,
    #[serde(default = "one")]
    data_bandwidth_hz: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircleSection {
    center_m: [f64; 2],
    radius_m: f64,
}

impl CircleSection {
    fn to_circle(&self, what: &str) -> Result<Circle> {
        Circle::new(Point2D::new(self.center_m[0], self.center_m[1]), self.radius_m)
            .map_err(|e| Error::Validation(format!("{what}: {e}")))
    }

    fn from_circle(c: &Circle) -> Self {
        CircleSection {
            center_m: [c.center.x, c.center.y],
            radius_m: c.radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VelocitySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v_max_m_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v_max_mph: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    r_th_bits: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outdoor_loss_delta_db: Option<f64>,
    link: LinkSection,
    scanning_area: CircleSection,
    velocity: VelocitySection,
    #[serde(default)]
    solver: SolverConfig,
    #[serde(default)]
    buildings: Vec<CircleSection>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Link parameters with the outdoor loss already applied.
    pub link: LinkParams,
    pub scanning_area: Circle,
    pub buildings: Vec<Circle>,
    /// Outdoor users see `penetration_loss / 10^(Δ/10)`; `None` means no outdoor loss.
    pub outdoor_loss_delta_db: Option<f64>,
    pub r_th: f64,
    pub vlim: VelocityLimit,
    pub solver: SolverConfig,
}

/// Everything produced by the two-phase planner.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiOutcome {
    pub big: SingleCirclePlan,
    pub regions: Vec<RegionSpec>,
    pub sweep: SweepOutcome,
    pub mission: MissionPlan,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub savings: SavingsRow,
    /// Two-phase mission time, present when the scenario has buildings.
    pub t_multi: Option<f64>,
}

impl Scenario {
    pub fn from_toml_str(text: &str, source_name: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse {
            source_name: source_name.to_string(),
            message: e.to_string(),
        })?;
        Self::from_file(file)
    }

    fn from_file(file: ScenarioFile) -> Result<Self> {
        let v_max = match (file.velocity.v_max_m_s, file.velocity.v_max_mph) {
            (Some(ms), None) => VelocityLimit::new(ms)?,
            (None, Some(mph)) => VelocityLimit::from_mph(mph)?,
            _ => {
                return Err(Error::Validation(
                    "velocity: give exactly one of v_max_m_s and v_max_mph".into(),
                ))
            }
        };
        let l = &file.link;
        let outdoor_loss = match file.outdoor_loss_delta_db {
            Some(delta) => penetration_loss(l.carrier_ghz) / db_to_linear(delta),
            None => 1.0,
        };
        let link = LinkParams {
            carrier_ghz: l.carrier_ghz,
            tx_power_dbm: l.tx_power_dbm,
            noise_density_dbm_hz: l.noise_density_dbm_hz,
            bandwidth_hz: l.bandwidth_hz,
            half_beamwidth_rad: l.half_beamwidth_rad,
            altitude_m: l.altitude_m,
            g0: l.g0,
            outdoor_loss,
            data_bandwidth_hz: l.data_bandwidth_hz,
        };
        let scanning_area = file.scanning_area.to_circle("scanning_area")?;
        let buildings = file
            .buildings
            .iter()
            .enumerate()
            .map(|(i, b)| b.to_circle(&format!("buildings[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let scenario = Scenario {
            link,
            scanning_area,
            buildings,
            outdoor_loss_delta_db: file.outdoor_loss_delta_db,
            r_th: file.r_th_bits,
            vlim: v_max,
            solver: file.solver,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        self.link.validate()?;
        self.solver.validate()?;
        if !(self.r_th.is_finite() && self.r_th > 0.0) {
            return Err(Error::Validation(format!("r_th_bits must be positive, got {}", self.r_th)));
        }
        if let Some(delta) = self.outdoor_loss_delta_db {
            if !delta.is_finite() {
                return Err(Error::Validation("outdoor_loss_delta_db must be finite".into()));
            }
        }
        let area = &self.scanning_area;
        for (i, b) in self.buildings.iter().enumerate() {
            if b.center.distance(area.center) + b.radius > area.radius * (1.0 + 1e-12) {
                return Err(Error::Validation(format!(
                    "buildings[{i}] is not inside the scanning area"
                )));
            }
            for (j, other) in self.buildings.iter().enumerate().skip(i + 1) {
                if b.center.distance(other.center) < b.radius + other.radius {
                    return Err(Error::Validation(format!(
                        "buildings[{i}] and buildings[{j}] overlap"
                    )));
                }
            }
        }
        Ok(())
    }

    fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            r_th_bits: self.r_th,
            outdoor_loss_delta_db: self.outdoor_loss_delta_db,
            link: LinkSection {
                carrier_ghz: self.link.carrier_ghz,
                tx_power_dbm: self.link.tx_power_dbm,
                noise_density_dbm_hz: self.link.noise_density_dbm_hz,
                bandwidth_hz: self.link.bandwidth_hz,
                half_beamwidth_rad: self.link.half_beamwidth_rad,
                altitude_m: self.link.altitude_m,
                g0: self.link.g0,
                data_bandwidth_hz: self.link.data_bandwidth_hz,
            },
            scanning_area: CircleSection::from_circle(&self.scanning_area),
            velocity: VelocitySection {
                v_max_m_s: Some(self.vlim.linear_max),
                v_max_mph: None,
            },
            solver: self.solver.clone(),
            buildings: self.buildings.iter().map(CircleSection::from_circle).collect(),
        }
    }

    /// Canonical TOML text; speeds are written in m/s.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(&self.to_file()).expect("scenario serializes to TOML")
    }

    /// Region used by the single-circle plan. With buildings present the
    /// worst point is indoor.
    pub fn single_region(&self) -> CoverageRegion {
        CoverageRegion::new(self.scanning_area, !self.buildings.is_empty())
    }

    pub fn plan_single(&self) -> Result<SingleCirclePlan> {
        plan_single(&self.single_region(), self.r_th, &self.link, &self.vlim, &self.solver)
    }

    /// Outdoor pass over the whole area, then a tour over the buildings.
    pub fn plan_multi(&self) -> Result<MultiOutcome> {
        self.plan_multi_at(self.r_th)
    }

    pub fn plan_multi_at(&self, r_th: f64) -> Result<MultiOutcome> {
        if self.buildings.is_empty() {
            return Err(Error::Validation("plan-multi needs at least one building".into()));
        }
        let cfg = &self.solver;
        let big = plan_single(
            &CoverageRegion::new(self.scanning_area, false),
            r_th,
            &self.link,
            &self.vlim,
            cfg,
        )?;
        let regions = self
            .buildings
            .iter()
            .map(|b| RegionSpec::new(*b, r_th, true, &self.link, cfg))
            .collect::<Result<Vec<_>>>()?;
        let centers: Vec<Point2D> = self.buildings.iter().map(|b| b.center).collect();
        let order = order_regions(&centers, cfg);
        let timing = TourTiming {
            params: &self.link,
            vlim: self.vlim,
        };
        let sweep = algorithm3(&regions, &order, &timing, cfg)?;
        let mission = assemble_mission(&big, &regions, &sweep.state, &self.link, &self.vlim, cfg)?;
        Ok(MultiOutcome {
            big,
            regions,
            sweep,
            mission,
        })
    }

    /// Savings profile over `steps` thresholds evenly spaced in `[rth_min, rth_max]`.
    pub fn sweep(&self, rth_min: f64, rth_max: f64, steps: usize) -> Result<Vec<SweepRow>> {
        if steps == 0 || !(rth_min > 0.0 && rth_max >= rth_min) {
            return Err(Error::Validation(
                "sweep needs 0 < rth_min <= rth_max and at least one step".into(),
            ));
        }
        let grid: Vec<f64> = if steps == 1 {
            vec![rth_min]
        } else {
            (0..steps)
                .map(|k| rth_min + (rth_max - rth_min) * k as f64 / (steps - 1) as f64)
                .collect()
        };
        let rows = savings_profile(&self.single_region(), &grid, &self.link, &self.vlim, &self.solver)?;
        let multi: Vec<Option<f64>> = if self.buildings.is_empty() {
            vec![None; grid.len()]
        } else {
            grid.par_iter()
                .map(|&r| self.plan_multi_at(r).map(|m| Some(m.mission.total_time)))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(rows
            .into_iter()
            .zip(multi)
            .map(|(savings, t_multi)| SweepRow { savings, t_multi })
            .collect())
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Scenario::from_toml_str(&text, &path.display().to_string())
}

pub fn save_scenario(scenario: &Scenario, path: &Path) -> Result<()> {
    std::fs::write(path, scenario.to_toml_string()).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
