//! Plan, report and sweep files. Field names carry their units.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coverage::{CoverageReport, Violation};
use crate::error::{Error, Result};
use crate::geometry::{Arc, Circle, Direction, Line, Point2D};
use crate::multi_region::{MissionPlan, MissionSegment, RegionTiming};
use crate::scenario::{MultiOutcome, SweepRow};
use crate::single_circle::SingleCirclePlan;

/// Violations written to a report file; the full count is kept separately.
pub const REPORT_VIOLATION_LIMIT: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum SegmentRecord {
    Arc {
        center_m: [f64; 2],
        radius_m: f64,
        start_angle_rad: f64,
        sweep_rad: f64,
        direction: Direction,
        v_rad_s: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        region: Option<usize>,
        time_s: f64,
    },
    Line {
        from_m: [f64; 2],
        to_m: [f64; 2],
        speed_m_s: f64,
        time_s: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionRecord {
    pub region: usize,
    pub radius_m: f64,
    pub v_rad_s: f64,
    pub traversal_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleSummary {
    pub r_u_m: f64,
    pub v_rad_s: f64,
    pub completion_time_s: f64,
    pub data_at_worst_bits: f64,
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiSummary {
    pub order: Vec<usize>,
    pub connector_sum_m: f64,
    pub initial_connector_sum_m: f64,
    pub sweeps: usize,
    pub phase1_r_u_m: f64,
    pub phase1_v_rad_s: f64,
    pub time_trace_s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub kind: String,
    pub total_time_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub single: Option<SingleSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multi: Option<MultiSummary>,
    pub segments: Vec<SegmentRecord>,
    #[serde(default)]
    pub regions: Vec<RegionRecord>,
}

fn pair(p: Point2D) -> [f64; 2] {
    [p.x, p.y]
}

fn point(p: [f64; 2]) -> Point2D {
    Point2D::new(p[0], p[1])
}

fn segment_records(plan: &MissionPlan) -> Vec<SegmentRecord> {
    plan.segments
        .iter()
        .map(|s| match *s {
            MissionSegment::Arc { arc, angular_velocity, region } => SegmentRecord::Arc {
                center_m: pair(arc.circle.center),
                radius_m: arc.circle.radius,
                start_angle_rad: arc.start_angle,
                sweep_rad: arc.sweep,
                direction: arc.direction,
                v_rad_s: angular_velocity,
                region,
                time_s: s.duration(),
            },
            MissionSegment::Line { line, speed } => SegmentRecord::Line {
                from_m: pair(line.from),
                to_m: pair(line.to),
                speed_m_s: speed,
                time_s: s.duration(),
            },
        })
        .collect()
}

fn region_records(timings: &[RegionTiming]) -> Vec<RegionRecord> {
    timings
        .iter()
        .map(|t| RegionRecord {
            region: t.region,
            radius_m: t.radius,
            v_rad_s: t.angular_velocity,
            traversal_time_s: t.traversal_time,
        })
        .collect()
}

impl PlanFile {
    pub fn from_single(plan: &SingleCirclePlan) -> Self {
        let mission = MissionPlan::from_single(plan);
        PlanFile {
            kind: "single".into(),
            total_time_s: mission.total_time,
            single: Some(SingleSummary {
                r_u_m: plan.r_u,
                v_rad_s: plan.angular_velocity,
                completion_time_s: plan.completion_time,
                data_at_worst_bits: plan.data_at_worst,
                clamped: plan.clamped,
            }),
            multi: None,
            segments: segment_records(&mission),
            regions: Vec::new(),
        }
    }

    pub fn from_multi(outcome: &MultiOutcome) -> Self {
        let state = &outcome.sweep.state;
        PlanFile {
            kind: "multi".into(),
            total_time_s: outcome.mission.total_time,
            single: None,
            multi: Some(MultiSummary {
                order: state.order.clone(),
                connector_sum_m: state.connector_sum,
                initial_connector_sum_m: outcome.sweep.initial_connector_sum,
                sweeps: outcome.sweep.sweeps,
                phase1_r_u_m: outcome.big.r_u,
                phase1_v_rad_s: outcome.big.angular_velocity,
                time_trace_s: outcome.sweep.time_trace.clone(),
            }),
            segments: segment_records(&outcome.mission),
            regions: region_records(&outcome.mission.per_region),
        }
    }

    /// Mission rebuilt from the segment records; times are recomputed from
    /// the stored speeds.
    pub fn to_mission(&self) -> Result<MissionPlan> {
        let segments = self
            .segments
            .iter()
            .map(|s| match *s {
                SegmentRecord::Arc {
                    center_m,
                    radius_m,
                    start_angle_rad,
                    sweep_rad,
                    direction,
                    v_rad_s,
                    region,
                    ..
                } => Ok(MissionSegment::Arc {
                    arc: Arc {
                        circle: Circle::new(point(center_m), radius_m)?,
                        start_angle: start_angle_rad,
                        sweep: sweep_rad,
                        direction,
                    },
                    angular_velocity: v_rad_s,
                    region,
                }),
                SegmentRecord::Line { from_m, to_m, speed_m_s, .. } => Ok(MissionSegment::Line {
                    line: Line { from: point(from_m), to: point(to_m) },
                    speed: speed_m_s,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        let per_region = self
            .regions
            .iter()
            .map(|r| RegionTiming {
                region: r.region,
                radius: r.radius_m,
                angular_velocity: r.v_rad_s,
                traversal_time: r.traversal_time_s,
            })
            .collect();
        let mut plan = MissionPlan { segments, total_time: 0.0, per_region };
        plan.recompute_total();
        Ok(plan)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("plan serializes to TOML")
    }

    pub fn from_toml_str(text: &str, source_name: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            source_name: source_name.to_string(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub pass: bool,
    pub threshold_bits: f64,
    pub rel_slack: f64,
    pub grid_step_m: f64,
    pub dt_s: f64,
    pub points: usize,
    pub min_delivered_bits: f64,
    pub min_location_m: [f64; 2],
    pub refined_min_delivered_bits: f64,
    pub window_errors: usize,
    pub uncovered_points: usize,
    pub mobile: bool,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
}

impl ReportFile {
    pub fn from_report(r: &CoverageReport) -> Self {
        ReportFile {
            pass: r.pass,
            threshold_bits: r.threshold,
            rel_slack: r.rel_slack,
            grid_step_m: r.grid_step,
            dt_s: r.dt,
            points: r.points,
            min_delivered_bits: r.min_delivered,
            min_location_m: pair(r.min_location),
            refined_min_delivered_bits: r.refined_min_delivered,
            window_errors: r.window_errors,
            uncovered_points: r.uncovered_points,
            mobile: r.mobile,
            violation_count: r.violations.len(),
            violations: r.violations.iter().take(REPORT_VIOLATION_LIMIT).copied().collect(),
        }
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("report serializes to TOML")
    }
}

pub const SWEEP_HEADER: [&str; 7] = [
    "r_th_bits",
    "v_half_rad_s",
    "v_opt_rad_s",
    "t_half_s",
    "t_opt_s",
    "savings_pct",
    "regime",
];

/// Sweep table as CSV. A `t_multi_s` column is added when any row has it.
pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let io_err = |e: csv::Error| Error::Io {
        path: "sweep csv".into(),
        message: e.to_string(),
    };
    let with_multi = rows.iter().any(|r| r.t_multi.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = SWEEP_HEADER.to_vec();
    if with_multi {
        header.push("t_multi_s");
    }
    w.write_record(&header).map_err(io_err)?;
    for row in rows {
        let s = &row.savings;
        let regime = match s.regime {
            crate::single_circle::Regime::Zero => "zero",
            crate::single_circle::Regime::Ramp => "ramp",
            crate::single_circle::Regime::Constant => "constant",
        };
        let mut record = vec![
            s.r_th.to_string(),
            s.v_half.to_string(),
            s.v_opt.to_string(),
            s.t_half.to_string(),
            s.t_opt.to_string(),
            s.savings_pct.to_string(),
            regime.to_string(),
        ];
        if with_multi {
            record.push(row.t_multi.map(|t| t.to_string()).unwrap_or_default());
        }
        w.write_record(&record).map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: "sweep csv".into(),
        message: e.to_string(),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
