use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use isac_planner::coverage::{verify, VerifyOptions};
use isac_planner::io::{read_text, write_sweep_csv, write_text, PlanFile, ReportFile};
use isac_planner::{load_scenario, Error};

/// Circular-trajectory planner for UAV positioning and data delivery.
#[derive(Parser)]
#[command(name = "isac-planner", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one loss-balanced circle over the scanning area.
    PlanSingle {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Plan an outdoor pass followed by a tour over the buildings.
    PlanMulti {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a plan against the data threshold on a ground grid.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Accepted relative shortfall; defaults to the scenario's solver.rel_slack.
        #[arg(long)]
        rel_slack: Option<f64>,
    },
    /// Completion times at R/2 and at the balanced radius over a threshold range.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        rth_min: f64,
        #[arg(long)]
        rth_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Invalid(Error),
    Unverified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResolutionTooCoarse { .. } => Failure::Unverified(e.to_string()),
            other => Failure::Invalid(other),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::PlanSingle { scenario, out } => {
            let s = load_scenario(&scenario)?;
            let plan = s.plan_single()?;
            info!(
                "single circle: r_u = {:.3} m, v = {:.6e} rad/s, T = {:.3} s",
                plan.r_u, plan.angular_velocity, plan.completion_time
            );
            write_text(&out, &PlanFile::from_single(&plan).to_toml_string())?;
        }
        Command::PlanMulti { scenario, out } => {
            let s = load_scenario(&scenario)?;
            let outcome = s.plan_multi()?;
            info!(
                "two-phase mission: T = {:.3} s over {} segments",
                outcome.mission.total_time,
                outcome.mission.segments.len()
            );
            write_text(&out, &PlanFile::from_multi(&outcome).to_toml_string())?;
        }
        Command::Verify { scenario, plan, out, rel_slack } => {
            let s = load_scenario(&scenario)?;
            let file = PlanFile::from_toml_str(&read_text(&plan)?, &plan.display().to_string())?;
            let mission = file.to_mission()?;
            let mut opts = VerifyOptions::from_config(&s.solver, &mission, &s.scanning_area, &s.link);
            if let Some(slack) = rel_slack {
                opts.rel_slack = slack;
            }
            let report = verify(&mission, &s.scanning_area, &s.buildings, &s.link, s.r_th, &opts)?;
            write_text(&out, &ReportFile::from_report(&report).to_toml_string())?;
            if !report.pass {
                return Err(Failure::Unverified(format!(
                    "{} of {} grid points below threshold (min {:.6e} bits)",
                    report.violations.len(),
                    report.points,
                    report.min_delivered
                )));
            }
        }
        Command::Sweep { scenario, rth_min, rth_max, steps, out } => {
            let s = load_scenario(&scenario)?;
            let rows = s.sweep(rth_min, rth_max, steps)?;
            let file = std::fs::File::create(&out).map_err(|e| Error::Io {
                path: out.display().to_string(),
                message: e.to_string(),
            })?;
            write_sweep_csv(&rows, file)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ISAC_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Unverified(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
