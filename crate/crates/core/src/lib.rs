//! Trajectory planning for a UAV that delivers positioning data over a
//! circular area: a single loss-balanced circle, or a pass over the whole
//! area followed by a tour over building circles, plus a brute-force
//! coverage check for any resulting plan.

pub mod config;
pub mod coverage;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linkbudget;
pub mod multi_region;
pub mod scenario;
pub mod single_circle;

pub use config::SolverConfig;
pub use error::{Error, Result};
pub use scenario::{load_scenario, save_scenario, Scenario};
