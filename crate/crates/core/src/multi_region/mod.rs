//! Tour over several circular regions after a pass over the whole area.

mod connect;
mod mission;
mod order;

pub use connect::{
    algorithm2, algorithm3, connector_sum, initial_state, optimize_angle, optimize_radius, ConnectState,
    LocalOutcome, RegionSpec, SweepOutcome, TourTiming,
};
pub use mission::{assemble_mission, MissionPlan, MissionSegment, RegionTiming};
pub use order::{exact_order, order_regions, path_length};
