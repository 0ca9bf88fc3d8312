//! Multi-zone RC thermal models.
//!
//! A [`BuildingDescription`] lists zones, walls (3R2C or 1R), openings and
//! gain injection. [`build_model`] assembles the continuous RC network and
//! discretizes it with a zero-order hold at 15-minute sampling. State order
//! is fixed: zone air nodes in zone order, then wall mass nodes in wall
//! order.

mod building;
mod disturbance;
mod model;

use thiserror::Error;

pub use building::{BuildingDescription, Endpoint, Gains, Opening, SolarGain, Wall, WallKind, Zone};
pub use disturbance::{steps_per_day, DisturbanceSeries};
pub use model::{build_model, decouple_zone, decouple_zones, Channel, RcNetwork, SimulationTrace, StateLabel, StateSpace, DT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThermalError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("unknown zone id {0}")]
    UnknownZone(u32),
    #[error("building file: {0}")]
    Parse(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("disturbance data line {line}: {msg}")]
    Disturbance { line: usize, msg: String },
    #[error("disturbance data has no column `{0}`")]
    MissingColumn(String),
    #[error("i/o: {0}")]
    Io(String),
}

const FIVE_ZONE: &str = include_str!("../../data/five_zone.toml");

/// The bundled synthetic five-zone office.
pub fn five_zone_building() -> BuildingDescription {
    BuildingDescription::from_toml(FIVE_ZONE).expect("bundled building is valid")
}

/// Source text of the bundled building.
pub fn five_zone_building_toml() -> &'static str {
    FIVE_ZONE
}

/// Synthetic weather year used with the bundled building.
pub fn bundled_weather(building: &BuildingDescription) -> DisturbanceSeries {
    DisturbanceSeries::synthetic_year(building, 2023, 7)
}
