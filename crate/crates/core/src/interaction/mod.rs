//! Closed-loop excitation of a building and interval-valued interaction
//! weights between neighbouring zones.
//!
//! The interaction of zone `j` on zone `i` is the per-step deviation of
//! `T_i` when `j` is removed from the model (its shared surfaces made
//! adiabatic) under the same inputs and weather. Over a year, the minimum
//! and maximum of this deviation, averaged over both directions, form the
//! edge interval; the per-step samples give the edge distribution.

use thiserror::Error;

mod comfort;
mod excitation;
mod graph;
mod quantify;

pub use comfort::{widen_comfort, ComfortBand, ComfortSchedule, DailyComfort};
pub use excitation::{
    fit_first_order, generate_excitation, tune_pi, ExcitationInput, FirstOrderFit, PiGains, DWELL_STEPS, PREHEAT_STEPS, REFERENCE_SMOOTHING,
};
pub use graph::{GraphError, InteractionDistribution, InteractionEdge, InteractionGraph, InteractionInterval};
pub use quantify::{average_directions, build_graph, estimate_distribution, interaction_interval, Quantifier, DEFAULT_BINS};

use crate::thermal::ThermalError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InteractionError {
    #[error(transparent)]
    Thermal(#[from] ThermalError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("zones {0} and {1} share no surface or opening")]
    NotAdjacent(u32, u32),
    #[error("comfort schedule: {0}")]
    Schedule(String),
    #[error("excitation: {0}")]
    Excitation(String),
    #[error("samples: {0}")]
    Samples(String),
}

#[cfg(test)]
mod tests;
