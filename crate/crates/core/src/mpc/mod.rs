//! Centralized and decentralized receding-horizon control of a building,
//! and the metrics that rank control architectures.
//!
//! Every controller solves a linear program per step: heating and cooling
//! power over the horizon, one slack per occupied zone-step, cost
//! `Σ w_u (h + c) + w_v Σ slack`. The plant is always the full model.

mod controller;
mod metrics;
mod report;

use thiserror::Error;

pub use controller::{build_cluster_models, day_outcome, periodic_start, run_mpc, ClusterModel, DayRun, Fault, FaultScenario, MpcConfig};
pub use metrics::{fpm, metrics, odm, performance_index, rank_partitions, wpm, MetricWeights, Metrics, Triple};
pub use report::{evaluate_architectures, replay_metrics, Architecture, EvaluationPlan, EvaluationReport, EvaluationRow, ReplayRow};

use crate::lp::LpError;
use crate::thermal::ThermalError;

/// Day of the bundled weather year used for evaluation (mid-January).
pub const REPRESENTATIVE_DAY: usize = 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MpcError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Thermal(#[from] ThermalError),
    #[error("controller LP: {0}")]
    Lp(#[from] LpError),
    #[error("solver: {0}")]
    Solver(String),
    #[error("i/o: {0}")]
    Io(String),
}

#[cfg(test)]
mod tests;
