pub mod interaction;
pub mod lp;
pub mod milp;
pub mod mpc;
pub mod partition;
pub mod scalar;
pub mod thermal;

pub use scalar::{Rational, Scalar};

pub type StateSpaceModel = thermal::StateSpace<f64>;
pub type MilpProblem = milp::Milp<f64>;
pub type ExactMilpProblem = milp::Milp<Rational>;
