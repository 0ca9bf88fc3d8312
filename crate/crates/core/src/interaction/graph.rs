//! Interval and distribution edge weights, and the weighted zone graph.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::{PartitionError, Topology};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("interval [{lower}, {upper}] is invalid")]
    Interval { lower: f64, upper: f64 },
    #[error("distribution: {0}")]
    Distribution(String),
    #[error("unknown zone id {0}")]
    UnknownZone(u32),
    #[error(transparent)]
    Topology(#[from] PartitionError),
    #[error("graph file: {0}")]
    Parse(String),
}

/// `[lower, upper]` in °C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionInterval {
    lower: f64,
    upper: f64,
}

impl InteractionInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self, GraphError> {
        if !(lower.is_finite() && upper.is_finite()) || lower < 0.0 || upper < lower {
            return Err(GraphError::Interval { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }
}

/// Sub-interval means `Î_k` with probabilities `P_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionDistribution {
    midpoints: Vec<f64>,
    probabilities: Vec<f64>,
}

impl InteractionDistribution {
    pub fn new(midpoints: Vec<f64>, probabilities: Vec<f64>) -> Result<Self, GraphError> {
        if midpoints.is_empty() || midpoints.len() != probabilities.len() {
            return Err(GraphError::Distribution("empty or mismatched support".into()));
        }
        if probabilities.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(GraphError::Distribution("probability outside [0, 1]".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(GraphError::Distribution(format!("probabilities sum to {total}")));
        }
        Ok(Self { midpoints, probabilities })
    }

    pub fn point_mass(value: f64) -> Self {
        Self { midpoints: vec![value], probabilities: vec![1.0] }
    }

    pub fn midpoints(&self) -> &[f64] {
        &self.midpoints
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn bins(&self) -> usize {
        self.midpoints.len()
    }

    pub fn expectation(&self) -> f64 {
        self.midpoints.iter().zip(&self.probabilities).map(|(m, p)| m * p).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionEdge {
    pub a: u32,
    pub b: u32,
    pub interval: InteractionInterval,
    pub distribution: InteractionDistribution,
}

/// Undirected zone graph with interval and distribution weights per edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionGraph {
    pub zones: Vec<u32>,
    pub edges: Vec<InteractionEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InteractionGraph {
    pub fn zone_index(&self, id: u32) -> Result<usize, GraphError> {
        self.zones.iter().position(|&z| z == id).ok_or(GraphError::UnknownZone(id))
    }

    pub fn topology(&self) -> Result<Topology, GraphError> {
        let mut pairs = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            pairs.push((self.zone_index(e.a)?, self.zone_index(e.b)?));
        }
        Ok(Topology::new(self.zones.len(), &pairs)?)
    }

    pub fn intervals(&self) -> Vec<InteractionInterval> {
        self.edges.iter().map(|e| e.interval).collect()
    }

    pub fn distributions(&self) -> Vec<InteractionDistribution> {
        self.edges.iter().map(|e| e.distribution.clone()).collect()
    }

    /// Graph with point-mass distributions at each interval midpoint.
    pub fn from_intervals(zones: Vec<u32>, edges: &[(u32, u32, f64, f64)]) -> Result<Self, GraphError> {
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b, lo, hi) in edges {
            let interval = InteractionInterval::new(lo, hi)?;
            out.push(InteractionEdge { a, b, interval, distribution: InteractionDistribution::point_mass(interval.midpoint()) });
        }
        let g = Self { zones, edges: out, seed: None };
        g.topology()?;
        Ok(g)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("graph serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, GraphError> {
        let g: Self = toml::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        for e in &g.edges {
            InteractionInterval::new(e.interval.lower, e.interval.upper)?;
            let d = InteractionDistribution::new(e.distribution.midpoints.clone(), e.distribution.probabilities.clone())?;
            let slack = 1e-9 * e.interval.upper.max(1.0);
            for (m, p) in d.midpoints.iter().zip(&d.probabilities) {
                if *p > 0.0 && (*m < e.interval.lower - slack || *m > e.interval.upper + slack) {
                    return Err(GraphError::Distribution(format!(
                        "edge {}-{}: atom {m} lies outside [{}, {}]",
                        e.a, e.b, e.interval.lower, e.interval.upper
                    )));
                }
            }
        }
        g.topology()?;
        Ok(g)
    }
}
