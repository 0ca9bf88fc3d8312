//! Mixed 0/1 linear program for minimum-interaction zone clustering.
//!
//! Decision variables, stacked in this order:
//!
//! * `p[i,c]` binary: zone `i` belongs to cluster `c` (`N_z · n` columns),
//! * `s[e,c]` in `[0,1]`: edge `e` lies inside cluster `c` (`|E| · n`),
//! * `r[e]` in `[0,1]`: edge `e` lies inside some cluster (`|E|`).
//!
//! `s` and `r` take integral values at any vertex where `p` is integral,
//! so only `p` is branched on. Every constraint is stored as a `≤` row;
//! equalities are split into two rows. The objective is
//! `Σ_e μ_e (1 − r_e)`, kept as the constant `Σ μ` plus a cost of `−μ_e` on
//! each `r_e`, and the constant is added back into every reported value.

mod bnb;
mod mps;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interaction::{InteractionDistribution, InteractionInterval};
use crate::lp::{LinearProgram, LpError};
use crate::partition::{split_disconnected, Partition, Topology};
use crate::scalar::Scalar;

pub use bnb::{BranchAndBound, BranchAndBoundOptions};
pub use mps::{read_mps, write_mps, MpsModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MilpError {
    #[error("cluster count {n} outside 1..={zones}")]
    ClusterCount { n: usize, zones: usize },
    #[error("expected {expected} per-edge values, got {got}")]
    EdgeCount { expected: usize, got: usize },
    #[error("edge {edge}: upper endpoint {upper} below lower endpoint {lower}")]
    DegenerateInterval { edge: usize, lower: f64, upper: f64 },
    #[error("edge {edge}: {msg}")]
    BadDistribution { edge: usize, msg: String },
    #[error("p[{zone},{cluster}] = {value} is not integral")]
    NonIntegral { zone: usize, cluster: usize, value: f64 },
    #[error("solution is not optimal ({0})")]
    NotOptimal(MilpStatus),
    #[error("LP relaxation is unbounded")]
    Unbounded,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("solution listing line {line}: {msg}")]
    SolutionParse { line: usize, msg: String },
    #[error("MPS line {line}: {msg}")]
    Mps { line: usize, msg: String },
}

/// Which formulation family a row comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowOrigin {
    /// `Σ_c p[i,c] = 1`, as two rows.
    ZoneAssignment,
    /// `Σ_i p[i,c] ≥ 1`.
    ClusterNonEmpty,
    /// `Σ_c s[e,c] ≤ 1`.
    EdgeAtMostOnce,
    /// `s[e,c] ≤ p[i,c]` for the first endpoint.
    EdgeNeedsFirst,
    /// `s[e,c] ≤ p[j,c]` for the second endpoint.
    EdgeNeedsSecond,
    /// `p[i,c] + p[j,c] ≤ s[e,c] + 1`.
    EdgeConnectivity,
    /// `r[e] = Σ_c s[e,c]`, as two rows.
    EdgeCovered,
    /// `M_min ≤ Σ_i p[i,c] ≤ M_max`.
    ClusterSize,
    /// `|size(a) − size(b)| ≤ M_r`, one row per ordered pair.
    RelativeSize,
    /// Optional ordering of clusters by their lowest zone.
    SymmetryBreaking,
    /// Worst-case cost `≤ z` of the robust counterpart.
    RobustEpigraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeLimits {
    pub min_size: usize,
    pub max_size: usize,
    pub max_difference: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub size_limits: Option<SizeLimits>,
    pub symmetry_breaking: bool,
}

/// Column indices of the `p`, `s`, `r` (and optional `z`) blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariableLayout {
    pub zones: usize,
    pub clusters: usize,
    pub edges: usize,
    pub epigraph: Option<usize>,
}

impl VariableLayout {
    pub fn p(&self, zone: usize, cluster: usize) -> usize {
        zone * self.clusters + cluster
    }

    pub fn s(&self, edge: usize, cluster: usize) -> usize {
        self.zones * self.clusters + edge * self.clusters + cluster
    }

    pub fn r(&self, edge: usize) -> usize {
        self.zones * self.clusters + self.edges * self.clusters + edge
    }

    /// `N_z·n + |E|(n+1)`.
    pub fn base_columns(&self) -> usize {
        self.zones * self.clusters + self.edges * (self.clusters + 1)
    }
}

/// Row count of the base model: `2N_z + n + |E|(3n+3)`, plus `n(n+1)`
/// when size limits are present. Symmetry-breaking rows are not counted.
pub fn base_row_count(zones: usize, clusters: usize, edges: usize, with_size_limits: bool) -> usize {
    let mut rows = 2 * zones + clusters + edges * (3 * clusters + 3);
    if with_size_limits {
        rows += clusters * (clusters + 1);
    }
    rows
}

/// Clustering MILP over scalar type `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Milp<S> {
    layout: VariableLayout,
    edges: Vec<(usize, usize)>,
    lp: LinearProgram<S>,
    integer: Vec<bool>,
    origins: Vec<RowOrigin>,
    objective_constant: S,
    warnings: Vec<String>,
}

impl<S: Scalar> Milp<S> {
    pub fn layout(&self) -> &VariableLayout {
        &self.layout
    }

    pub fn lp(&self) -> &LinearProgram<S> {
        &self.lp
    }

    pub fn integer_mask(&self) -> &[bool] {
        &self.integer
    }

    pub fn row_origins(&self) -> &[RowOrigin] {
        &self.origins
    }

    pub fn objective_constant(&self) -> &S {
        &self.objective_constant
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_rows(&self) -> usize {
        self.lp.num_rows()
    }

    pub fn num_columns(&self) -> usize {
        self.lp.num_vars()
    }

    /// Objective at `x`, constant included.
    pub fn objective_at(&self, x: &[S]) -> S {
        self.lp.evaluate(x) + self.objective_constant.clone()
    }

    /// Column names used for MPS export and solution listings.
    pub fn variable_names(&self) -> Vec<String> {
        let l = &self.layout;
        let mut names = Vec::with_capacity(self.lp.num_vars());
        for i in 0..l.zones {
            for c in 0..l.clusters {
                names.push(format!("p_{}_{}", i + 1, c + 1));
            }
        }
        for &(a, b) in &self.edges {
            for c in 0..l.clusters {
                names.push(format!("s_{}_{}_{}", a + 1, b + 1, c + 1));
            }
        }
        for &(a, b) in &self.edges {
            names.push(format!("r_{}_{}", a + 1, b + 1));
        }
        if l.epigraph.is_some() {
            names.push("z".to_string());
        }
        names
    }

    /// Replaces the objective by `Σ_e μ_e (1 − r_e)`.
    pub fn with_edge_weights(mut self, weights: &[S]) -> Result<Self, MilpError> {
        if weights.len() != self.layout.edges {
            return Err(MilpError::EdgeCount { expected: self.layout.edges, got: weights.len() });
        }
        for j in 0..self.lp.num_vars() {
            self.lp.set_cost(j, S::zero());
        }
        let mut constant = S::zero();
        for (e, w) in weights.iter().enumerate() {
            constant = constant + w.clone();
            self.lp.set_cost(self.layout.r(e), -w.clone());
        }
        self.objective_constant = constant;
        Ok(self)
    }

    /// Recovers the `p`-block as a 0/1 matrix, rounding within `tol`.
    fn assignment(&self, x: &[S], tol: f64) -> Result<Vec<usize>, MilpError> {
        let l = &self.layout;
        let mut labels = Vec::with_capacity(l.zones);
        for i in 0..l.zones {
            let mut chosen = None;
            for c in 0..l.clusters {
                let v = x[l.p(i, c)].to_f64_lossy();
                if (v - v.round()).abs() > tol {
                    return Err(MilpError::NonIntegral { zone: i, cluster: c, value: v });
                }
                if v.round() == 1.0 && chosen.is_none() {
                    chosen = Some(c);
                }
            }
            let c = chosen.ok_or(MilpError::NonIntegral { zone: i, cluster: 0, value: 0.0 })?;
            labels.push(c);
        }
        Ok(labels)
    }
}

/// Assembles the cluster-formation constraints for `n` clusters, with a
/// zero objective.
pub fn build_base<S: Scalar>(topo: &Topology, n: usize, options: BuildOptions) -> Result<Milp<S>, MilpError> {
    let nz = topo.num_vertices();
    if n == 0 || n > nz {
        return Err(MilpError::ClusterCount { n, zones: nz });
    }
    let ne = topo.num_edges();
    let layout = VariableLayout { zones: nz, clusters: n, edges: ne, epigraph: None };
    let cols = layout.base_columns();
    let mut lp = LinearProgram::new(cols);
    let mut integer = vec![false; cols];
    for i in 0..nz {
        for c in 0..n {
            let j = layout.p(i, c);
            lp.set_bounds(j, S::zero(), Some(S::one()));
            integer[j] = true;
        }
    }
    for e in 0..ne {
        for c in 0..n {
            lp.set_bounds(layout.s(e, c), S::zero(), Some(S::one()));
        }
        lp.set_bounds(layout.r(e), S::zero(), Some(S::one()));
    }

    let one = S::one;
    let mut origins = Vec::new();
    let mut push = |lp: &mut LinearProgram<S>, coeffs: Vec<(usize, S)>, rhs: S, origin: RowOrigin| {
        lp.add_row(coeffs, rhs);
        origins.push(origin);
    };

    for i in 0..nz {
        let row: Vec<_> = (0..n).map(|c| (layout.p(i, c), one())).collect();
        push(&mut lp, row.clone(), one(), RowOrigin::ZoneAssignment);
        push(&mut lp, negate(row), -one(), RowOrigin::ZoneAssignment);
    }
    for c in 0..n {
        let row: Vec<_> = (0..nz).map(|i| (layout.p(i, c), -one())).collect();
        push(&mut lp, row, -one(), RowOrigin::ClusterNonEmpty);
    }
    for e in 0..ne {
        let row: Vec<_> = (0..n).map(|c| (layout.s(e, c), one())).collect();
        push(&mut lp, row, one(), RowOrigin::EdgeAtMostOnce);
    }
    for (e, &(a, b)) in topo.edges().iter().enumerate() {
        for c in 0..n {
            push(&mut lp, vec![(layout.s(e, c), one()), (layout.p(a, c), -one())], S::zero(), RowOrigin::EdgeNeedsFirst);
        }
        for c in 0..n {
            push(&mut lp, vec![(layout.s(e, c), one()), (layout.p(b, c), -one())], S::zero(), RowOrigin::EdgeNeedsSecond);
        }
        for c in 0..n {
            push(&mut lp, vec![(layout.p(a, c), one()), (layout.p(b, c), one()), (layout.s(e, c), -one())], one(), RowOrigin::EdgeConnectivity);
        }
    }
    for e in 0..ne {
        let mut row: Vec<_> = (0..n).map(|c| (layout.s(e, c), -one())).collect();
        row.push((layout.r(e), one()));
        push(&mut lp, row.clone(), S::zero(), RowOrigin::EdgeCovered);
        push(&mut lp, negate(row), S::zero(), RowOrigin::EdgeCovered);
    }

    let mut warnings = Vec::new();
    if let Some(limits) = options.size_limits {
        if limits.min_size * n > nz {
            warnings.push(format!("minimum cluster size {} times {n} clusters exceeds {nz} zones; model is infeasible", limits.min_size));
        }
        if limits.max_size * n < nz {
            warnings.push(format!("maximum cluster size {} times {n} clusters is below {nz} zones; model is infeasible", limits.max_size));
        }
        let size = |c: usize, sign: S| -> Vec<(usize, S)> { (0..nz).map(|i| (layout.p(i, c), sign.clone())).collect() };
        for c in 0..n {
            push(&mut lp, size(c, one()), S::from_usize(limits.max_size).unwrap(), RowOrigin::ClusterSize);
            push(&mut lp, size(c, -one()), -S::from_usize(limits.min_size).unwrap(), RowOrigin::ClusterSize);
        }
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    let mut row = size(a, one());
                    row.extend(size(b, -one()));
                    push(&mut lp, row, S::from_usize(limits.max_difference).unwrap(), RowOrigin::RelativeSize);
                }
            }
        }
    }

    if options.symmetry_breaking {
        // zone i may only open cluster c if some lower zone sits in c-1
        for i in 0..nz {
            for c in 1..n {
                if c > i {
                    lp.set_bounds(layout.p(i, c), S::zero(), Some(S::zero()));
                    continue;
                }
                let mut row = vec![(layout.p(i, c), one())];
                row.extend((0..i).map(|k| (layout.p(k, c - 1), -one())));
                push(&mut lp, row, S::zero(), RowOrigin::SymmetryBreaking);
            }
        }
    }

    Ok(Milp { layout, edges: topo.edges().to_vec(), lp, integer, origins, objective_constant: S::zero(), warnings })
}

fn negate<S: Scalar>(row: Vec<(usize, S)>) -> Vec<(usize, S)> {
    row.into_iter().map(|(j, a)| (j, -a)).collect()
}

/// Per-edge expected interaction `μˢ_e = Σ_k P_e,k · Î_e,k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticWeights<S>(pub Vec<S>);

impl<S: Scalar> StochasticWeights<S> {
    pub fn from_distributions(distributions: &[InteractionDistribution]) -> Result<Self, MilpError> {
        let mut out = Vec::with_capacity(distributions.len());
        for (e, d) in distributions.iter().enumerate() {
            if d.midpoints().is_empty() || d.midpoints().len() != d.probabilities().len() {
                return Err(MilpError::BadDistribution { edge: e, msg: "empty or mismatched support".into() });
            }
            let mu = d.midpoints().iter().zip(d.probabilities()).fold(S::zero(), |acc, (m, p)| acc + S::from_f64_lossy(*m) * S::from_f64_lossy(*p));
            out.push(mu);
        }
        Ok(Self(out))
    }
}

/// Sets the expected-cost objective `(1 − r)ᵀ μˢ`.
pub fn stochastic_objective<S: Scalar>(problem: Milp<S>, distributions: &[InteractionDistribution]) -> Result<Milp<S>, MilpError> {
    if distributions.len() != problem.layout.edges {
        return Err(MilpError::EdgeCount { expected: problem.layout.edges, got: distributions.len() });
    }
    let weights = StochasticWeights::from_distributions(distributions)?;
    problem.with_edge_weights(&weights.0)
}

/// Epigraph reformulation under box uncertainty `μ ∈ [μ_min, μ_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustProblem<S> {
    pub problem: Milp<S>,
    /// Interval centres `μ̄ = (μ_max + μ_min)/2`.
    pub mean: Vec<S>,
    /// Half-widths `μ_mg = μ_max − μ̄`.
    pub margin: Vec<S>,
}

impl<S: Scalar> RobustProblem<S> {
    pub fn epigraph_column(&self) -> usize {
        self.problem.layout.epigraph.expect("robust problem carries z")
    }

    /// Drops the epigraph row and column, restoring the base constraints.
    pub fn base(&self) -> Milp<S> {
        let p = &self.problem;
        let z = self.epigraph_column();
        let mut lp = LinearProgram::new(z);
        for j in 0..z {
            lp.set_bounds(j, p.lp.lower()[j].clone(), p.lp.upper()[j].clone());
        }
        let mut origins = Vec::new();
        for ((row, b), origin) in p.lp.rows().iter().zip(p.lp.rhs()).zip(&p.origins) {
            if *origin == RowOrigin::RobustEpigraph {
                continue;
            }
            lp.add_row(row.iter().cloned(), b.clone());
            origins.push(*origin);
        }
        Milp {
            layout: VariableLayout { epigraph: None, ..p.layout },
            edges: p.edges.clone(),
            lp,
            integer: p.integer[..z].to_vec(),
            origins,
            objective_constant: S::zero(),
            warnings: p.warnings.clone(),
        }
    }
}

/// Builds `min z  s.t.  (1 − r)ᵀ(μ̄ + μ_mg) ≤ z`, which is the worst case of
/// `(1 − r)ᵀ μ` over every `μ` in the interval box because `1 − r ≥ 0`.
pub fn robust_counterpart<S: Scalar>(problem: Milp<S>, intervals: &[InteractionInterval]) -> Result<RobustProblem<S>, MilpError> {
    let l = problem.layout;
    if l.epigraph.is_some() {
        return Ok(RobustProblem { problem, mean: Vec::new(), margin: Vec::new() });
    }
    if intervals.len() != l.edges {
        return Err(MilpError::EdgeCount { expected: l.edges, got: intervals.len() });
    }
    let two = S::one() + S::one();
    let mut mean = Vec::with_capacity(l.edges);
    let mut margin = Vec::with_capacity(l.edges);
    for (e, iv) in intervals.iter().enumerate() {
        if iv.upper() < iv.lower() {
            return Err(MilpError::DegenerateInterval { edge: e, lower: iv.lower(), upper: iv.upper() });
        }
        let lo = S::from_f64_lossy(iv.lower());
        let hi = S::from_f64_lossy(iv.upper());
        let m = (hi.clone() + lo) / two.clone();
        margin.push(hi - m.clone());
        mean.push(m);
    }
    let mut p = problem;
    for j in 0..p.lp.num_vars() {
        p.lp.set_cost(j, S::zero());
    }
    p.objective_constant = S::zero();
    let z = p.lp.add_var(S::zero(), None, S::one());
    p.integer.push(false);
    p.layout.epigraph = Some(z);

    let mut row = vec![(z, -S::one())];
    let mut total = S::zero();
    for e in 0..l.edges {
        let worst = mean[e].clone() + margin[e].clone();
        total = total + worst.clone();
        row.push((l.r(e), -worst));
    }
    p.lp.add_row(row, -total);
    p.origins.push(RowOrigin::RobustEpigraph);
    Ok(RobustProblem { problem: p, mean, margin })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MilpStatus {
    Optimal,
    Infeasible,
    NodeLimit,
}

impl fmt::Display for MilpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MilpStatus::Optimal => write!(f, "optimal"),
            MilpStatus::Infeasible => write!(f, "infeasible"),
            MilpStatus::NodeLimit => write!(f, "node-limit"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpSolution<S> {
    pub status: MilpStatus,
    /// Objective including the constant term; `None` without an incumbent.
    pub objective: Option<S>,
    pub values: Vec<S>,
    pub nodes: usize,
    pub lp_iterations: usize,
    /// Incumbent minus best open bound when the node limit stopped the search.
    pub gap: Option<S>,
    /// Largest distance to integrality of any `s`/`r` value seen at a
    /// node whose `p` block was integral.
    pub leaf_fractionality: S,
    /// Number of such integral-`p` nodes.
    pub integral_leaves: usize,
}

/// A MILP engine. The built-in one is [`BranchAndBound`]; external
/// solvers can be slotted in by reading [`Milp::lp`] and
/// [`Milp::integer_mask`] (or the MPS export) and returning values in
/// column order.
pub trait MilpBackend<S: Scalar> {
    fn solve(&self, problem: &Milp<S>) -> Result<MilpSolution<S>, MilpError>;
}

/// Solves `problem` with `backend`.
pub fn solve<S: Scalar, B: MilpBackend<S> + ?Sized>(problem: &Milp<S>, backend: &B) -> Result<MilpSolution<S>, MilpError> {
    backend.solve(problem)
}

/// Raw assignment from the solver and its normalization into
/// connected clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedPartition {
    pub requested_clusters: usize,
    pub raw: Partition,
    pub normalized: Partition,
}

pub fn extract_partition<S: Scalar>(solution: &MilpSolution<S>, problem: &Milp<S>, topo: &Topology) -> Result<ExtractedPartition, MilpError> {
    if solution.status != MilpStatus::Optimal {
        return Err(MilpError::NotOptimal(solution.status));
    }
    let labels = problem.assignment(&solution.values, 1e-6)?;
    let raw = Partition::from_labels(&labels);
    let normalized = split_disconnected(&raw, topo);
    Ok(ExtractedPartition { requested_clusters: problem.layout.clusters, raw, normalized })
}

/// Reads a `name value` listing (one pair per line, `#` comments allowed)
/// produced by an external solver. Missing columns default to zero; the
/// result is marked optimal only if it satisfies every row and bound.
pub fn import_solution(text: &str, problem: &Milp<f64>) -> Result<MilpSolution<f64>, MilpError> {
    let names = problem.variable_names();
    let mut values = vec![0.0; names.len()];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| MilpError::SolutionParse { line: idx + 1, msg };
        let mut parts = line.split_whitespace();
        let name = parts.next().ok_or_else(|| err("missing name".into()))?;
        let value: f64 = parts.next().ok_or_else(|| err("missing value".into()))?.parse().map_err(|_| err("value is not a number".into()))?;
        let j = names.iter().position(|n| n == name).ok_or_else(|| err(format!("unknown variable `{name}`")))?;
        values[j] = value;
    }
    let feasible =
        problem.lp.max_violation(&values) <= 1e-6 && problem.integer.iter().zip(&values).all(|(&int, v)| !int || (v - v.round()).abs() <= 1e-6);
    let status = if feasible { MilpStatus::Optimal } else { MilpStatus::Infeasible };
    Ok(MilpSolution {
        status,
        objective: feasible.then(|| problem.objective_at(&values)),
        values,
        nodes: 0,
        lp_iterations: 0,
        gap: None,
        leaf_fractionality: 0.0,
        integral_leaves: 0,
    })
}

/// Writes a solution as a `name value` listing.
pub fn export_solution<S: Scalar>(solution: &MilpSolution<S>, problem: &Milp<S>) -> String {
    let mut out = String::new();
    for (name, v) in problem.variable_names().iter().zip(&solution.values) {
        out.push_str(&format!("{name} {}\n", v.to_f64_lossy()));
    }
    out
}
