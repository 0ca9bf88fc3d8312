//! Best-first branch-and-bound with plunging.
//!
//! Every node re-optimizes from the root tableau with the dual simplex
//! after fixing its branched variables, so open nodes only store their
//! fixings. After an LP solve the search dives along the up-branch, pushing
//! each down-branch onto the queue, until the dive is pruned, infeasible,
//! or reaches an integral point.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Milp, MilpBackend, MilpError, MilpSolution, MilpStatus};
use crate::lp::{LpStatus, Simplex};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchAndBoundOptions {
    pub node_limit: usize,
    /// Distance from an integer under which a value counts as integral.
    pub integrality_tolerance: f64,
    /// Nodes whose bound is within this of the incumbent are pruned. Exact
    /// scalar types ignore it and prune only on `bound ≥ incumbent`.
    pub absolute_gap: f64,
}

impl Default for BranchAndBoundOptions {
    fn default() -> Self {
        Self { node_limit: 2_000_000, integrality_tolerance: 1e-6, absolute_gap: 1e-10 }
    }
}

#[derive(Debug, Clone, Default)]
pub struct BranchAndBound {
    pub options: BranchAndBoundOptions,
}

impl BranchAndBound {
    pub fn new(options: BranchAndBoundOptions) -> Self {
        Self { options }
    }
}

struct Node<S> {
    bound: S,
    depth: usize,
    seq: usize,
    fixes: Vec<(usize, bool)>,
}

impl<S: PartialOrd> PartialEq for Node<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: PartialOrd> Eq for Node<S> {}

impl<S: PartialOrd> PartialOrd for Node<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: PartialOrd> Ord for Node<S> {
    // BinaryHeap is a max-heap: "greater" pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.partial_cmp(&self.bound).unwrap_or(Ordering::Equal).then(self.depth.cmp(&other.depth)).then(other.seq.cmp(&self.seq))
    }
}

impl<S: Scalar> MilpBackend<S> for BranchAndBound {
    fn solve(&self, problem: &Milp<S>) -> Result<MilpSolution<S>, MilpError> {
        let opts = self.options;
        let lp = problem.lp();
        let integer: Vec<usize> = problem.integer_mask().iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j).collect();
        let layout = problem.layout();
        let watched: Vec<usize> = (layout.zones * layout.clusters..layout.base_columns()).collect();
        let int_tol = S::from_f64_lossy(opts.integrality_tolerance);
        let prune_tol = if S::is_exact() { S::zero() } else { S::from_f64_lossy(opts.absolute_gap) };
        let constant = problem.objective_constant().clone();

        let mut root = Simplex::new(lp)?;
        let mut iterations = 0;
        let status = root.solve()?;
        iterations += root.iterations();
        let mut result = MilpSolution {
            status: MilpStatus::Infeasible,
            objective: None,
            values: vec![S::zero(); lp.num_vars()],
            nodes: 1,
            lp_iterations: iterations,
            gap: None,
            leaf_fractionality: S::zero(),
            integral_leaves: 0,
        };
        match status {
            LpStatus::Infeasible => return Ok(result),
            LpStatus::Unbounded => return Err(MilpError::Unbounded),
            LpStatus::Optimal => {}
        }
        let root_iterations = root.iterations();

        let mut incumbent: Option<(S, Vec<S>)> = None;
        let mut heap = BinaryHeap::new();
        let mut seq = 0;
        heap.push(Node { bound: root.objective_value(), depth: 0, seq, fixes: Vec::new() });
        let mut nodes = 0usize;
        let mut first = true;

        while let Some(node) = heap.pop() {
            if let Some((best, _)) = &incumbent {
                if node.bound >= best.clone() - prune_tol.clone() {
                    continue;
                }
            }
            let mut tab = root.clone();
            let mut status = LpStatus::Optimal;
            if !first {
                for &(j, up) in &node.fixes {
                    let v = if up { S::one() } else { S::zero() };
                    tab.set_bounds(j, v.clone(), Some(v));
                }
                status = tab.solve()?;
            }
            first = false;
            let mut fixes = node.fixes;
            loop {
                nodes += 1;
                if nodes > opts.node_limit {
                    result.lp_iterations = iterations;
                    heap.push(Node { bound: tab.objective_value(), depth: fixes.len(), seq, fixes });
                    return Ok(finish(result, incumbent, &heap, constant, nodes, MilpStatus::NodeLimit));
                }
                if status != LpStatus::Optimal {
                    break;
                }
                let obj = tab.objective_value();
                if let Some((best, _)) = &incumbent {
                    if obj >= best.clone() - prune_tol.clone() {
                        break;
                    }
                }
                let x = tab.primal();
                let branch = integer
                    .iter()
                    .map(|&j| (j, x[j].fractionality()))
                    .filter(|(_, f)| *f > int_tol)
                    .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal).then(b.0.cmp(&a.0)));
                match branch {
                    None => {
                        result.integral_leaves += 1;
                        for &j in &watched {
                            let f = x[j].fractionality();
                            if f > result.leaf_fractionality {
                                result.leaf_fractionality = f;
                            }
                        }
                        incumbent = Some((obj, x));
                        break;
                    }
                    Some((j, _)) => {
                        seq += 1;
                        let mut down = fixes.clone();
                        down.push((j, false));
                        heap.push(Node { bound: obj.clone(), depth: down.len(), seq, fixes: down });
                        fixes.push((j, true));
                        tab.set_bounds(j, S::one(), Some(S::one()));
                        status = tab.solve()?;
                    }
                }
            }
            iterations += tab.iterations().saturating_sub(root_iterations);
        }
        result.lp_iterations = iterations;
        Ok(finish(result, incumbent, &heap, constant, nodes, MilpStatus::Optimal))
    }
}

fn finish<S: Scalar>(
    mut result: MilpSolution<S>,
    incumbent: Option<(S, Vec<S>)>,
    heap: &BinaryHeap<Node<S>>,
    constant: S,
    nodes: usize,
    status: MilpStatus,
) -> MilpSolution<S> {
    result.nodes = nodes;
    match incumbent {
        Some((obj, x)) => {
            if status == MilpStatus::NodeLimit {
                let open = heap.iter().map(|n| n.bound.clone()).fold(None::<S>, |acc, b| match acc {
                    Some(a) if a <= b => Some(a),
                    _ => Some(b),
                });
                result.gap = Some(match open {
                    Some(b) if b < obj => obj.clone() - b,
                    _ => S::zero(),
                });
            }
            result.status = status;
            result.objective = Some(obj + constant);
            result.values = x;
        }
        None => {
            result.status = if status == MilpStatus::NodeLimit { MilpStatus::NodeLimit } else { MilpStatus::Infeasible };
        }
    }
    result
}
