//! Dense bounded-variable simplex.
//!
//! Problems are stated as `min cᵀx` subject to `A x ≤ b` and
//! `l ≤ x ≤ u` (upper bounds may be infinite, lower bounds must be finite).
//! One slack column is added per row and the slack basis is the starting
//! point. Nonbasic columns rest at one of their bounds, so a problem whose
//! negative-cost columns all have finite upper bounds starts dual feasible
//! and is solved by the dual simplex alone; otherwise the dual simplex first
//! runs on a cost vector with the offending entries zeroed, and the primal
//! simplex finishes the job.
//!
//! The tableau is kept explicitly. That is wasteful for large models but
//! the instances here (partitioning MILPs with a few hundred rows, MPC
//! horizons of one building) are small, and an explicit tableau makes
//! re-optimization after a bound change trivial: [`Simplex::set_bounds`]
//! followed by [`Simplex::solve`] reuses the current basis.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("variable {var} has lower bound above upper bound")]
    InvalidBounds { var: usize },
    #[error("variable {var} has an infinite lower bound")]
    UnboundedBelow { var: usize },
    #[error("row {row} references variable {var} but the problem has {num_vars} variables")]
    BadIndex { row: usize, var: usize, num_vars: usize },
    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpStatus::Optimal => write!(f, "optimal"),
            LpStatus::Infeasible => write!(f, "infeasible"),
            LpStatus::Unbounded => write!(f, "unbounded"),
        }
    }
}

/// `min cᵀx  s.t.  A x ≤ b,  l ≤ x ≤ u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<S> {
    num_vars: usize,
    rows: Vec<Vec<(usize, S)>>,
    rhs: Vec<S>,
    lower: Vec<S>,
    upper: Vec<Option<S>>,
    objective: Vec<S>,
}

impl<S: Scalar> LinearProgram<S> {
    /// All variables start in `[0, ∞)` with zero cost.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: Vec::new(),
            rhs: Vec::new(),
            lower: vec![S::zero(); num_vars],
            upper: vec![None; num_vars],
            objective: vec![S::zero(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, S)>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[S] {
        &self.rhs
    }

    pub fn lower(&self) -> &[S] {
        &self.lower
    }

    pub fn upper(&self) -> &[Option<S>] {
        &self.upper
    }

    pub fn objective(&self) -> &[S] {
        &self.objective
    }

    pub fn set_bounds(&mut self, var: usize, lower: S, upper: Option<S>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn set_cost(&mut self, var: usize, cost: S) {
        self.objective[var] = cost;
    }

    /// Appends `Σ coeffs ≤ rhs` and returns its row index. Zero
    /// coefficients are dropped; repeated indices are summed.
    pub fn add_row(&mut self, coeffs: impl IntoIterator<Item = (usize, S)>, rhs: S) -> usize {
        let mut row: Vec<(usize, S)> = Vec::new();
        for (j, a) in coeffs {
            if let Some(slot) = row.iter_mut().find(|(k, _)| *k == j) {
                slot.1 = slot.1.clone() + a;
            } else {
                row.push((j, a));
            }
        }
        row.retain(|(_, a)| !a.is_zero());
        row.sort_by_key(|(j, _)| *j);
        self.rows.push(row);
        self.rhs.push(rhs);
        self.rows.len() - 1
    }

    /// Appends a column with the given bounds and cost; returns its index.
    pub fn add_var(&mut self, lower: S, upper: Option<S>, cost: S) -> usize {
        self.num_vars += 1;
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.push(cost);
        self.num_vars - 1
    }

    /// Row activity `a_i·x` for every row.
    pub fn activities(&self, x: &[S]) -> Vec<S> {
        self.rows.iter().map(|row| row.iter().fold(S::zero(), |acc, (j, a)| acc + a.clone() * x[*j].clone())).collect()
    }

    /// Largest violation of rows and bounds at `x` (zero when feasible).
    pub fn max_violation(&self, x: &[S]) -> S {
        let mut worst = S::zero();
        for (act, b) in self.activities(x).into_iter().zip(&self.rhs) {
            let v = act - b.clone();
            if v > worst {
                worst = v;
            }
        }
        for j in 0..self.num_vars {
            let below = self.lower[j].clone() - x[j].clone();
            if below > worst {
                worst = below;
            }
            if let Some(u) = &self.upper[j] {
                let above = x[j].clone() - u.clone();
                if above > worst {
                    worst = above;
                }
            }
        }
        worst
    }

    pub fn evaluate(&self, x: &[S]) -> S {
        self.objective.iter().zip(x).fold(S::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
    }

    pub fn solve(&self) -> Result<LpSolution<S>, LpError> {
        let mut simplex = Simplex::new(self)?;
        let status = simplex.solve()?;
        Ok(simplex.solution(status))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    pub x: Vec<S>,
    pub objective: S,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Position {
    Basic(usize),
    Lower,
    Upper,
}

/// Explicit-tableau simplex state. Cloning it snapshots the basis.
#[derive(Debug, Clone)]
pub struct Simplex<S> {
    rows: usize,
    structural: usize,
    width: usize,
    tab: Vec<S>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    position: Vec<Position>,
    value: Vec<S>,
    lower: Vec<S>,
    upper: Vec<Option<S>>,
    cost: Vec<S>,
    reduced: Vec<S>,
    iterations: usize,
    max_iterations: usize,
}

impl<S: Scalar> Simplex<S> {
    pub fn new(lp: &LinearProgram<S>) -> Result<Self, LpError> {
        let m = lp.rows.len();
        let n = lp.num_vars;
        let width = n + m;
        let mut tab = vec![S::zero(); m * width];
        for (i, row) in lp.rows.iter().enumerate() {
            for (j, a) in row {
                if *j >= n {
                    return Err(LpError::BadIndex { row: i, var: *j, num_vars: n });
                }
                tab[i * width + j] = a.clone();
            }
            tab[i * width + n + i] = S::one();
        }
        for j in 0..n {
            if let Some(u) = &lp.upper[j] {
                if *u < lp.lower[j] {
                    return Err(LpError::InvalidBounds { var: j });
                }
            }
        }

        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        lower.extend((0..m).map(|_| S::zero()));
        upper.extend((0..m).map(|_| None));
        let mut cost = lp.objective.clone();
        cost.extend((0..m).map(|_| S::zero()));

        let mut position = vec![Position::Lower; width];
        let mut value = vec![S::zero(); width];
        for j in 0..n {
            let at_upper = cost[j].is_negative() && upper[j].is_some();
            if at_upper {
                position[j] = Position::Upper;
                value[j] = upper[j].clone().unwrap();
            } else {
                value[j] = lower[j].clone();
            }
        }
        let basis: Vec<usize> = (n..width).collect();
        for (i, &b) in basis.iter().enumerate() {
            position[b] = Position::Basic(i);
        }

        let mut simplex = Self {
            rows: m,
            structural: n,
            width,
            tab,
            rhs: lp.rhs.clone(),
            basis,
            position,
            value,
            lower,
            upper,
            reduced: cost.clone(),
            cost,
            iterations: 0,
            max_iterations: 50 * (width + 10),
        };
        simplex.refresh_basic_values();
        Ok(simplex)
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn set_iteration_limit(&mut self, limit: usize) {
        self.max_iterations = limit;
    }

    pub fn num_structural(&self) -> usize {
        self.structural
    }

    /// Structural variable values.
    pub fn primal(&self) -> Vec<S> {
        self.value[..self.structural].to_vec()
    }

    pub fn objective_value(&self) -> S {
        self.cost.iter().zip(&self.value).fold(S::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
    }

    pub fn lower_bound(&self, var: usize) -> &S {
        &self.lower[var]
    }

    pub fn upper_bound(&self, var: usize) -> Option<&S> {
        self.upper[var].as_ref()
    }

    fn solution(&self, status: LpStatus) -> LpSolution<S> {
        LpSolution { status, x: self.primal(), objective: self.objective_value(), iterations: self.iterations }
    }

    /// Changes the bounds of a structural variable, keeping the basis.
    /// Nonbasic variables stay on the same side so dual feasibility is
    /// preserved whenever the bound change only tightens.
    pub fn set_bounds(&mut self, var: usize, lower: S, upper: Option<S>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
        let target = match self.position[var] {
            Position::Basic(_) => return,
            Position::Lower => self.lower[var].clone(),
            Position::Upper => match &self.upper[var] {
                Some(u) => u.clone(),
                None => {
                    self.position[var] = Position::Lower;
                    self.lower[var].clone()
                }
            },
        };
        let delta = target.clone() - self.value[var].clone();
        if !delta.is_zero() {
            self.shift_nonbasic(var, delta);
        }
        self.value[var] = target;
    }

    fn shift_nonbasic(&mut self, var: usize, delta: S) {
        for i in 0..self.rows {
            let a = &self.tab[i * self.width + var];
            if !a.is_zero() {
                let b = self.basis[i];
                self.value[b] = self.value[b].clone() - a.clone() * delta.clone();
            }
        }
    }

    /// Recomputes basic values from `B⁻¹` (the slack block of the tableau).
    fn refresh_basic_values(&mut self) {
        let n = self.structural;
        for i in 0..self.rows {
            let row = &self.tab[i * self.width..(i + 1) * self.width];
            let mut v = S::zero();
            for k in 0..self.rows {
                let binv = &row[n + k];
                if !binv.is_zero() {
                    v = v + binv.clone() * self.rhs[k].clone();
                }
            }
            for (j, a) in row.iter().enumerate() {
                if !a.is_zero() && !matches!(self.position[j], Position::Basic(_)) {
                    v = v - a.clone() * self.value[j].clone();
                }
            }
            let b = self.basis[i];
            self.value[b] = v;
        }
    }

    fn recompute_reduced_costs(&mut self) {
        let mut d = self.cost.clone();
        for i in 0..self.rows {
            let cb = &self.cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            let row = &self.tab[i * self.width..(i + 1) * self.width];
            for (dj, a) in d.iter_mut().zip(row) {
                if !a.is_zero() {
                    *dj = dj.clone() - cb.clone() * a.clone();
                }
            }
        }
        self.reduced = d;
    }

    fn is_fixed(&self, j: usize) -> bool {
        matches!(&self.upper[j], Some(u) if *u == self.lower[j])
    }

    fn dual_infeasible_columns(&self) -> Vec<usize> {
        (0..self.width)
            .filter(|&j| match self.position[j] {
                Position::Basic(_) => false,
                Position::Lower => self.reduced[j].is_negative_tol() && !self.is_fixed(j),
                Position::Upper => self.reduced[j].is_positive_tol() && !self.is_fixed(j),
            })
            .collect()
    }

    /// Runs to optimality from the current basis.
    pub fn solve(&mut self) -> Result<LpStatus, LpError> {
        let offending = self.dual_infeasible_columns();
        if !offending.is_empty() {
            let saved = self.cost.clone();
            for &j in &offending {
                self.cost[j] = S::zero();
            }
            self.recompute_reduced_costs();
            let phase_one = self.dual_simplex();
            self.cost = saved;
            self.recompute_reduced_costs();
            match phase_one? {
                LpStatus::Optimal => {}
                other => return Ok(other),
            }
        } else {
            match self.dual_simplex()? {
                LpStatus::Optimal => {}
                other => return Ok(other),
            }
        }
        let status = self.primal_simplex()?;
        if !S::is_exact() {
            self.refresh_basic_values();
        }
        Ok(status)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let piv = self.tab[r * w + q].clone();
        let inv = S::one() / piv;
        let nonzero: Vec<usize> = (0..w).filter(|&k| !self.tab[r * w + k].is_zero()).collect();
        for &k in &nonzero {
            let v = self.tab[r * w + k].clone() * inv.clone();
            self.tab[r * w + k] = v;
        }
        self.tab[r * w + q] = S::one();
        let (before, rest) = self.tab.split_at_mut(r * w);
        let (pivot_row, after) = rest.split_at_mut(w);
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            let f = row[q].clone();
            if f.is_zero() {
                continue;
            }
            for &k in &nonzero {
                row[k] = row[k].clone() - f.clone() * pivot_row[k].clone();
            }
            row[q] = S::zero();
        }
        let dq = self.reduced[q].clone();
        if !dq.is_zero() {
            for &k in &nonzero {
                self.reduced[k] = self.reduced[k].clone() - dq.clone() * pivot_row[k].clone();
            }
            self.reduced[q] = S::zero();
        }
        let leaving = self.basis[r];
        self.basis[r] = q;
        self.position[q] = Position::Basic(r);
        self.position[leaving] = Position::Lower;
        self.iterations += 1;
    }

    /// Applies a step of `delta` on nonbasic column `q` to every basic value.
    fn step(&mut self, q: usize, delta: &S) {
        self.shift_nonbasic(q, delta.clone());
        self.value[q] = self.value[q].clone() + delta.clone();
    }

    fn bump(&mut self) -> Result<(), LpError> {
        if self.iterations >= self.max_iterations {
            return Err(LpError::IterationLimit(self.max_iterations));
        }
        Ok(())
    }

    fn dual_simplex(&mut self) -> Result<LpStatus, LpError> {
        let w = self.width;
        let tol = S::tolerance();
        let bland_after = self.iterations + 10 * (w + 10);
        loop {
            self.bump()?;
            let bland = self.iterations > bland_after;
            // leaving row: largest bound violation (Bland: first violated)
            let mut leave: Option<(usize, S, bool)> = None;
            for i in 0..self.rows {
                let b = self.basis[i];
                let v = &self.value[b];
                let (viol, to_lower) = {
                    let below = self.lower[b].clone() - v.clone();
                    if below > tol {
                        (below, true)
                    } else {
                        match &self.upper[b] {
                            Some(u) if v.clone() - u.clone() > tol => (v.clone() - u.clone(), false),
                            _ => continue,
                        }
                    }
                };
                let better = match &leave {
                    None => true,
                    Some((r, best, _)) => {
                        if bland {
                            self.basis[i] < self.basis[*r]
                        } else {
                            viol > *best
                        }
                    }
                };
                if better {
                    leave = Some((i, viol, to_lower));
                }
            }
            let Some((r, _, to_lower)) = leave else {
                return Ok(LpStatus::Optimal);
            };

            // entering column: dual ratio test
            let row = &self.tab[r * w..(r + 1) * w];
            let mut enter: Option<(usize, S, S)> = None;
            for (j, alpha) in row.iter().enumerate() {
                if alpha.abs() <= tol || alpha.is_zero() {
                    continue;
                }
                let pos = self.position[j];
                if matches!(pos, Position::Basic(_)) || self.is_fixed(j) {
                    continue;
                }
                let at_lower = pos == Position::Lower;
                let eligible = if to_lower {
                    (at_lower && alpha.is_negative()) || (!at_lower && alpha.is_positive())
                } else {
                    (at_lower && alpha.is_positive()) || (!at_lower && alpha.is_negative())
                };
                if !eligible {
                    continue;
                }
                let dj = if at_lower { self.reduced[j].clone() } else { -self.reduced[j].clone() };
                let dj = if dj.is_negative() { S::zero() } else { dj };
                let mag = alpha.abs();
                let ratio = dj / mag.clone();
                let better = match &enter {
                    None => true,
                    Some((_, best, best_mag)) => {
                        if bland {
                            ratio < *best
                        } else if ratio.clone() < best.clone() - tol.clone() {
                            true
                        } else {
                            (ratio.clone() - best.clone()).abs() <= tol && mag > *best_mag
                        }
                    }
                };
                if better {
                    enter = Some((j, ratio, mag));
                }
            }
            let Some((q, _, _)) = enter else {
                return Ok(LpStatus::Infeasible);
            };

            let leaving = self.basis[r];
            let target = if to_lower { self.lower[leaving].clone() } else { self.upper[leaving].clone().unwrap() };
            let alpha = self.tab[r * w + q].clone();
            let delta = (self.value[leaving].clone() - target.clone()) / alpha;
            self.step(q, &delta);
            self.value[leaving] = target;
            self.pivot(r, q);
            self.position[leaving] = if to_lower { Position::Lower } else { Position::Upper };
        }
    }

    fn primal_simplex(&mut self) -> Result<LpStatus, LpError> {
        let w = self.width;
        let tol = S::tolerance();
        let bland_after = self.iterations + 10 * (w + 10);
        loop {
            self.bump()?;
            let bland = self.iterations > bland_after;
            let mut enter: Option<(usize, S, bool)> = None;
            for j in 0..w {
                let increase = match self.position[j] {
                    Position::Basic(_) => continue,
                    Position::Lower => {
                        if !self.reduced[j].is_negative_tol() || self.is_fixed(j) {
                            continue;
                        }
                        true
                    }
                    Position::Upper => {
                        if !self.reduced[j].is_positive_tol() || self.is_fixed(j) {
                            continue;
                        }
                        false
                    }
                };
                let score = self.reduced[j].abs();
                let better = match &enter {
                    None => true,
                    Some((_, best, _)) => !bland && score > *best,
                };
                if better {
                    enter = Some((j, score, increase));
                }
            }
            let Some((q, _, increase)) = enter else {
                return Ok(LpStatus::Optimal);
            };
            let dir = if increase { S::one() } else { -S::one() };

            // ratio test: t ≥ 0 along dir
            let mut limit: Option<S> = self.upper[q].as_ref().map(|u| u.clone() - self.lower[q].clone());
            let mut leave: Option<(usize, bool)> = None;
            for i in 0..self.rows {
                let alpha = self.tab[i * w + q].clone();
                if alpha.abs() <= tol || alpha.is_zero() {
                    continue;
                }
                let b = self.basis[i];
                // basic value moves by -alpha*dir*t
                let rate = -(alpha * dir.clone());
                let (cap, hits_lower) = if rate.is_negative() {
                    let room = self.value[b].clone() - self.lower[b].clone();
                    let room = if room.is_negative() { S::zero() } else { room };
                    (room / -rate, true)
                } else {
                    match &self.upper[b] {
                        Some(u) => {
                            let room = u.clone() - self.value[b].clone();
                            let room = if room.is_negative() { S::zero() } else { room };
                            (room / rate, false)
                        }
                        None => continue,
                    }
                };
                let better = match &limit {
                    None => true,
                    Some(best) => cap < *best,
                };
                if better {
                    limit = Some(cap);
                    leave = Some((i, hits_lower));
                }
            }
            let Some(t) = limit else {
                return Ok(LpStatus::Unbounded);
            };
            let delta = t * dir;
            match leave {
                None => {
                    // bound flip
                    self.step(q, &delta);
                    self.position[q] = if increase { Position::Upper } else { Position::Lower };
                    self.value[q] = if increase { self.upper[q].clone().unwrap() } else { self.lower[q].clone() };
                    self.iterations += 1;
                }
                Some((r, hits_lower)) => {
                    let leaving = self.basis[r];
                    self.step(q, &delta);
                    self.value[leaving] = if hits_lower { self.lower[leaving].clone() } else { self.upper[leaving].clone().unwrap() };
                    self.pivot(r, q);
                    self.position[leaving] = if hits_lower { Position::Lower } else { Position::Upper };
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn small() -> LinearProgram<f64> {
        // max 3x + 2y  s.t. x + y ≤ 4, x + 3y ≤ 6, x ≤ 3
        let mut lp = LinearProgram::new(2);
        lp.set_cost(0, -3.0);
        lp.set_cost(1, -2.0);
        lp.set_bounds(0, 0.0, Some(3.0));
        lp.add_row([(0, 1.0), (1, 1.0)], 4.0);
        lp.add_row([(0, 1.0), (1, 3.0)], 6.0);
        lp
    }

    #[test]
    fn textbook_maximization() {
        let sol = small().solve().unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 11.0).abs() < 1e-12);
        assert!((sol.x[0] - 3.0).abs() < 1e-12);
        assert!((sol.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_negative_cost_column_goes_through_primal_phase() {
        // min -x - y s.t. x - y ≤ 1, y ≤ 2 (y unbounded above in bounds)
        let mut lp = LinearProgram::<f64>::new(2);
        lp.set_cost(0, -1.0);
        lp.set_cost(1, -1.0);
        lp.add_row([(0, 1.0), (1, -1.0)], 1.0);
        lp.add_row([(1, 1.0)], 2.0);
        let sol = lp.solve().unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 5.0).abs() < 1e-12);

        let mut lp = LinearProgram::new(2);
        lp.set_cost(0, -1.0);
        lp.add_row([(0, 1.0), (1, -1.0)], 1.0);
        assert_eq!(lp.solve().unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_detected() {
        // x ≥ 2 and x ≤ 1
        let mut lp = LinearProgram::<f64>::new(1);
        lp.add_row([(0, -1.0)], -2.0);
        lp.add_row([(0, 1.0)], 1.0);
        assert_eq!(lp.solve().unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn negative_rhs_rows_need_dual_pivots() {
        // min x + y s.t. x + y ≥ 2, x - y ≤ 0
        let mut lp = LinearProgram::<f64>::new(2);
        lp.set_cost(0, 1.0);
        lp.set_cost(1, 1.0);
        lp.add_row([(0, -1.0), (1, -1.0)], -2.0);
        lp.add_row([(0, 1.0), (1, -1.0)], 0.0);
        let sol = lp.solve().unwrap();
        assert!((sol.objective - 2.0).abs() < 1e-12);
        assert!(lp.max_violation(&sol.x) < 1e-12);
    }

    #[test]
    fn exact_arithmetic_agrees() {
        let lp = small();
        let mut exact = LinearProgram::<Rational>::new(2);
        for j in 0..2 {
            exact.set_cost(j, Rational::from_f64_lossy(lp.objective()[j]));
            exact.set_bounds(j, Rational::from_f64_lossy(lp.lower()[j]), lp.upper()[j].map(Rational::from_f64_lossy));
        }
        for (row, b) in lp.rows().iter().zip(lp.rhs()) {
            exact.add_row(row.iter().map(|(j, a)| (*j, Rational::from_f64_lossy(*a))), Rational::from_f64_lossy(*b));
        }
        let sol = exact.solve().unwrap();
        assert_eq!(sol.objective, Rational::from_integer((-11).into()));
    }

    #[test]
    fn warm_restart_after_bound_change() {
        let lp = small();
        let mut s = Simplex::new(&lp).unwrap();
        assert_eq!(s.solve().unwrap(), LpStatus::Optimal);
        s.set_bounds(0, 0.0, Some(1.0));
        assert_eq!(s.solve().unwrap(), LpStatus::Optimal);
        // x = 1, y = 5/3
        assert!((s.objective_value() + (3.0 + 10.0 / 3.0)).abs() < 1e-12);
        let fresh = {
            let mut lp2 = lp.clone();
            lp2.set_bounds(0, 0.0, Some(1.0));
            lp2.solve().unwrap()
        };
        assert!((fresh.objective - s.objective_value()).abs() < 1e-12);
    }
}
