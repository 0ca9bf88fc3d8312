use std::collections::BTreeMap;

use nalgebra::DVector;

use super::excitation::ExcitationInput;
use super::graph::{InteractionDistribution, InteractionEdge, InteractionGraph, InteractionInterval};
use super::InteractionError;
use crate::thermal::{build_model, decouple_zone, BuildingDescription, StateSpace};

/// Default number of sub-intervals per edge distribution.
pub const DEFAULT_BINS: usize = 10;

/// Replays an excitation on the full model and on decoupled variants,
/// caching each zone-removed trace.
pub struct Quantifier<'a> {
    building: &'a BuildingDescription,
    excitation: &'a ExcitationInput,
    full: Vec<DVector<f64>>,
    decoupled: BTreeMap<u32, (Vec<u32>, Vec<DVector<f64>>)>,
}

impl<'a> Quantifier<'a> {
    pub fn new(building: &'a BuildingDescription, excitation: &'a ExcitationInput) -> Result<Self, InteractionError> {
        let model = build_model(building)?;
        let w = excitation.disturbance.inputs(&model, None)?;
        let full = cyclic_replay(&model, &excitation.u, &w, &excitation.x0)?;
        Ok(Self { building, excitation, full, decoupled: BTreeMap::new() })
    }

    fn removed(&mut self, j: u32) -> Result<&(Vec<u32>, Vec<DVector<f64>>), InteractionError> {
        if !self.decoupled.contains_key(&j) {
            let full_model = build_model(self.building)?;
            let model = decouple_zone(self.building, j)?;
            let keep: Vec<usize> = model.zone_ids.iter().map(|z| full_model.zone_index(*z)).collect::<Result<_, _>>()?;
            let u: Vec<DVector<f64>> = self.excitation.u.iter().map(|u| DVector::from_fn(keep.len(), |r, _| u[keep[r]])).collect();
            let w = self.excitation.disturbance.inputs(&model, None)?;
            let x_start = restrict_state(&full_model, &model, &self.excitation.x0);
            let outputs = cyclic_replay(&model, &u, &w, &x_start)?;
            self.decoupled.insert(j, (model.zone_ids.clone(), outputs));
        }
        Ok(&self.decoupled[&j])
    }

    /// `|T_i(k) − T_i^{no j}(k)|` for `k = 1 … N`.
    pub fn directed_deviation(&mut self, i: u32, j: u32) -> Result<Vec<f64>, InteractionError> {
        let ii = self.building.zone_index(i)?;
        self.building.zone(j)?;
        if i == j {
            return Err(InteractionError::NotAdjacent(i, j));
        }
        let full = std::mem::take(&mut self.full);
        let result = self.removed(j).and_then(|(ids, trace)| {
            let r = ids.iter().position(|z| *z == i).ok_or(InteractionError::NotAdjacent(i, j))?;
            Ok(full.iter().zip(trace).skip(1).map(|(a, b)| (a[ii] - b[r]).abs()).collect())
        });
        self.full = full;
        result
    }

    /// Interval and pooled per-step samples for a physically adjacent pair.
    pub fn interval(&mut self, i: u32, j: u32) -> Result<(InteractionInterval, Vec<f64>), InteractionError> {
        let pairs = self.building.adjacent_pairs();
        if !pairs.contains(&(i, j)) && !pairs.contains(&(j, i)) {
            self.building.zone(i)?;
            self.building.zone(j)?;
            return Err(InteractionError::NotAdjacent(i, j));
        }
        let dij = self.directed_deviation(i, j)?;
        let dji = self.directed_deviation(j, i)?;
        average_directions(&dij, &dji)
    }
}

/// Endpoints averaged over both directions, and per-step averaged samples.
pub fn average_directions(dij: &[f64], dji: &[f64]) -> Result<(InteractionInterval, Vec<f64>), InteractionError> {
    if dij.is_empty() || dij.len() != dji.len() {
        return Err(InteractionError::Samples(format!("deviation series of length {} and {}", dij.len(), dji.len())));
    }
    let min = |d: &[f64]| d.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |d: &[f64]| d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lower = (min(dij) + min(dji)) / 2.0;
    let upper = (max(dij) + max(dji)) / 2.0;
    let pooled = dij.iter().zip(dji).map(|(a, b)| (a + b) / 2.0).collect();
    Ok((InteractionInterval::new(lower, upper)?, pooled))
}

/// Outputs of a second pass over the year, started from the state the
/// first pass (from `x_start`) ended in.
fn cyclic_replay(
    model: &StateSpace<f64>,
    u: &[DVector<f64>],
    w: &[DVector<f64>],
    x_start: &DVector<f64>,
) -> Result<Vec<DVector<f64>>, InteractionError> {
    let warm = model.simulate(u, w, x_start)?;
    let x0 = warm.states.last().expect("trace holds x(0)");
    Ok(model.simulate(u, w, x0)?.outputs)
}

fn restrict_state(full: &StateSpace<f64>, reduced: &StateSpace<f64>, x: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(reduced.num_states(), |r, _| match full.state_index(&reduced.labels[r]) {
        Some(p) => x[p],
        None => x.mean(),
    })
}

/// Interval for the adjacent pair `(i, j)` and its pooled sample series.
pub fn interaction_interval(
    building: &BuildingDescription,
    excitation: &ExcitationInput,
    i: u32,
    j: u32,
) -> Result<(InteractionInterval, Vec<f64>), InteractionError> {
    Quantifier::new(building, excitation)?.interval(i, j)
}

/// Equal-width histogram of the samples over their range; each atom sits at
/// the mean of its bin's samples (the bin centre if the bin is empty).
pub fn estimate_distribution(samples: &[f64], n_d: usize) -> Result<InteractionDistribution, InteractionError> {
    if samples.is_empty() || n_d == 0 {
        return Err(InteractionError::Samples(format!("{} samples into {n_d} bins", samples.len())));
    }
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(InteractionError::Samples("non-finite sample".into()));
    }
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (hi - lo) / n_d as f64;
    let mut sums = vec![0.0; n_d];
    let mut counts = vec![0usize; n_d];
    for &s in samples {
        let k = if width > 0.0 { (((s - lo) / width) as usize).min(n_d - 1) } else { 0 };
        sums[k] += s;
        counts[k] += 1;
    }
    let total = samples.len() as f64;
    let midpoints =
        (0..n_d).map(|k| if counts[k] > 0 { (sums[k] / counts[k] as f64).clamp(lo, hi) } else { lo + (k as f64 + 0.5) * width }).collect();
    let probabilities = counts.iter().map(|c| *c as f64 / total).collect();
    Ok(InteractionDistribution::new(midpoints, probabilities)?)
}

/// Intervals and `n_d`-bin distributions for every adjacent zone pair.
pub fn build_graph(building: &BuildingDescription, excitation: &ExcitationInput, n_d: usize) -> Result<InteractionGraph, InteractionError> {
    let mut q = Quantifier::new(building, excitation)?;
    let mut edges = Vec::new();
    for (a, b) in building.adjacent_pairs() {
        let (interval, samples) = q.interval(a, b)?;
        let distribution = estimate_distribution(&samples, n_d)?;
        edges.push(InteractionEdge { a, b, interval, distribution });
    }
    let graph = InteractionGraph { zones: building.zone_ids(), edges, seed: Some(excitation.seed) };
    graph.topology()?;
    Ok(graph)
}
