use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::metrics::Triple;
use super::MpcError;
use crate::interaction::ComfortSchedule;
use crate::lp::{LinearProgram, LpStatus};
use crate::thermal::{steps_per_day, BuildingDescription, DisturbanceSeries, RcNetwork, StateSpace, DT};

/// Receding-horizon controller settings.
#[derive(Debug, Clone, PartialEq)]
pub struct MpcConfig {
    /// Prediction horizon in steps.
    pub horizon: usize,
    /// Cost per kW of heating or cooling per step.
    pub input_weight: f64,
    /// Cost per °C of comfort violation per zone-step.
    pub violation_weight: f64,
    /// Temperature assumed for zones outside a controller's cluster, °C.
    pub boundary_temperature: f64,
    pub schedule: ComfortSchedule,
}

impl Default for MpcConfig {
    fn default() -> Self {
        Self { horizon: 24, input_weight: 1.0, violation_weight: 1e6, boundary_temperature: 23.0, schedule: ComfortSchedule::office() }
    }
}

impl MpcConfig {
    pub fn validate(&self) -> Result<(), MpcError> {
        if self.horizon == 0 {
            return Err(MpcError::Config("horizon must be at least one step".into()));
        }
        if !(self.violation_weight.is_finite() && self.violation_weight > 0.0) {
            return Err(MpcError::Config(format!("violation weight must be positive, got {}", self.violation_weight)));
        }
        if !(self.input_weight.is_finite() && self.input_weight >= 0.0) {
            return Err(MpcError::Config(format!("input weight must be non-negative, got {}", self.input_weight)));
        }
        if !self.boundary_temperature.is_finite() {
            return Err(MpcError::Config("boundary temperature must be finite".into()));
        }
        Ok(())
    }
}

/// One fault applied during a closed-loop day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fault {
    None,
    /// The zone's temperature sensor reads `gain` times the true value.
    SensorGain {
        zone: u32,
        gain: f64,
    },
    /// The zone's actuator delivers nothing; its controller does not know.
    ActuatorStuckZero {
        zone: u32,
    },
    /// The zone has no controller and no comfort requirement.
    Uncontrolled {
        zone: u32,
    },
}

/// Named set of runs whose outcomes are averaged into one row entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaultScenario {
    pub name: String,
    pub runs: Vec<Fault>,
}

impl FaultScenario {
    pub fn nominal() -> Self {
        Self { name: "no-fault".into(), runs: vec![Fault::None] }
    }

    pub fn uncontrolled(zone: u32) -> Self {
        Self { name: format!("zone {zone} uncontrolled"), runs: vec![Fault::Uncontrolled { zone }] }
    }

    /// One run per zone and gain, a single faulty sensor at a time.
    pub fn sensor_sweep(zones: &[u32], gains: &[f64]) -> Self {
        let runs = zones.iter().flat_map(|&zone| gains.iter().map(move |&gain| Fault::SensorGain { zone, gain })).collect();
        Self { name: "sensor gain".into(), runs }
    }

    /// One run per zone with its actuator stuck at zero.
    pub fn actuator_sweep(zones: &[u32]) -> Self {
        Self { name: "actuator stuck".into(), runs: zones.iter().map(|&zone| Fault::ActuatorStuckZero { zone }).collect() }
    }

    pub fn validate(&self, zones: &[u32]) -> Result<(), MpcError> {
        if self.runs.is_empty() {
            return Err(MpcError::Config(format!("scenario `{}` has no runs", self.name)));
        }
        for f in &self.runs {
            let zone = match *f {
                Fault::None => continue,
                Fault::SensorGain { zone, gain } => {
                    if !(gain.is_finite() && gain > 0.0) {
                        return Err(MpcError::Config(format!("sensor gain {gain} must be positive")));
                    }
                    zone
                }
                Fault::ActuatorStuckZero { zone } | Fault::Uncontrolled { zone } => zone,
            };
            if !zones.contains(&zone) {
                return Err(MpcError::Config(format!("scenario `{}` targets unknown zone {zone}", self.name)));
            }
        }
        Ok(())
    }
}

/// Prediction model of one controller.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub zones: Vec<u32>,
    pub model: StateSpace<f64>,
}

/// One model per cluster: the cluster's zones and walls, with every branch
/// to a zone outside the cluster ending at the fixed boundary node.
pub fn build_cluster_models(building: &BuildingDescription, clusters: &[Vec<u32>]) -> Result<Vec<ClusterModel>, MpcError> {
    let ids = building.zone_ids();
    let mut seen = vec![false; ids.len()];
    for c in clusters {
        if c.is_empty() {
            return Err(MpcError::Config("empty cluster".into()));
        }
        for z in c {
            let i = building.zone_index(*z)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(MpcError::Config(format!("zone {z} appears in two clusters")));
            }
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(MpcError::Config(format!("zone {} is in no cluster", ids[i])));
    }
    clusters
        .iter()
        .map(|c| {
            let model = RcNetwork::assemble(&building.cluster(c)?)?.discretize(DT);
            Ok(ClusterModel { zones: model.zone_ids.clone(), model })
        })
        .collect()
}

/// Closed-loop day: applied inputs (W) and plant zone temperatures.
#[derive(Debug, Clone, PartialEq)]
pub struct DayRun {
    pub outcome: Triple,
    /// `u(0) … u(N−1)` in full-model zone order.
    pub inputs: Vec<DVector<f64>>,
    /// `T(0) … T(N)`.
    pub outputs: Vec<DVector<f64>>,
    /// Plant state after the last step.
    pub final_state: DVector<f64>,
    pub lp_solves: usize,
}

struct Controller<'a> {
    cluster: &'a ClusterModel,
    /// Full-model zone index of each cluster zone.
    plant_index: Vec<usize>,
    /// Cluster zone indices with an actuator in the prediction.
    actuated: Vec<usize>,
    /// Cluster zone indices with comfort rows.
    comfort: Vec<usize>,
    /// `A^d B_u`, zone rows only, for `d = 0 … H−1`.
    markov: Vec<DMatrix<f64>>,
    w: Vec<DVector<f64>>,
    estimate: DVector<f64>,
}

impl Controller<'_> {
    fn plan(&self, k: usize, cfg: &MpcConfig) -> Result<(DVector<f64>, bool), MpcError> {
        let m = &self.cluster.model;
        let nz = m.num_zones();
        let h = cfg.horizon;
        let day = self.w.len();
        let mut u0 = DVector::zeros(nz);
        let any_band = (1..=h).any(|j| cfg.schedule.band(k + j).is_some());
        if !any_band || self.actuated.is_empty() || self.comfort.is_empty() {
            return Ok((u0, false));
        }
        let mut free = Vec::with_capacity(h + 1);
        let mut x = self.estimate.clone();
        free.push(x.clone());
        for j in 0..h {
            let mut next = &m.a * &x;
            next.gemv(1.0, &m.b_w, &self.w[(k + j) % day], 1.0);
            x = next;
            free.push(x.clone());
        }

        let na = self.actuated.len();
        let mut lp = LinearProgram::<f64>::new(0);
        let mut heat = vec![0usize; h * na];
        let mut cool = vec![0usize; h * na];
        for l in 0..h {
            for (a, &i) in self.actuated.iter().enumerate() {
                let (lo, hi) = m.input_bounds[i];
                heat[l * na + a] = lp.add_var(0.0, Some(hi / 1000.0), cfg.input_weight);
                cool[l * na + a] = lp.add_var(0.0, Some(-lo / 1000.0), cfg.input_weight);
            }
        }
        let mut row = Vec::with_capacity(2 * h * na + 1);
        for j in 1..=h {
            let Some(band) = cfg.schedule.band(k + j) else { continue };
            for &i in &self.comfort {
                let s = lp.add_var(0.0, None, cfg.violation_weight);
                let t_free = free[j][i];
                row.clear();
                for l in 0..j {
                    let g = &self.markov[j - 1 - l];
                    for (a, &q) in self.actuated.iter().enumerate() {
                        let c = g[(i, q)] * 1000.0;
                        row.push((heat[l * na + a], c));
                        row.push((cool[l * na + a], -c));
                    }
                }
                row.push((s, -1.0));
                lp.add_row(row.iter().copied(), band.upper - t_free);
                lp.add_row(row.iter().map(|&(v, c)| if v == s { (v, c) } else { (v, -c) }), t_free - band.lower);
            }
        }
        let sol = lp.solve()?;
        if sol.status != LpStatus::Optimal {
            return Err(MpcError::Solver(format!("step {k}: controller LP is {}", sol.status)));
        }
        for (a, &i) in self.actuated.iter().enumerate() {
            u0[i] = (sol.x[heat[a]] - sol.x[cool[a]]) * 1000.0;
        }
        Ok((u0, true))
    }
}

/// Zone temperatures from the plant state, as the sensors report them.
fn measure(plant: &StateSpace<f64>, x: &DVector<f64>, fault: Fault) -> DVector<f64> {
    let mut y = plant.output(x);
    if let Fault::SensorGain { zone, gain } = fault {
        if let Ok(i) = plant.zone_index(zone) {
            y[i] *= gain;
        }
    }
    y
}

/// Runs the day in `w` with one controller per cluster model acting on the
/// full `plant` from `x0`. Each controller re-plans every step over the
/// horizon with perfect disturbance preview (wrapping to the start of the
/// day) and applies the first input. Its state estimate propagates its own
/// model with the commanded input and resets zone air nodes to the
/// measurements.
pub fn run_mpc(
    plant: &StateSpace<f64>,
    clusters: &[ClusterModel],
    w: &DisturbanceSeries,
    x0: &DVector<f64>,
    cfg: &MpcConfig,
    fault: Fault,
) -> Result<DayRun, MpcError> {
    cfg.validate()?;
    if w.len() != steps_per_day() {
        return Err(MpcError::Config(format!("expected one day of {} steps, got {}", steps_per_day(), w.len())));
    }
    if x0.len() != plant.num_states() {
        return Err(MpcError::Config(format!("x0 has {} entries, plant has {} states", x0.len(), plant.num_states())));
    }
    let nz = plant.num_zones();
    let mut covered = vec![0usize; nz];
    for c in clusters {
        for z in &c.zones {
            covered[plant.zone_index(*z)?] += 1;
        }
    }
    if covered.iter().any(|&c| c != 1) {
        return Err(MpcError::Config("clusters must cover every plant zone exactly once".into()));
    }
    let (idle, stuck) = match fault {
        Fault::Uncontrolled { zone } => (Some(zone), None),
        Fault::ActuatorStuckZero { zone } => (None, Some(zone)),
        _ => (None, None),
    };
    for z in idle.iter().chain(&stuck) {
        plant.zone_index(*z)?;
    }

    let y0 = measure(plant, x0, fault);
    let mut controllers = Vec::with_capacity(clusters.len());
    for c in clusters {
        let m = &c.model;
        let plant_index: Vec<usize> = m.zone_ids.iter().map(|z| plant.zone_index(*z)).collect::<Result<_, _>>()?;
        let active: Vec<usize> = (0..m.num_zones()).filter(|&i| Some(m.zone_ids[i]) != idle).collect();
        let actuated = active.iter().copied().filter(|&i| m.input_bounds[i].0 < m.input_bounds[i].1).collect();
        let mut markov = Vec::with_capacity(cfg.horizon);
        let mut p = m.b_u.clone();
        for _ in 0..cfg.horizon {
            markov.push(p.rows(0, m.num_zones()).into_owned());
            p = &m.a * &p;
        }
        let mut estimate = DVector::from_fn(m.num_states(), |r, _| match plant.state_index(&m.labels[r]) {
            Some(q) => x0[q],
            None => cfg.boundary_temperature,
        });
        for (i, &q) in plant_index.iter().enumerate() {
            estimate[i] = y0[q];
        }
        let w = w.inputs(m, Some(cfg.boundary_temperature))?;
        controllers.push(Controller { cluster: c, plant_index, actuated, comfort: active, markov, w, estimate });
    }

    let wp = w.inputs(plant, Some(cfg.boundary_temperature))?;
    let mut x = x0.clone();
    let mut inputs = Vec::with_capacity(wp.len());
    let mut outputs = vec![plant.output(&x)];
    let mut lp_solves = 0;
    for k in 0..wp.len() {
        let mut u = DVector::zeros(nz);
        let mut commanded = Vec::with_capacity(controllers.len());
        for ctl in &controllers {
            let (uc, solved) = ctl.plan(k, cfg)?;
            lp_solves += usize::from(solved);
            for (i, &q) in ctl.plant_index.iter().enumerate() {
                u[q] = uc[i];
            }
            commanded.push(uc);
        }
        if let Some(z) = stuck {
            u[plant.zone_index(z)?] = 0.0;
        }
        x = plant.step(&x, &u, &wp[k]);
        let y = measure(plant, &x, fault);
        for (ctl, uc) in controllers.iter_mut().zip(&commanded) {
            let m = &ctl.cluster.model;
            let mut next = &m.a * &ctl.estimate;
            next.gemv(1.0, &m.b_u, uc, 1.0);
            next.gemv(1.0, &m.b_w, &ctl.w[k], 1.0);
            for (i, &q) in ctl.plant_index.iter().enumerate() {
                next[i] = y[q];
            }
            ctl.estimate = next;
        }
        inputs.push(u);
        outputs.push(plant.output(&x));
    }

    let comfort_zones: Vec<usize> = (0..nz).filter(|&i| Some(plant.zone_ids[i]) != idle).collect();
    let outcome = day_outcome(&inputs, &outputs, &cfg.schedule, &comfort_zones);
    Ok(DayRun { outcome, inputs, outputs, final_state: x, lp_solves })
}

/// Energy in kWh summed over zones and steps, and comfort violation of
/// `zones` over the occupied steps among `T(1) … T(N)`.
pub fn day_outcome(inputs: &[DVector<f64>], outputs: &[DVector<f64>], schedule: &ComfortSchedule, zones: &[usize]) -> Triple {
    let u_tot = inputs.iter().map(|u| u.iter().map(|v| v.abs()).sum::<f64>()).sum::<f64>() * DT / 3.6e6;
    let (mut sum, mut count, mut peak) = (0.0, 0usize, 0.0f64);
    for (k, y) in outputs.iter().enumerate().skip(1) {
        if let Some(band) = schedule.band(k) {
            for &i in zones {
                let v = band.violation(y[i]);
                sum += v;
                count += 1;
                peak = peak.max(v);
            }
        }
    }
    Triple::new(u_tot, if count > 0 { sum / count as f64 } else { 0.0 }, peak)
}

/// Start-of-day plant state: the centralized controller repeats the day
/// from a uniform 22 °C state until the end state settles (at most
/// `passes` days).
pub fn periodic_start(plant: &StateSpace<f64>, w: &DisturbanceSeries, cfg: &MpcConfig, passes: usize) -> Result<DVector<f64>, MpcError> {
    let central = [ClusterModel { zones: plant.zone_ids.clone(), model: plant.clone() }];
    let mut x = plant.uniform_state(22.0);
    for _ in 0..passes.max(1) {
        let next = run_mpc(plant, &central, w, &x, cfg, Fault::None)?.final_state;
        let settled = (&next - &x).amax() < 1e-3;
        x = next;
        if settled {
            break;
        }
    }
    Ok(x)
}
