use log::warn;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::comfort::{widen_comfort, ComfortSchedule};
use super::InteractionError;
use crate::thermal::{steps_per_day, DisturbanceSeries, StateSpace, DT};

/// Steps each random set-point level is held (2 h).
pub const DWELL_STEPS: usize = 8;
/// Steps of tracking before occupancy starts (2 h).
pub const PREHEAT_STEPS: usize = 8;

/// Per-step fraction of the remaining set-point change passed to the
/// controller reference.
pub const REFERENCE_SMOOTHING: f64 = 0.3;

/// Discrete PI gains: `kp` in W/K, integral time `ti` in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiGains {
    pub kp: f64,
    pub ti: f64,
}

/// First-order-plus-dead-time fit of a zone's response to its own input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderFit {
    /// Static gain in K/W.
    pub gain: f64,
    /// Time constant in seconds.
    pub tau: f64,
    /// Dead time in seconds.
    pub delay: f64,
}

/// Two-point (28 % / 63 %) fit of the unit step response of zone `i` over
/// one dwell period, with all other inputs and disturbances at zero. The
/// dead time is at least one sample.
pub fn fit_first_order(model: &StateSpace<f64>, i: usize) -> FirstOrderFit {
    let horizon = DWELL_STEPS;
    let mut x = DVector::zeros(model.num_states());
    let mut u = DVector::zeros(model.num_zones());
    u[i] = 1.0;
    let w = DVector::zeros(model.channels.len());
    let mut y = vec![0.0];
    for _ in 0..horizon {
        x = model.step(&x, &u, &w);
        y.push(x[i]);
    }
    let gain = y[horizon];
    let crossing = |frac: f64| -> f64 {
        let target = frac * gain;
        let k = y.iter().position(|v| *v >= target).unwrap_or(horizon).max(1);
        let (y0, y1) = (y[k - 1], y[k]);
        let s = if y1 > y0 { (target - y0) / (y1 - y0) } else { 1.0 };
        ((k - 1) as f64 + s) * DT
    };
    let (t28, t63) = (crossing(0.283), crossing(0.632));
    let tau = (1.5 * (t63 - t28)).max(DT / 2.0);
    let delay = (t63 - tau).max(0.75 * DT);
    FirstOrderFit { gain, tau, delay }
}

/// Ziegler–Nichols open-loop PI rule applied to a first-order fit.
pub fn tune_pi(fit: &FirstOrderFit) -> PiGains {
    PiGains { kp: 0.9 * fit.tau / (fit.gain * fit.delay), ti: fit.delay / 0.3 }
}

/// Closed-loop excitation over one year.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationInput {
    /// Applied input per step in W, zone order of the model.
    pub u: Vec<DVector<f64>>,
    pub disturbance: DisturbanceSeries,
    pub seed: u64,
    /// Set-point per step and zone; NaN while the zone floats freely.
    pub setpoints: Vec<DVector<f64>>,
    /// Full-model state at the start of the year.
    pub x0: DVector<f64>,
    /// Zone air temperatures `T(0) … T(N)` of the closed loop.
    pub outputs: Vec<DVector<f64>>,
    pub warnings: Vec<String>,
}

impl ExcitationInput {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

struct Loop<'a> {
    model: &'a StateSpace<f64>,
    gains: Vec<PiGains>,
    setpoints: &'a [DVector<f64>],
    w: &'a [DVector<f64>],
}

impl Loop<'_> {
    fn run(&self, x0: &DVector<f64>) -> (Vec<DVector<f64>>, Vec<DVector<f64>>, DVector<f64>) {
        let nz = self.model.num_zones();
        let mut x = x0.clone();
        let mut integ = vec![0.0; nz];
        let mut reference = vec![f64::NAN; nz];
        let mut us = Vec::with_capacity(self.w.len());
        let mut ys = Vec::with_capacity(self.w.len() + 1);
        ys.push(self.model.output(&x));
        for (k, w) in self.w.iter().enumerate() {
            let mut u = DVector::zeros(nz);
            for i in 0..nz {
                let sp = self.setpoints[k][i];
                if sp.is_nan() {
                    integ[i] = 0.0;
                    reference[i] = f64::NAN;
                    continue;
                }
                reference[i] = if reference[i].is_nan() { sp } else { reference[i] + REFERENCE_SMOOTHING * (sp - reference[i]) };
                let sp = reference[i];
                let (lo, hi) = self.model.input_bounds[i];
                let g = self.gains[i];
                let e = sp - x[i];
                let v = g.kp * e + integ[i];
                let sat = v.clamp(lo, hi);
                if v == sat || (v > hi && e < 0.0) || (v < lo && e > 0.0) {
                    integ[i] = (integ[i] + g.kp * DT / g.ti * e).clamp(lo, hi);
                }
                u[i] = sat;
            }
            x = self.model.step(&x, &u, w);
            ys.push(self.model.output(&x));
            us.push(u);
        }
        (us, ys, x)
    }
}

/// Random set-point tracking over the year in `w`.
///
/// Each zone with actuator capacity follows a piecewise-constant set-point,
/// redrawn every [`DWELL_STEPS`] uniformly inside the widened comfort band,
/// from [`PREHEAT_STEPS`] before occupancy until occupancy ends, and floats
/// otherwise. Set-point steps reach the PI controller through a first-order
/// reference filter. The loop runs twice so the returned year starts from the state
/// in which the first pass ended.
pub fn generate_excitation(
    model: &StateSpace<f64>,
    w: &DisturbanceSeries,
    schedule: &ComfortSchedule,
    seed: u64,
) -> Result<ExcitationInput, InteractionError> {
    let days = w.len() / steps_per_day();
    if w.len() % steps_per_day() != 0 || !(365..=366).contains(&days) {
        return Err(InteractionError::Excitation(format!("disturbance series has {} steps, expected one year of 15-minute steps", w.len())));
    }
    let inputs = w.inputs(model, None)?;
    let widened = widen_comfort(schedule);
    let nz = model.num_zones();
    let n = w.len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<f64>> = (0..n.div_ceil(DWELL_STEPS)).map(|_| (0..nz).map(|_| rng.gen::<f64>()).collect()).collect();
    let mut warnings = Vec::new();
    let actuated: Vec<bool> = model.input_bounds.iter().map(|(lo, hi)| *lo < *hi).collect();
    for (i, on) in actuated.iter().enumerate() {
        if !on {
            warnings.push(format!("zone {} has no actuator capacity; its input stays at zero", model.zone_ids[i]));
        }
    }
    let setpoints: Vec<DVector<f64>> = (0..n)
        .map(|k| {
            let ahead = widened.steps_to_occupancy(k).filter(|d| *d <= PREHEAT_STEPS);
            DVector::from_fn(nz, |i, _| match ahead {
                Some(d) if actuated[i] => {
                    let band = widened.band(k + d).expect("occupied");
                    band.lower + draws[(k + d) / DWELL_STEPS][i] * (band.upper - band.lower)
                }
                _ => f64::NAN,
            })
        })
        .collect();

    let gains: Vec<PiGains> = (0..nz).map(|i| tune_pi(&fit_first_order(model, i))).collect();
    let lp = Loop { model, gains, setpoints: &setpoints, w: &inputs };
    let (_, _, x_end) = lp.run(&model.uniform_state(20.0));
    let (u, outputs, _) = lp.run(&x_end);

    for i in 0..nz {
        if !actuated[i] {
            continue;
        }
        let (mut occupied, mut inside) = (0usize, 0usize);
        for (k, y) in outputs.iter().enumerate().skip(1) {
            if let Some(b) = widened.band(k) {
                occupied += 1;
                inside += usize::from(b.contains(y[i]));
            }
        }
        if occupied > 0 && (inside as f64) < 0.95 * occupied as f64 {
            warnings.push(format!("zone {} stays inside the widened band on only {inside} of {occupied} occupied steps", model.zone_ids[i]));
        }
    }
    for msg in &warnings {
        warn!("{msg}");
    }
    Ok(ExcitationInput { u, disturbance: w.clone(), seed, setpoints, x0: x_end, outputs, warnings })
}
