//! RC network assembly, zero-order-hold discretization and simulation.

use std::fmt;

use nalgebra::{DMatrix, DVector, RealField};
use serde::{Deserialize, Serialize};

use super::building::{BuildingDescription, Endpoint, WallKind};
use super::ThermalError;

/// Sampling period, s.
pub const DT: f64 = 900.0;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateLabel {
    ZoneAir(u32),
    /// Mass node 1 (next to the wall's `a` zone) or 2.
    WallNode {
        wall: String,
        node: u8,
    },
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::ZoneAir(z) => write!(f, "zone{z}"),
            StateLabel::WallNode { wall, node } => write!(f, "{wall}/{node}"),
        }
    }
}

/// One column of the disturbance input `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    /// Outdoor air, °C.
    Ambient,
    /// Irradiance on a named surface, W/m².
    Solar(String),
    /// Internal gain of a zone, W.
    Gain(u32),
    /// Fixed boundary temperature, °C.
    Boundary,
}

impl Channel {
    /// Column name in a disturbance file.
    pub fn column(&self) -> String {
        match self {
            Channel::Ambient => "ambient_C".into(),
            Channel::Solar(s) => format!("solar_Wm2_{s}"),
            Channel::Gain(z) => format!("gain_W_{z}"),
            Channel::Boundary => "boundary_C".into(),
        }
    }
}

/// Continuous-time network `C ẋ = −K x + E_u u + E_w w`.
#[derive(Debug, Clone, PartialEq)]
pub struct RcNetwork {
    pub labels: Vec<StateLabel>,
    pub capacitance: Vec<f64>,
    pub conductance: DMatrix<f64>,
    pub input_map: DMatrix<f64>,
    pub disturbance_map: DMatrix<f64>,
    pub zone_ids: Vec<u32>,
    pub channels: Vec<Channel>,
    /// `(−cool_max, heat_max)` per zone, W.
    pub input_bounds: Vec<(f64, f64)>,
}

enum Target {
    Node(usize),
    Channel(usize),
}

impl RcNetwork {
    /// Assembles the network. Only parameter checks are run; connectivity
    /// is checked by [`build_model`].
    pub fn assemble(building: &BuildingDescription) -> Result<Self, ThermalError> {
        building.validate_parameters()?;
        let nz = building.zones.len();
        let zone_ids = building.zone_ids();
        let mut labels: Vec<StateLabel> = zone_ids.iter().map(|&z| StateLabel::ZoneAir(z)).collect();
        let mut capacitance: Vec<f64> = building.zones.iter().map(|z| z.capacitance).collect();

        let mut channels = vec![Channel::Ambient];
        channels.extend(building.surfaces().into_iter().map(Channel::Solar));
        channels.extend(zone_ids.iter().map(|&z| Channel::Gain(z)));
        let uses_boundary = building.walls.iter().any(|w| w.b == Endpoint::Boundary);
        if uses_boundary {
            channels.push(Channel::Boundary);
        }
        let channel = |c: &Channel| channels.iter().position(|x| x == c).expect("channel registered");

        let mut branches: Vec<(usize, Target, f64)> = Vec::new();
        let mut injections: Vec<(usize, usize, f64)> = Vec::new();
        let far = |b: Endpoint| -> Result<Option<Target>, ThermalError> {
            Ok(match b {
                Endpoint::Zone(z) => Some(Target::Node(building.zone_index(z)?)),
                Endpoint::Ambient => Some(Target::Channel(channel(&Channel::Ambient))),
                Endpoint::Boundary => Some(Target::Channel(channel(&Channel::Boundary))),
                Endpoint::Adiabatic => None,
            })
        };
        for w in &building.walls {
            let a = building.zone_index(w.a)?;
            match w.kind {
                WallKind::ThreeRTwoC => {
                    let n1 = labels.len();
                    let n2 = n1 + 1;
                    let (l1, l2) = if w.flipped { (2, 1) } else { (1, 2) };
                    labels.push(StateLabel::WallNode { wall: w.name.clone(), node: l1 });
                    labels.push(StateLabel::WallNode { wall: w.name.clone(), node: l2 });
                    capacitance.push(w.c[0]);
                    capacitance.push(w.c[1]);
                    branches.push((a, Target::Node(n1), 1.0 / w.r[0]));
                    branches.push((n1, Target::Node(n2), 1.0 / w.r[1]));
                    if let Some(t) = far(w.b)? {
                        branches.push((n2, t, 1.0 / w.r[2]));
                    }
                    if let Some(s) = &w.surface {
                        injections.push((n2, channel(&Channel::Solar(s.clone())), w.solar_area));
                    }
                }
                WallKind::OneR => {
                    if let Some(t) = far(w.b)? {
                        branches.push((a, t, 1.0 / w.r[0]));
                    }
                }
            }
        }
        for o in &building.openings {
            let a = building.zone_index(o.a)?;
            let b = building.zone_index(o.b)?;
            branches.push((a, Target::Node(b), 1.0 / building.opening_resistance(o)?));
        }
        for g in &building.gains.solar {
            injections.push((building.zone_index(g.zone)?, channel(&Channel::Solar(g.surface.clone())), g.area));
        }
        for (i, &z) in zone_ids.iter().enumerate() {
            injections.push((i, channel(&Channel::Gain(z)), 1.0));
        }

        let n = labels.len();
        let mut k = DMatrix::zeros(n, n);
        let mut e_w = DMatrix::zeros(n, channels.len());
        for (p, t, g) in branches {
            k[(p, p)] += g;
            match t {
                Target::Node(q) => {
                    k[(q, q)] += g;
                    k[(p, q)] -= g;
                    k[(q, p)] -= g;
                }
                Target::Channel(c) => e_w[(p, c)] += g,
            }
        }
        for (p, c, v) in injections {
            e_w[(p, c)] += v;
        }
        let mut e_u = DMatrix::zeros(n, nz);
        for i in 0..nz {
            e_u[(i, i)] = 1.0;
        }
        Ok(Self {
            labels,
            capacitance,
            conductance: k,
            input_map: e_u,
            disturbance_map: e_w,
            zone_ids,
            channels,
            input_bounds: building.zones.iter().map(|z| (-z.cool_max, z.heat_max)).collect(),
        })
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    /// Net heat flow into each node, W: `−K x + E_u u + E_w w`.
    pub fn heat_flows(&self, x: &DVector<f64>, u: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
        -&self.conductance * x + &self.input_map * u + &self.disturbance_map * w
    }

    /// Continuous-time `(A, B_u, B_w)`.
    pub fn continuous(&self) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
        let inv = DVector::from_iterator(self.capacitance.len(), self.capacitance.iter().map(|c| 1.0 / c));
        let scale = |m: &DMatrix<f64>| {
            let mut out = m.clone();
            for (i, mut row) in out.row_iter_mut().enumerate() {
                row *= inv[i];
            }
            out
        };
        (-scale(&self.conductance), scale(&self.input_map), scale(&self.disturbance_map))
    }

    /// Zero-order-hold discretization at `dt` seconds, computed in `T`.
    ///
    /// The matrix exponential is taken separately for each group of states
    /// coupled through `A`, together with the input columns that reach that
    /// group, so a part of the building that is thermally isolated from the
    /// rest discretizes to the same bits whatever else is in the model.
    pub fn discretize<T: RealField + Copy>(&self, dt: f64) -> StateSpace<T> {
        let (a, b_u, b_w) = self.continuous();
        let n = a.nrows();
        let m_u = b_u.ncols();
        let m = m_u + b_w.ncols();
        let b = |i: usize, j: usize| if j < m_u { b_u[(i, j)] } else { b_w[(i, j - m_u)] };
        let cv = |v: f64| nalgebra::convert::<f64, T>(v * dt);
        let mut ad = DMatrix::<T>::zeros(n, n);
        let mut bd = DMatrix::<T>::zeros(n, m);
        for group in coupled_groups(&a) {
            let cols: Vec<usize> = (0..m).filter(|&j| group.iter().any(|&i| b(i, j) != 0.0)).collect();
            let (g, h) = (group.len(), cols.len());
            let mut aug = DMatrix::<T>::zeros(g + h, g + h);
            for (r, &i) in group.iter().enumerate() {
                for (c, &j) in group.iter().enumerate() {
                    aug[(r, c)] = cv(a[(i, j)]);
                }
                for (c, &j) in cols.iter().enumerate() {
                    aug[(r, g + c)] = cv(b(i, j));
                }
            }
            let e = aug.exp();
            for (r, &i) in group.iter().enumerate() {
                for (c, &j) in group.iter().enumerate() {
                    ad[(i, j)] = e[(r, c)];
                }
                for (c, &j) in cols.iter().enumerate() {
                    bd[(i, j)] = e[(r, g + c)];
                }
            }
        }
        let nz = self.zone_ids.len();
        let mut c = DMatrix::<T>::zeros(nz, n);
        for i in 0..nz {
            c[(i, i)] = T::one();
        }
        StateSpace {
            a: ad,
            b_u: bd.columns(0, m_u).into_owned(),
            b_w: bd.columns(m_u, m - m_u).into_owned(),
            c,
            dt,
            labels: self.labels.clone(),
            zone_ids: self.zone_ids.clone(),
            channels: self.channels.clone(),
            input_bounds: self.input_bounds.clone(),
        }
    }
}

/// Connected components of the sparsity graph of `a`, each sorted.
fn coupled_groups(a: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let mut seen = vec![false; n];
    let mut groups = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut group = Vec::new();
        while let Some(i) = stack.pop() {
            group.push(i);
            for j in 0..n {
                if !seen[j] && (a[(i, j)] != 0.0 || a[(j, i)] != 0.0) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        group.sort_unstable();
        groups.push(group);
    }
    groups
}

/// `x(k+1) = A x(k) + B_u u(k) + B_w w(k)`, `T(k) = C x(k)`.
///
/// Zone air states come first in zone order, so `C = [I 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace<T: RealField + Copy> {
    pub a: DMatrix<T>,
    pub b_u: DMatrix<T>,
    pub b_w: DMatrix<T>,
    pub c: DMatrix<T>,
    pub dt: f64,
    pub labels: Vec<StateLabel>,
    pub zone_ids: Vec<u32>,
    pub channels: Vec<Channel>,
    pub input_bounds: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace<T: RealField + Copy> {
    /// `x(0) … x(N)`.
    pub states: Vec<DVector<T>>,
    /// `T(0) … T(N)`.
    pub outputs: Vec<DVector<T>>,
    /// `u(0) … u(N−1)`.
    pub inputs: Vec<DVector<T>>,
}

impl<T: RealField + Copy> SimulationTrace<T> {
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Output series of one zone (by output index).
    pub fn zone_series(&self, i: usize) -> Vec<T> {
        self.outputs.iter().map(|y| y[i]).collect()
    }
}

impl<T: RealField + Copy> StateSpace<T> {
    pub fn num_states(&self) -> usize {
        self.a.nrows()
    }

    pub fn num_zones(&self) -> usize {
        self.zone_ids.len()
    }

    pub fn zone_index(&self, id: u32) -> Result<usize, ThermalError> {
        self.zone_ids.iter().position(|&z| z == id).ok_or(ThermalError::UnknownZone(id))
    }

    pub fn state_index(&self, label: &StateLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn output(&self, x: &DVector<T>) -> DVector<T> {
        &self.c * x
    }

    pub fn step(&self, x: &DVector<T>, u: &DVector<T>, w: &DVector<T>) -> DVector<T> {
        let mut next = &self.a * x;
        next.gemv(T::one(), &self.b_u, u, T::one());
        next.gemv(T::one(), &self.b_w, w, T::one());
        next
    }

    /// Constant state vector.
    pub fn uniform_state(&self, value: T) -> DVector<T> {
        DVector::from_element(self.num_states(), value)
    }

    /// Runs the recursion over `u.len()` steps.
    pub fn simulate(&self, u: &[DVector<T>], w: &[DVector<T>], x0: &DVector<T>) -> Result<SimulationTrace<T>, ThermalError> {
        if u.len() != w.len() {
            return Err(ThermalError::Shape(format!("{} control steps but {} disturbance steps", u.len(), w.len())));
        }
        if x0.len() != self.num_states() {
            return Err(ThermalError::Shape(format!("x0 has {} entries, model has {} states", x0.len(), self.num_states())));
        }
        let mut states = Vec::with_capacity(u.len() + 1);
        let mut outputs = Vec::with_capacity(u.len() + 1);
        states.push(x0.clone());
        outputs.push(self.output(x0));
        for (k, (uk, wk)) in u.iter().zip(w).enumerate() {
            if uk.len() != self.b_u.ncols() || wk.len() != self.b_w.ncols() {
                return Err(ThermalError::Shape(format!(
                    "step {k}: u has {} entries (expected {}), w has {} (expected {})",
                    uk.len(),
                    self.b_u.ncols(),
                    wk.len(),
                    self.b_w.ncols()
                )));
            }
            let next = self.step(&states[k], uk, wk);
            outputs.push(self.output(&next));
            states.push(next);
        }
        Ok(SimulationTrace { states, outputs, inputs: u.to_vec() })
    }
}

impl StateSpace<f64> {
    /// Largest eigenvalue modulus of `A`.
    pub fn spectral_radius(&self) -> f64 {
        self.a.complex_eigenvalues().iter().map(|l| l.norm()).fold(0.0, f64::max)
    }
}

/// Validates the building (including connectivity) and discretizes its
/// network at 15-minute sampling.
pub fn build_model(building: &BuildingDescription) -> Result<StateSpace<f64>, ThermalError> {
    building.validate()?;
    Ok(RcNetwork::assemble(building)?.discretize(DT))
}

/// Model of the building with zone `j` removed and its shared surfaces made
/// adiabatic.
pub fn decouple_zone(building: &BuildingDescription, j: u32) -> Result<StateSpace<f64>, ThermalError> {
    decouple_zones(building, &[j])
}

pub fn decouple_zones(building: &BuildingDescription, removed: &[u32]) -> Result<StateSpace<f64>, ThermalError> {
    Ok(RcNetwork::assemble(&building.without_zones(removed)?)?.discretize(DT))
}
