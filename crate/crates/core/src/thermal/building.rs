//! Building descriptions: zones, walls, openings and gain injection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::ThermalError;

/// The far side of a wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Zone(u32),
    Ambient,
    /// Zero heat flux.
    Adiabatic,
    /// A fixed-temperature node supplied as its own disturbance channel.
    Boundary,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Zone(z) => write!(f, "zone {z}"),
            Endpoint::Ambient => f.write_str("ambient"),
            Endpoint::Adiabatic => f.write_str("adiabatic"),
            Endpoint::Boundary => f.write_str("boundary"),
        }
    }
}

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Endpoint::Zone(z) => s.serialize_u32(*z),
            Endpoint::Ambient => s.serialize_str("ambient"),
            Endpoint::Adiabatic => s.serialize_str("adiabatic"),
            Endpoint::Boundary => s.serialize_str("boundary"),
        }
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Id(u32),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Id(z) => Ok(Endpoint::Zone(z)),
            Raw::Name(n) => match n.as_str() {
                "ambient" => Ok(Endpoint::Ambient),
                "adiabatic" => Ok(Endpoint::Adiabatic),
                "boundary" => Ok(Endpoint::Boundary),
                other => Err(de::Error::custom(format!("expected a zone id, \"ambient\", \"adiabatic\" or \"boundary\", got \"{other}\""))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Zone {
    pub id: u32,
    /// Air (and furniture) capacitance, J/K.
    pub capacitance: f64,
    /// m³, used for volume-scaled opening resistances.
    pub volume: f64,
    /// Heating limit, W.
    pub heat_max: f64,
    /// Cooling limit, W (the input may go down to `-cool_max`).
    pub cool_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WallKind {
    /// `a —R1— C1 —R2— C2 —R3— b`.
    #[serde(rename = "3r2c")]
    ThreeRTwoC,
    /// `a —R— b`, no storage.
    #[serde(rename = "1r")]
    OneR,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wall {
    #[serde(default)]
    pub name: String,
    pub a: u32,
    pub b: Endpoint,
    pub kind: WallKind,
    /// K/W; three values for 3R2C, one for 1R.
    pub r: Vec<f64>,
    /// J/K; two values for 3R2C, none for 1R.
    #[serde(default)]
    pub c: Vec<f64>,
    /// Solar surface whose irradiance heats the `b`-side mass node.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface: Option<String>,
    /// Absorbing area, m².
    #[serde(default)]
    pub solar_area: f64,
    /// Set when the wall is seen from its original `b` side; state labels
    /// keep the original node numbering.
    #[serde(skip)]
    pub flipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Opening {
    pub a: u32,
    pub b: u32,
    /// Area-specific resistance, m²K/W.
    pub resistance: f64,
    /// m².
    pub area: f64,
    /// `[p, q]`: multiply the resistance by `volume(p) / volume(q)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume_scale: Option<[u32; 2]>,
}

/// Solar transmitted through glazing straight into zone air.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolarGain {
    pub zone: u32,
    pub surface: String,
    /// Effective transmitting area, m².
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gains {
    #[serde(default)]
    pub solar: Vec<SolarGain>,
    /// Peak internal gain per zone id, W, used by the synthetic weather
    /// generator; the simulated gain itself comes from the
    /// `gain_W_<zone>` disturbance column.
    #[serde(default)]
    pub internal_peak: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildingDescription {
    #[serde(default)]
    pub name: String,
    pub zones: Vec<Zone>,
    #[serde(default)]
    pub walls: Vec<Wall>,
    #[serde(default)]
    pub openings: Vec<Opening>,
    #[serde(default)]
    pub gains: Gains,
}

impl BuildingDescription {
    pub fn from_toml(text: &str) -> Result<Self, ThermalError> {
        let mut b: Self = toml::from_str(text).map_err(|e| ThermalError::Parse(e.to_string()))?;
        b.assign_wall_names();
        b.validate()?;
        Ok(b)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("building serializes")
    }

    fn assign_wall_names(&mut self) {
        for (k, w) in self.walls.iter_mut().enumerate() {
            if w.name.is_empty() {
                w.name = format!("w{}", k + 1);
            }
        }
    }

    pub fn zone_ids(&self) -> Vec<u32> {
        self.zones.iter().map(|z| z.id).collect()
    }

    pub fn zone(&self, id: u32) -> Result<&Zone, ThermalError> {
        self.zones.iter().find(|z| z.id == id).ok_or(ThermalError::UnknownZone(id))
    }

    pub fn zone_index(&self, id: u32) -> Result<usize, ThermalError> {
        self.zones.iter().position(|z| z.id == id).ok_or(ThermalError::UnknownZone(id))
    }

    /// Opening resistance in K/W after volume scaling and area division.
    pub fn opening_resistance(&self, o: &Opening) -> Result<f64, ThermalError> {
        let scale = match o.volume_scale {
            Some([p, q]) => self.zone(p)?.volume / self.zone(q)?.volume,
            None => 1.0,
        };
        Ok(o.resistance * scale / o.area)
    }

    /// Solar surfaces referenced anywhere, sorted.
    pub fn surfaces(&self) -> Vec<String> {
        let mut s: BTreeSet<String> = self.walls.iter().filter_map(|w| w.surface.clone()).collect();
        s.extend(self.gains.solar.iter().map(|g| g.surface.clone()));
        s.into_iter().collect()
    }

    /// Unordered pairs of distinct zones that share a wall or an opening,
    /// sorted by zone index.
    pub fn adjacent_pairs(&self) -> Vec<(u32, u32)> {
        let mut pairs = BTreeSet::new();
        let idx = |z: u32| self.zone_index(z).unwrap_or(usize::MAX);
        let mut add = |a: u32, b: u32| {
            let (x, y) = if idx(a) <= idx(b) { (a, b) } else { (b, a) };
            pairs.insert((idx(x), idx(y), x, y));
        };
        for w in &self.walls {
            if let Endpoint::Zone(b) = w.b {
                add(w.a, b);
            }
        }
        for o in &self.openings {
            add(o.a, o.b);
        }
        pairs.into_iter().map(|(_, _, a, b)| (a, b)).collect()
    }

    /// Parameter checks plus the connectivity check.
    pub fn validate(&self) -> Result<(), ThermalError> {
        self.validate_parameters()?;
        self.check_connected()
    }

    /// Positivity, reference and shape checks on every element.
    pub fn validate_parameters(&self) -> Result<(), ThermalError> {
        let mut ids = BTreeSet::new();
        if self.zones.is_empty() {
            return Err(ThermalError::Parameter("building has no zones".into()));
        }
        for z in &self.zones {
            if !ids.insert(z.id) {
                return Err(ThermalError::Parameter(format!("duplicate zone id {}", z.id)));
            }
            positive(z.capacitance, || format!("zone {} capacitance", z.id))?;
            positive(z.volume, || format!("zone {} volume", z.id))?;
            nonnegative(z.heat_max, || format!("zone {} heat_max", z.id))?;
            nonnegative(z.cool_max, || format!("zone {} cool_max", z.id))?;
        }
        let mut names = BTreeSet::new();
        for w in &self.walls {
            if !names.insert(w.name.as_str()) {
                return Err(ThermalError::Parameter(format!("duplicate wall name `{}`", w.name)));
            }
            self.zone(w.a)?;
            if let Endpoint::Zone(b) = w.b {
                self.zone(b)?;
                if b == w.a {
                    return Err(ThermalError::Parameter(format!("wall `{}` joins zone {} to itself", w.name, b)));
                }
            }
            let (nr, nc) = match w.kind {
                WallKind::ThreeRTwoC => (3, 2),
                WallKind::OneR => (1, 0),
            };
            if w.r.len() != nr || w.c.len() != nc {
                return Err(ThermalError::Parameter(format!("wall `{}`: {:?} needs {nr} resistances and {nc} capacitances", w.name, w.kind)));
            }
            for (k, r) in w.r.iter().enumerate() {
                positive(*r, || format!("wall `{}` R{}", w.name, k + 1))?;
            }
            for (k, c) in w.c.iter().enumerate() {
                positive(*c, || format!("wall `{}` C{}", w.name, k + 1))?;
            }
            nonnegative(w.solar_area, || format!("wall `{}` solar_area", w.name))?;
            if w.surface.is_some() && w.kind == WallKind::OneR {
                return Err(ThermalError::Parameter(format!("wall `{}`: solar absorption needs a 3R2C wall; use a solar gain for glazing", w.name)));
            }
        }
        for o in &self.openings {
            self.zone(o.a)?;
            self.zone(o.b)?;
            if o.a == o.b {
                return Err(ThermalError::Parameter(format!("opening joins zone {} to itself", o.a)));
            }
            positive(o.resistance, || format!("opening {}-{} resistance", o.a, o.b))?;
            positive(o.area, || format!("opening {}-{} area", o.a, o.b))?;
            self.opening_resistance(o)?;
        }
        for g in &self.gains.solar {
            self.zone(g.zone)?;
            nonnegative(g.area, || format!("solar gain of zone {} area", g.zone))?;
        }
        for (k, v) in &self.gains.internal_peak {
            let id: u32 = k.parse().map_err(|_| ThermalError::Parameter(format!("internal gain key `{k}` is not a zone id")))?;
            self.zone(id)?;
            nonnegative(*v, || format!("internal gain of zone {id}"))?;
        }
        Ok(())
    }

    /// Zones must be reachable from each other through walls, openings or
    /// the ambient node.
    fn check_connected(&self) -> Result<(), ThermalError> {
        let n = self.zones.len();
        let ambient = n;
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            p[ra] = rb;
        };
        for w in &self.walls {
            let a = self.zone_index(w.a)?;
            match w.b {
                Endpoint::Zone(b) => union(&mut parent, a, self.zone_index(b)?),
                Endpoint::Ambient => union(&mut parent, a, ambient),
                Endpoint::Adiabatic | Endpoint::Boundary => {}
            }
        }
        for o in &self.openings {
            union(&mut parent, self.zone_index(o.a)?, self.zone_index(o.b)?);
        }
        let root = find(&mut parent, 0);
        for (k, z) in self.zones.iter().enumerate() {
            if find(&mut parent, k) != root {
                return Err(ThermalError::Topology(format!("zone {} is not connected to zone {}", z.id, self.zones[0].id)));
            }
        }
        Ok(())
    }

    /// The building with `removed` zones cut out: their walls to ambient
    /// and their openings are dropped, and walls shared with a kept zone
    /// become adiabatic on the removed side. Every other element is
    /// carried over unchanged.
    pub fn without_zones(&self, removed: &[u32]) -> Result<Self, ThermalError> {
        self.replace_zones(removed, Endpoint::Adiabatic, false)
    }

    /// The sub-building formed by `kept` zones, with every wall or opening
    /// towards another zone re-attached to the fixed-temperature boundary
    /// node.
    pub fn cluster(&self, kept: &[u32]) -> Result<Self, ThermalError> {
        let removed: Vec<u32> = self.zone_ids().into_iter().filter(|z| !kept.contains(z)).collect();
        for k in kept {
            self.zone(*k)?;
        }
        self.replace_zones(&removed, Endpoint::Boundary, true)
    }

    fn replace_zones(&self, removed: &[u32], severed: Endpoint, keep_openings: bool) -> Result<Self, ThermalError> {
        for z in removed {
            self.zone(*z)?;
        }
        let gone = |z: u32| removed.contains(&z);
        let zones: Vec<Zone> = self.zones.iter().filter(|z| !gone(z.id)).cloned().collect();
        if zones.is_empty() {
            return Err(ThermalError::Parameter("cannot remove every zone".into()));
        }
        let mut walls = Vec::new();
        for w in &self.walls {
            let b_gone = matches!(w.b, Endpoint::Zone(b) if gone(b));
            match (gone(w.a), b_gone) {
                (false, false) => walls.push(w.clone()),
                (false, true) => walls.push(Wall { b: severed, ..w.clone() }),
                (true, false) => {
                    if let Endpoint::Zone(b) = w.b {
                        walls.push(reverse_wall(w, b, severed));
                    }
                }
                (true, true) => {}
            }
        }
        let mut openings = Vec::new();
        let mut extra = Vec::new();
        for o in &self.openings {
            match (gone(o.a), gone(o.b)) {
                (false, false) => {
                    let mut o = o.clone();
                    if o.volume_scale.is_some_and(|[p, q]| gone(p) || gone(q)) {
                        o.resistance = self.opening_resistance(&o)? * o.area;
                        o.volume_scale = None;
                    }
                    openings.push(o);
                }
                (true, true) => {}
                (ga, _) if keep_openings => {
                    let kept = if ga { o.b } else { o.a };
                    extra.push(Wall {
                        name: format!("opening-{}-{}", o.a, o.b),
                        a: kept,
                        b: severed,
                        kind: WallKind::OneR,
                        r: vec![self.opening_resistance(o)?],
                        c: Vec::new(),
                        surface: None,
                        solar_area: 0.0,
                        flipped: false,
                    });
                }
                _ => {}
            }
        }
        walls.extend(extra);
        let gains = Gains {
            solar: self.gains.solar.iter().filter(|g| !gone(g.zone)).cloned().collect(),
            internal_peak: self
                .gains
                .internal_peak
                .iter()
                .filter(|(k, _)| k.parse::<u32>().map(|z| !gone(z)).unwrap_or(true))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        };
        Ok(Self { name: self.name.clone(), zones, walls, openings, gains })
    }
}

/// The same wall seen from its `b` zone: node order and resistances flip.
fn reverse_wall(w: &Wall, b: u32, severed: Endpoint) -> Wall {
    let mut r = w.r.clone();
    r.reverse();
    let mut c = w.c.clone();
    c.reverse();
    Wall { name: w.name.clone(), a: b, b: severed, kind: w.kind, r, c, surface: None, solar_area: 0.0, flipped: !w.flipped }
}

fn positive(v: f64, what: impl FnOnce() -> String) -> Result<(), ThermalError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(ThermalError::Parameter(format!("{} must be positive, got {v}", what())))
    }
}

fn nonnegative(v: f64, what: impl FnOnce() -> String) -> Result<(), ThermalError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(ThermalError::Parameter(format!("{} must be non-negative, got {v}", what())))
    }
}
