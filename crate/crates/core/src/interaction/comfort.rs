use serde::{Deserialize, Serialize};

use super::InteractionError;
use crate::thermal::{steps_per_day, DT};

/// Occupied comfort band in °C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComfortBand {
    pub lower: f64,
    pub upper: f64,
}

impl ComfortBand {
    /// Distance from the band, zero inside it.
    pub fn violation(&self, t: f64) -> f64 {
        (self.lower - t).max(t - self.upper).max(0.0)
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lower && t <= self.upper
    }
}

/// Per-step comfort band; `None` marks an unoccupied step. Indexing wraps,
/// so a one-day schedule applies to every day of a longer run.
#[derive(Debug, Clone, PartialEq)]
pub struct ComfortSchedule {
    bands: Vec<Option<ComfortBand>>,
}

/// File form of a daily office schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DailyComfort {
    pub lower: f64,
    pub upper: f64,
    pub start_hour: f64,
    pub end_hour: f64,
}

impl Default for DailyComfort {
    fn default() -> Self {
        Self { lower: 22.0, upper: 24.0, start_hour: 8.0, end_hour: 18.0 }
    }
}

impl ComfortSchedule {
    pub fn new(bands: Vec<Option<ComfortBand>>) -> Result<Self, InteractionError> {
        if bands.is_empty() {
            return Err(InteractionError::Schedule("empty schedule".into()));
        }
        for (k, b) in bands.iter().enumerate() {
            if let Some(b) = b {
                if !(b.lower.is_finite() && b.upper.is_finite()) || b.lower >= b.upper {
                    return Err(InteractionError::Schedule(format!("step {k}: band [{}, {}]", b.lower, b.upper)));
                }
            }
        }
        Ok(Self { bands })
    }

    /// One day at 15-minute steps, occupied on `[start_hour, end_hour)`.
    pub fn daily(d: DailyComfort) -> Result<Self, InteractionError> {
        if !(0.0..=24.0).contains(&d.start_hour) || !(0.0..=24.0).contains(&d.end_hour) || d.start_hour >= d.end_hour {
            return Err(InteractionError::Schedule(format!("occupied hours {}..{}", d.start_hour, d.end_hour)));
        }
        let band = ComfortBand { lower: d.lower, upper: d.upper };
        let hours = DT / 3600.0;
        Self::new(
            (0..steps_per_day())
                .map(|k| {
                    let h = k as f64 * hours;
                    (h >= d.start_hour && h < d.end_hour).then_some(band)
                })
                .collect(),
        )
    }

    /// `[22, 24]` °C from 8:00 to 18:00.
    pub fn office() -> Self {
        Self::daily(DailyComfort::default()).expect("default schedule is valid")
    }

    pub fn from_toml(text: &str) -> Result<Self, InteractionError> {
        let d: DailyComfort = toml::from_str(text).map_err(|e| InteractionError::Schedule(e.to_string()))?;
        Self::daily(d)
    }

    pub fn len(&self) -> usize {
        self.bands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bands.is_empty()
    }

    pub fn band(&self, k: usize) -> Option<ComfortBand> {
        self.bands[k % self.bands.len()]
    }

    pub fn is_occupied(&self, k: usize) -> bool {
        self.band(k).is_some()
    }

    /// Steps until the next occupied step, counting `k` itself as zero.
    pub fn steps_to_occupancy(&self, k: usize) -> Option<usize> {
        (0..self.len()).find(|d| self.is_occupied(k + d))
    }

    pub fn bands(&self) -> &[Option<ComfortBand>] {
        &self.bands
    }
}

/// Widens every occupied band by 1 °C on each side.
pub fn widen_comfort(schedule: &ComfortSchedule) -> ComfortSchedule {
    ComfortSchedule { bands: schedule.bands.iter().map(|b| b.map(|b| ComfortBand { lower: b.lower - 1.0, upper: b.upper + 1.0 })).collect() }
}
