//! Weather and internal-gain series on a 15-minute grid.

use std::io::{Read, Write};

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Timelike};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::building::BuildingDescription;
use super::model::{Channel, StateSpace, DT};
use super::ThermalError;

const TIME_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

/// Column-oriented disturbance table.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbanceSeries {
    timestamps: Vec<NaiveDateTime>,
    columns: Vec<String>,
    data: Vec<Vec<f64>>,
}

impl DisturbanceSeries {
    /// Checks spacing, the ambient column, and sign of solar/gain columns.
    pub fn new(timestamps: Vec<NaiveDateTime>, columns: Vec<String>, data: Vec<Vec<f64>>) -> Result<Self, ThermalError> {
        if columns.len() != data.len() {
            return Err(ThermalError::Shape(format!("{} column names for {} columns", columns.len(), data.len())));
        }
        if !columns.iter().any(|c| c == "ambient_C") {
            return Err(ThermalError::MissingColumn("ambient_C".into()));
        }
        for (name, col) in columns.iter().zip(&data) {
            if col.len() != timestamps.len() {
                return Err(ThermalError::Shape(format!("column `{name}` has {} rows, expected {}", col.len(), timestamps.len())));
            }
            let signed = name.starts_with("solar_Wm2_") || name.starts_with("gain_W_");
            if let Some(k) = col.iter().position(|v| !v.is_finite() || (signed && *v < 0.0)) {
                return Err(ThermalError::Disturbance { line: k + 2, msg: format!("`{name}` = {} is not allowed", col[k]) });
            }
        }
        let step = Duration::seconds(DT as i64);
        for k in 1..timestamps.len() {
            if timestamps[k] - timestamps[k - 1] != step {
                return Err(ThermalError::Disturbance {
                    line: k + 2,
                    msg: format!("timestamp {} is not 15 minutes after {}", timestamps[k], timestamps[k - 1]),
                });
            }
        }
        Ok(Self { timestamps, columns, data })
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn timestamps(&self) -> &[NaiveDateTime] {
        &self.timestamps
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Result<&[f64], ThermalError> {
        self.columns.iter().position(|c| c == name).map(|k| self.data[k].as_slice()).ok_or_else(|| ThermalError::MissingColumn(name.to_string()))
    }

    pub fn ambient(&self) -> &[f64] {
        self.column("ambient_C").expect("checked at construction")
    }

    /// Rows `start .. start + len`.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self, ThermalError> {
        if start + len > self.len() {
            return Err(ThermalError::Shape(format!("rows {start}..{} outside a series of {}", start + len, self.len())));
        }
        Ok(Self {
            timestamps: self.timestamps[start..start + len].to_vec(),
            columns: self.columns.clone(),
            data: self.data.iter().map(|c| c[start..start + len].to_vec()).collect(),
        })
    }

    /// The 96 rows of day `index` (0-based).
    pub fn day(&self, index: usize) -> Result<Self, ThermalError> {
        self.slice(index * steps_per_day(), steps_per_day())
    }

    /// Per-step `w` vectors in the model's channel order. A boundary
    /// channel takes `boundary` when given, else the `boundary_C` column.
    pub fn inputs<T: nalgebra::RealField + Copy>(&self, model: &StateSpace<T>, boundary: Option<f64>) -> Result<Vec<DVector<T>>, ThermalError> {
        let mut cols: Vec<Result<&[f64], f64>> = Vec::with_capacity(model.channels.len());
        for ch in &model.channels {
            match (ch, boundary) {
                (Channel::Boundary, Some(v)) => cols.push(Err(v)),
                _ => cols.push(Ok(self.column(&ch.column())?)),
            }
        }
        Ok((0..self.len())
            .map(|k| {
                DVector::from_iterator(
                    cols.len(),
                    cols.iter().map(|c| {
                        nalgebra::convert::<f64, T>(match c {
                            Ok(col) => col[k],
                            Err(v) => *v,
                        })
                    }),
                )
            })
            .collect())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self, ThermalError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| ThermalError::Disturbance { line: 1, msg: e.to_string() })?.clone();
        if headers.get(0) != Some("timestamp") {
            return Err(ThermalError::Disturbance { line: 1, msg: "first column must be `timestamp`".into() });
        }
        let columns: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut timestamps = Vec::new();
        let mut data = vec![Vec::new(); columns.len()];
        for (k, rec) in rdr.records().enumerate() {
            let line = k + 2;
            let rec = rec.map_err(|e| ThermalError::Disturbance { line, msg: e.to_string() })?;
            if rec.len() != columns.len() + 1 {
                return Err(ThermalError::Disturbance { line, msg: format!("expected {} fields, got {}", columns.len() + 1, rec.len()) });
            }
            let t = NaiveDateTime::parse_from_str(&rec[0], TIME_FORMAT)
                .map_err(|e| ThermalError::Disturbance { line, msg: format!("timestamp `{}`: {e}", &rec[0]) })?;
            timestamps.push(t);
            for (j, col) in data.iter_mut().enumerate() {
                let v: f64 = rec[j + 1]
                    .parse()
                    .map_err(|_| ThermalError::Disturbance { line, msg: format!("`{}` = `{}` is not a number", columns[j], &rec[j + 1]) })?;
                col.push(v);
            }
        }
        Self::new(timestamps, columns, data)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), ThermalError> {
        let io = |e: csv::Error| ThermalError::Io(e.to_string());
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["timestamp".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).map_err(io)?;
        for k in 0..self.len() {
            let mut row = vec![self.timestamps[k].format(TIME_FORMAT).to_string()];
            row.extend(self.data.iter().map(|c| format!("{}", c[k])));
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| ThermalError::Io(e.to_string()))
    }

    /// A deterministic synthetic weather year for `building`: seasonal and
    /// diurnal ambient temperature with AR(1) weather noise, clear-sky
    /// irradiance on each referenced surface scaled by a daily cloud
    /// factor, and internal gains at each zone's peak during 8:00–18:00.
    pub fn synthetic_year(building: &BuildingDescription, year: i32, seed: u64) -> Self {
        let start = NaiveDate::from_ymd_opt(year, 1, 1).expect("valid year").and_hms_opt(0, 0, 0).expect("midnight");
        let days = if NaiveDate::from_ymd_opt(year, 2, 29).is_some() { 366 } else { 365 };
        let n = days * steps_per_day();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let timestamps: Vec<NaiveDateTime> = (0..n).map(|k| start + Duration::seconds(k as i64 * DT as i64)).collect();

        let mut ambient = Vec::with_capacity(n);
        let mut noise = 0.0;
        let mut cloud = Vec::with_capacity(days);
        for _ in 0..days {
            cloud.push(rng.gen_range(0.25..1.0));
        }
        for t in &timestamps {
            let doy = t.ordinal0() as f64;
            let hour = t.hour() as f64 + t.minute() as f64 / 60.0;
            let seasonal = 10.0 - 11.0 * (2.0 * std::f64::consts::PI * (doy + 10.0) / days as f64).cos();
            let diurnal = 4.5 * (2.0 * std::f64::consts::PI * (hour - 9.0) / 24.0).sin();
            noise = 0.995 * noise + rng.gen_range(-0.25..0.25);
            ambient.push(seasonal + diurnal + noise);
        }

        let surfaces = building.surfaces();
        let mut columns = vec!["ambient_C".to_string()];
        let mut data = vec![ambient];
        for s in &surfaces {
            columns.push(format!("solar_Wm2_{s}"));
            data.push(timestamps.iter().map(|t| clear_sky(s, t) * cloud[t.ordinal0() as usize]).collect());
        }
        for z in &building.zones {
            let peak = building.gains.internal_peak.get(&z.id.to_string()).copied().unwrap_or(0.0);
            columns.push(format!("gain_W_{}", z.id));
            data.push(timestamps.iter().map(|t| if (8..18).contains(&t.hour()) { peak } else { 0.0 }).collect());
        }
        Self::new(timestamps, columns, data).expect("synthetic series is well formed")
    }
}

pub fn steps_per_day() -> usize {
    (86_400.0 / DT) as usize
}

/// Rough clear-sky irradiance at 50°N on a vertical surface facing
/// `north`/`east`/`south`/`west`, or horizontal for anything else.
fn clear_sky(surface: &str, t: &NaiveDateTime) -> f64 {
    use std::f64::consts::PI;
    let doy = t.ordinal0() as f64;
    let hour = t.hour() as f64 + t.minute() as f64 / 60.0 + 0.125;
    let lat = 50f64.to_radians();
    let decl = 23.45f64.to_radians() * (2.0 * PI * (284.0 + doy) / 365.0).sin();
    let h = (hour - 12.0) * 15f64.to_radians();
    let sin_alt = lat.sin() * decl.sin() + lat.cos() * decl.cos() * h.cos();
    if sin_alt <= 0.0 {
        return 0.0;
    }
    let alt = sin_alt.asin();
    let cos_az = (decl.sin() - alt.sin() * lat.sin()) / (alt.cos() * lat.cos());
    let mut az = cos_az.clamp(-1.0, 1.0).acos();
    if h > 0.0 {
        az = 2.0 * PI - az;
    }
    let beam = 900.0 * sin_alt.powf(0.3);
    let diffuse = 0.12 * beam;
    let facing = match surface {
        "north" => Some(0.0),
        "east" => Some(0.5 * PI),
        "south" => Some(PI),
        "west" => Some(1.5 * PI),
        _ => None,
    };
    match facing {
        Some(f) => {
            let cos_inc = alt.cos() * (az - f).cos();
            beam * cos_inc.max(0.0) + 0.5 * diffuse
        }
        None => beam * sin_alt + diffuse,
    }
}
