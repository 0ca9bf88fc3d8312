use serde::{Deserialize, Serialize};

use super::MpcError;

/// Weights and normalizers of the performance index, and the ODM/FPM
/// trade-off `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricWeights {
    pub k_u: f64,
    pub k_ave: f64,
    pub k_max: f64,
    /// Energy normalizer, kWh.
    pub u_nr: f64,
    /// Mean-violation normalizer, °C.
    pub ave_nr: f64,
    /// Peak-violation normalizer, °C.
    pub max_nr: f64,
    pub alpha: f64,
}

impl MetricWeights {
    pub fn new(u_nr: f64, ave_nr: f64, max_nr: f64, alpha: f64) -> Result<Self, MpcError> {
        let w = Self { k_u: 1.0, k_ave: 1.0, k_max: 1.0, u_nr, ave_nr, max_nr, alpha };
        w.validate()?;
        Ok(w)
    }

    /// Unit weights with normalizers (100 kWh, 1 °C, 3 °C), as in the
    /// five-zone study.
    pub fn five_zone_study() -> Self {
        Self::new(100.0, 1.0, 3.0, 0.5).expect("valid")
    }

    /// Unit weights with normalizers (1000 kWh, 2 °C, 5 °C), as in the
    /// twenty-zone study.
    pub fn twenty_zone_study() -> Self {
        Self::new(1000.0, 2.0, 5.0, 0.5).expect("valid")
    }

    pub fn validate(&self) -> Result<(), MpcError> {
        for (name, v) in [("u_nr", self.u_nr), ("ave_nr", self.ave_nr), ("max_nr", self.max_nr)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(MpcError::Config(format!("normalizer {name} must be positive, got {v}")));
            }
        }
        for (name, v) in [("k_u", self.k_u), ("k_ave", self.k_ave), ("k_max", self.k_max)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(MpcError::Config(format!("weight {name} must be non-negative, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(MpcError::Config(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        Ok(())
    }
}

/// Energy and comfort outcome of one closed-loop day.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Triple {
    /// Total energy, kWh.
    pub u_tot: f64,
    /// Mean comfort violation, °C.
    pub yv_ave: f64,
    /// Largest comfort violation, °C.
    pub yv_max: f64,
}

impl Triple {
    pub fn new(u_tot: f64, yv_ave: f64, yv_max: f64) -> Self {
        Self { u_tot, yv_ave, yv_max }
    }

    /// Component-wise mean.
    pub fn mean(items: &[Triple]) -> Triple {
        let n = items.len().max(1) as f64;
        let sum = items.iter().fold(Triple::default(), |a, t| Triple::new(a.u_tot + t.u_tot, a.yv_ave + t.yv_ave, a.yv_max + t.yv_max));
        Triple::new(sum.u_tot / n, sum.yv_ave / n, sum.yv_max / n)
    }
}

/// `exp(−k_u u/u_nr − k_ave ave/ave_nr − k_max max/max_nr)`.
pub fn performance_index(t: Triple, w: &MetricWeights) -> Result<f64, MpcError> {
    w.validate()?;
    if t.u_tot < 0.0 || t.yv_ave < 0.0 || t.yv_max < 0.0 || !(t.u_tot.is_finite() && t.yv_ave.is_finite() && t.yv_max.is_finite()) {
        return Err(MpcError::Config(format!("metric inputs must be finite and non-negative: {t:?}")));
    }
    Ok((-w.k_u * t.u_tot / w.u_nr - w.k_ave * t.yv_ave / w.ave_nr - w.k_max * t.yv_max / w.max_nr).exp())
}

/// Optimality deterioration, percent.
pub fn odm(pi_central: f64, pi_partition: f64) -> f64 {
    (pi_central - pi_partition) / pi_central * 100.0
}

/// Fault propagation, percent.
pub fn fpm(pi_central: f64, pi_fault: f64) -> f64 {
    (pi_central - pi_fault) / pi_central * 100.0
}

/// Weighted performance, percent, from ODM and FPM in percent.
pub fn wpm(odm: f64, fpm: f64, alpha: f64) -> f64 {
    alpha * (100.0 - odm) + (1.0 - alpha) * (100.0 - fpm)
}

/// Metrics of one architecture against the centralized no-fault run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub pi_nominal: f64,
    pub pi_fault: f64,
    pub odm: f64,
    pub fpm: f64,
    pub wpm: f64,
}

pub fn metrics(central: Triple, nominal: Triple, fault: Triple, w: &MetricWeights) -> Result<Metrics, MpcError> {
    let pi_c = performance_index(central, w)?;
    let pi_nominal = performance_index(nominal, w)?;
    let pi_fault = performance_index(fault, w)?;
    let o = odm(pi_c, pi_nominal);
    let f = fpm(pi_c, pi_fault);
    Ok(Metrics { pi_nominal, pi_fault, odm: o, fpm: f, wpm: wpm(o, f, w.alpha) })
}

/// Indices of `(n, wpm)` entries ordered by WPM descending, ties going to
/// fewer clusters, then to the earlier entry.
pub fn rank_partitions(entries: &[(usize, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        let (na, wa) = entries[a];
        let (nb, wb) = entries[b];
        wb.total_cmp(&wa).then(na.cmp(&nb)).then(a.cmp(&b))
    });
    order
}
