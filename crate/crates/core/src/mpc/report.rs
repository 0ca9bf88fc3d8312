use std::io::{Read, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::controller::{build_cluster_models, run_mpc, ClusterModel, Fault, FaultScenario, MpcConfig};
use super::metrics::{metrics, rank_partitions, MetricWeights, Metrics, Triple};
use super::MpcError;
use crate::thermal::{build_model, BuildingDescription, DisturbanceSeries};
use nalgebra::DVector;

/// A control architecture: one controller per cluster of zone ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Architecture {
    pub label: String,
    pub clusters: Vec<Vec<u32>>,
}

impl Architecture {
    pub fn new(clusters: Vec<Vec<u32>>) -> Self {
        let label =
            clusters.iter().map(|c| format!("{{{}}}", c.iter().map(u32::to_string).collect::<Vec<_>>().join(","))).collect::<Vec<_>>().join(",");
        Self { label, clusters }
    }

    pub fn n(&self) -> usize {
        self.clusters.len()
    }
}

/// Scenarios run for every architecture besides the no-fault day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPlan {
    /// Faulty scenario entering the fault propagation metric.
    pub fault: FaultScenario,
    /// Optional extra scenarios reported alongside (not in the metrics).
    pub extra: Vec<FaultScenario>,
}

impl EvaluationPlan {
    /// ±10 % sensor gain on each zone in turn, plus `uncontrolled` left
    /// without control when given.
    pub fn standard(zones: &[u32], uncontrolled: Option<u32>) -> Self {
        Self { fault: FaultScenario::sensor_sweep(zones, &[0.9, 1.1]), extra: uncontrolled.map(FaultScenario::uncontrolled).into_iter().collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRow {
    pub label: String,
    pub n: usize,
    pub nominal: Triple,
    /// Averaged outcome of the faulty scenario.
    pub fault: Triple,
    /// Outcomes of the extra scenarios, in plan order.
    pub extra: Vec<Triple>,
    pub metrics: Metrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub seed: Option<u64>,
    pub weights: MetricWeights,
    pub plan: EvaluationPlan,
    /// Centralized no-fault outcome.
    pub baseline: Triple,
    pub rows: Vec<EvaluationRow>,
    /// Row indices, best first.
    pub ranking: Vec<usize>,
}

impl EvaluationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, MpcError> {
        serde_json::from_str(text).map_err(|e| MpcError::Config(format!("report: {e}")))
    }

    /// One line per row in ranking order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), MpcError> {
        let mut wr = csv::Writer::from_writer(out);
        let mut header: Vec<String> = ["rank", "label", "n", "u_tot", "yv_ave", "yv_max", "fault_u_tot", "fault_yv_ave", "fault_yv_max"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        for k in 0..self.plan.extra.len() {
            header.extend([format!("extra{k}_u_tot"), format!("extra{k}_yv_ave"), format!("extra{k}_yv_max")]);
        }
        header.extend(["pi", "pi_fault", "odm", "fpm", "wpm"].iter().map(|s| s.to_string()));
        wr.write_record(&header).map_err(csv_error)?;
        for (rank, &r) in self.ranking.iter().enumerate() {
            let row = &self.rows[r];
            let mut rec = vec![(rank + 1).to_string(), row.label.clone(), row.n.to_string()];
            let mut push = |t: &Triple| rec.extend([t.u_tot, t.yv_ave, t.yv_max].map(|v| format!("{v:.6}")));
            push(&row.nominal);
            push(&row.fault);
            for t in &row.extra {
                push(t);
            }
            let m = &row.metrics;
            rec.extend([m.pi_nominal, m.pi_fault].map(|v| format!("{v:.6}")));
            rec.extend([m.odm, m.fpm, m.wpm].map(|v| format!("{v:.4}")));
            wr.write_record(&rec).map_err(csv_error)?;
        }
        wr.flush().map_err(|e| MpcError::Io(e.to_string()))
    }

    /// Plain-text table in ranking order.
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "{:<4} {:<28} {:>2} {:>9} {:>8} {:>8} {:>9} {:>8} {:>8} {:>8} {:>8} {:>8}\n",
            "rank", "partition", "n", "u_tot", "yv_ave", "yv_max", "f_u_tot", "f_ave", "f_max", "ODM", "FPM", "WPM"
        );
        for (rank, &r) in self.ranking.iter().enumerate() {
            let row = &self.rows[r];
            let (t, f, m) = (&row.nominal, &row.fault, &row.metrics);
            s.push_str(&format!(
                "{:<4} {:<28} {:>2} {:>9.4} {:>8.4} {:>8.4} {:>9.4} {:>8.4} {:>8.4} {:>8.3} {:>8.3} {:>8.3}\n",
                rank + 1,
                row.label,
                row.n,
                t.u_tot,
                t.yv_ave,
                t.yv_max,
                f.u_tot,
                f.yv_ave,
                f.yv_max,
                m.odm,
                m.fpm,
                m.wpm
            ));
        }
        s
    }

    /// Rows whose PI (with or without fault) is not below the centralized
    /// no-fault PI, apart from the centralized row itself.
    pub fn calibration_violations(&self) -> Vec<usize> {
        let pi_c = self.rows.iter().find(|r| r.n == 1).map(|r| r.metrics.pi_nominal);
        let Some(pi_c) = pi_c else { return Vec::new() };
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.metrics.pi_fault >= pi_c || (r.n > 1 && r.metrics.pi_nominal >= pi_c))
            .map(|(i, _)| i)
            .collect()
    }
}

fn csv_error(e: csv::Error) -> MpcError {
    MpcError::Io(e.to_string())
}

/// Runs the centralized no-fault baseline and every architecture under
/// the plan, on up to `threads` worker threads. Results do not depend on
/// the thread count.
pub fn evaluate_architectures(
    building: &BuildingDescription,
    day: &DisturbanceSeries,
    x0: &DVector<f64>,
    architectures: &[Architecture],
    cfg: &MpcConfig,
    plan: &EvaluationPlan,
    weights: &MetricWeights,
    threads: usize,
) -> Result<EvaluationReport, MpcError> {
    weights.validate()?;
    let zones = building.zone_ids();
    plan.fault.validate(&zones)?;
    for s in &plan.extra {
        s.validate(&zones)?;
    }
    let plant = build_model(building)?;
    let central = vec![ClusterModel { zones: plant.zone_ids.clone(), model: plant.clone() }];
    let models: Vec<Vec<ClusterModel>> = architectures.iter().map(|a| build_cluster_models(building, &a.clusters)).collect::<Result<_, _>>()?;

    let scenarios: Vec<&FaultScenario> = std::iter::once(&plan.fault).chain(&plan.extra).collect();
    let mut jobs: Vec<(Option<usize>, usize, Fault)> = vec![(None, 0, Fault::None)];
    for a in 0..architectures.len() {
        jobs.push((Some(a), 0, Fault::None));
        for (s, sc) in scenarios.iter().enumerate() {
            jobs.extend(sc.runs.iter().map(|f| (Some(a), s + 1, *f)));
        }
    }
    let results: Mutex<Vec<Option<Result<Triple, MpcError>>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let j = next.fetch_add(1, Ordering::Relaxed);
        if j >= jobs.len() {
            break;
        }
        let (a, _, fault) = jobs[j];
        let clusters = a.map_or(&central, |a| &models[a]);
        let r = run_mpc(&plant, clusters, day, x0, cfg, fault).map(|d| d.outcome);
        results.lock().expect("no poisoned workers")[j] = Some(r);
    };
    std::thread::scope(|s| {
        for _ in 1..threads.max(1) {
            s.spawn(worker);
        }
        worker();
    });
    let results: Vec<Triple> =
        results.into_inner().expect("workers joined").into_iter().map(|r| r.expect("every job ran")).collect::<Result<_, _>>()?;

    let baseline = results[0];
    let mut rows = Vec::with_capacity(architectures.len());
    for (a, arch) in architectures.iter().enumerate() {
        let mut per_slot: Vec<Vec<Triple>> = vec![Vec::new(); scenarios.len() + 1];
        for (job, t) in jobs.iter().zip(&results) {
            if job.0 == Some(a) {
                per_slot[job.1].push(*t);
            }
        }
        let nominal = per_slot[0][0];
        let fault = Triple::mean(&per_slot[1]);
        let extra = per_slot[2..].iter().map(|v| Triple::mean(v)).collect();
        let metrics = metrics(baseline, nominal, fault, weights)?;
        rows.push(EvaluationRow { label: arch.label.clone(), n: arch.n(), nominal, fault, extra, metrics });
    }
    let ranking = rank_partitions(&rows.iter().map(|r| (r.n, r.metrics.wpm)).collect::<Vec<_>>());
    Ok(EvaluationReport { seed: None, weights: *weights, plan: plan.clone(), baseline, rows, ranking })
}

/// Raw outcomes of one architecture, as read for metric replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayRow {
    pub label: String,
    pub n: usize,
    pub u_tot: f64,
    pub yv_ave: f64,
    pub yv_max: f64,
    pub fault_u_tot: f64,
    pub fault_yv_ave: f64,
    pub fault_yv_max: f64,
}

impl ReplayRow {
    pub fn nominal(&self) -> Triple {
        Triple::new(self.u_tot, self.yv_ave, self.yv_max)
    }

    pub fn fault(&self) -> Triple {
        Triple::new(self.fault_u_tot, self.fault_yv_ave, self.fault_yv_max)
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Vec<Self>, MpcError> {
        let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        rd.deserialize().enumerate().map(|(i, r)| r.map_err(|e| MpcError::Config(format!("replay row {}: {e}", i + 1)))).collect()
    }
}

/// Metrics of every row against the first `n = 1` row.
pub fn replay_metrics(rows: &[ReplayRow], weights: &MetricWeights) -> Result<Vec<Metrics>, MpcError> {
    let base = rows.iter().find(|r| r.n == 1).ok_or_else(|| MpcError::Config("replay needs a row with n = 1 as baseline".into()))?;
    rows.iter().map(|r| metrics(base.nominal(), r.nominal(), r.fault(), weights)).collect()
}
