use super::*;
use crate::interaction::{ComfortBand, ComfortSchedule};
use crate::thermal::{
    build_model, bundled_weather, five_zone_building, BuildingDescription, Channel, DisturbanceSeries, RcNetwork, StateLabel, StateSpace,
};
use approx::assert_abs_diff_eq;
use nalgebra::DVector;
use proptest::prelude::*;

fn five() -> MetricWeights {
    MetricWeights::five_zone_study()
}

fn twenty() -> MetricWeights {
    MetricWeights::twenty_zone_study()
}

#[test]
fn performance_index_examples() {
    assert_eq!(performance_index(Triple::default(), &five()).unwrap(), 1.0);
    let pi = performance_index(Triple::new(58.9649, 0.0, 0.0), &five()).unwrap();
    assert_abs_diff_eq!(pi, (-0.589649f64).exp(), epsilon = 1e-15);
    assert_abs_diff_eq!(pi, 0.55455, epsilon = 5e-5);
    let pi = performance_index(Triple::new(58.7341, 0.1608, 2.0582), &five()).unwrap();
    assert_abs_diff_eq!(pi, (-0.587341f64 - 0.1608 - 2.0582 / 3.0).exp(), epsilon = 1e-15);
    assert_abs_diff_eq!(pi, 0.23832, epsilon = 2e-5);
}

#[test]
fn performance_index_rejects_bad_input() {
    let mut w = five();
    w.ave_nr = 0.0;
    assert!(matches!(performance_index(Triple::default(), &w), Err(MpcError::Config(_))));
    assert!(performance_index(Triple::new(-1.0, 0.0, 0.0), &five()).is_err());
    assert!(MetricWeights::new(1.0, 1.0, 1.0, 1.5).is_err());
}

#[test]
fn five_zone_centralized_row() {
    let c = Triple::new(58.9649, 0.0, 0.0);
    let m = metrics(c, c, Triple::new(58.7341, 0.1608, 2.0582), &five()).unwrap();
    assert_eq!(m.odm, 0.0);
    assert_abs_diff_eq!(m.fpm, 57.026, epsilon = 5e-3);
    assert_abs_diff_eq!(m.wpm, 71.487, epsilon = 5e-3);
    assert_abs_diff_eq!(wpm(0.0, 57.026, 0.5), 71.487, epsilon = 1e-9);
}

#[test]
fn five_zone_two_cluster_odm() {
    let c = Triple::new(58.9649, 0.0, 0.0);
    let m = metrics(c, Triple::new(58.1501, 0.0084, 0.0525), Triple::new(58.7303, 0.1594, 1.9429), &five()).unwrap();
    assert_abs_diff_eq!(m.odm, 1.762, epsilon = 5e-3);
}

#[test]
fn twenty_zone_rows() {
    let c = Triple::new(795.5808, 0.0, 0.0);
    let m = metrics(c, c, Triple::new(823.3647, 0.1104, 3.1123), &twenty()).unwrap();
    assert_abs_diff_eq!(m.fpm, 50.6112, epsilon = 5e-3);
    assert_abs_diff_eq!(m.wpm, 74.6944, epsilon = 5e-3);
    let m = metrics(c, Triple::new(730.4916, 0.2251, 2.0331), Triple::new(756.3917, 0.3330, 3.7592), &twenty()).unwrap();
    assert_abs_diff_eq!(m.odm, 36.4961, epsilon = 5e-3);
}

#[test]
fn degenerate_metric_cases() {
    assert_eq!(odm(0.4, 0.4), 0.0);
    assert_eq!(fpm(0.4, 0.4), 0.0);
    assert_abs_diff_eq!(wpm(12.5, 40.0, 1.0), 87.5, epsilon = 1e-12);
    assert_abs_diff_eq!(wpm(12.5, 40.0, 0.0), 60.0, epsilon = 1e-12);
}

#[test]
fn ranking_examples() {
    assert_eq!(rank_partitions(&[(3, 10.0)]), vec![0]);
    let five_zone_best_per_n = [(1, 71.487), (2, 72.989), (3, 72.385), (4, 72.406), (5, 69.413)];
    assert_eq!(rank_partitions(&five_zone_best_per_n)[0], 1);
    let twenty = [(11, 74.6581), (1, 74.6944)];
    assert_eq!(rank_partitions(&twenty), vec![1, 0]);
    assert_eq!(rank_partitions(&[(4, 50.0), (2, 50.0), (3, 60.0)]), vec![2, 1, 0]);
}

proptest! {
    #[test]
    fn pi_strictly_decreases(u in 0.0f64..200.0, a in 0.0f64..2.0, m in 0.0f64..5.0, d in 0.01f64..10.0) {
        let w = five();
        let base = performance_index(Triple::new(u, a, m), &w).unwrap();
        prop_assert!(performance_index(Triple::new(u + d, a, m), &w).unwrap() < base);
        prop_assert!(performance_index(Triple::new(u, a + d, m), &w).unwrap() < base);
        prop_assert!(performance_index(Triple::new(u, a, m + d), &w).unwrap() < base);
    }

    #[test]
    fn odm_and_fpm_stay_below_100(c in (0.0f64..100.0, 0.0f64..1.0, 0.0f64..3.0), p in (0.0f64..300.0, 0.0f64..3.0, 0.0f64..9.0)) {
        let w = five();
        let central = Triple::new(c.0, c.1, c.2);
        let other = Triple::new(p.0, p.1, p.2);
        let m = metrics(central, other, other, &w).unwrap();
        prop_assert!(m.odm < 100.0 && m.fpm < 100.0);
        prop_assert_eq!(metrics(central, central, other, &w).unwrap().odm, 0.0);
    }
}

#[test]
fn replay_reads_csv_and_uses_first_single_cluster_row() {
    let text = "label,n,u_tot,yv_ave,yv_max,fault_u_tot,fault_yv_ave,fault_yv_max\n\
                a,2,58.8276,0.0036,0.0382,58.6496,0.1587,1.9275\n\
                b,1,58.9649,0,0,58.7341,0.1608,2.0582\n";
    let rows = ReplayRow::read_csv(text.as_bytes()).unwrap();
    let m = replay_metrics(&rows, &five()).unwrap();
    assert_abs_diff_eq!(m[0].odm, 1.488, epsilon = 5e-3);
    assert_abs_diff_eq!(m[0].wpm, 71.767, epsilon = 5e-3);
    assert_eq!(m[1].odm, 0.0);
    assert!(replay_metrics(&rows[..1], &five()).is_err());
    assert!(ReplayRow::read_csv("label,n\nx,1\n".as_bytes()).is_err());
}

fn bundled() -> (BuildingDescription, StateSpace<f64>, DisturbanceSeries) {
    let b = five_zone_building();
    let plant = build_model(&b).unwrap();
    let w = bundled_weather(&b).day(REPRESENTATIVE_DAY).unwrap();
    (b, plant, w)
}

#[test]
fn single_cluster_model_is_the_full_model() {
    let (b, plant, _) = bundled();
    let models = build_cluster_models(&b, &[b.zone_ids()]).unwrap();
    assert_eq!(models.len(), 1);
    assert_eq!(models[0].model, plant);
}

#[test]
fn singleton_cluster_sees_a_boundary_node() {
    let (b, _, _) = bundled();
    let models = build_cluster_models(&b, &[vec![2], vec![1, 3, 4, 5]]).unwrap();
    let m = &models[0].model;
    assert_eq!(m.zone_ids, vec![2]);
    assert!(m.channels.contains(&Channel::Boundary));
    assert!(m.state_index(&StateLabel::WallNode { wall: "z2-z4".into(), node: 1 }).is_some());
    assert_eq!(m.labels.len(), 1 + 2 + 2);
}

#[test]
fn cluster_models_reject_bad_covers() {
    let (b, _, _) = bundled();
    assert!(build_cluster_models(&b, &[vec![1, 2], vec![2, 3, 4, 5]]).is_err());
    assert!(build_cluster_models(&b, &[vec![1, 2, 3, 4]]).is_err());
    assert!(build_cluster_models(&b, &[vec![1, 2, 3, 4, 9]]).is_err());
    assert!(build_cluster_models(&b, &[vec![1, 2, 3, 4, 5], vec![]]).is_err());
}

/// Net heat into each zone air node with every node and the boundary at
/// 23 °C, keyed by zone id.
fn zone_flows_at_23(b: &BuildingDescription, w: &DisturbanceSeries, k: usize) -> Vec<(u32, f64)> {
    let net = RcNetwork::assemble(b).unwrap();
    let ss = net.discretize::<f64>(900.0);
    let wk = &w.inputs(&ss, Some(23.0)).unwrap()[k];
    let x = DVector::from_element(net.num_states(), 23.0);
    let u = DVector::from_iterator(net.zone_ids.len(), net.zone_ids.iter().map(|z| 100.0 * *z as f64));
    let q = net.heat_flows(&x, &u, wk);
    net.zone_ids.iter().enumerate().map(|(i, z)| (*z, q[i])).collect()
}

#[test]
fn boundary_terms_cancel_at_uniform_23() {
    let (b, _, w) = bundled();
    for clusters in [vec![vec![1, 3, 5], vec![2, 4]], vec![vec![1], vec![2], vec![3], vec![4], vec![5]], vec![vec![2], vec![1, 3, 4, 5]]] {
        for k in [0, 40, 60] {
            let mut full = zone_flows_at_23(&b, &w, k);
            let mut parts: Vec<(u32, f64)> = clusters.iter().flat_map(|c| zone_flows_at_23(&b.cluster(c).unwrap(), &w, k)).collect();
            full.sort_by_key(|p| p.0);
            parts.sort_by_key(|p| p.0);
            for ((za, qa), (zb, qb)) in full.iter().zip(&parts) {
                assert_eq!(za, zb);
                assert_abs_diff_eq!(qa, qb, epsilon = 1e-9);
            }
            let total_full: f64 = full.iter().map(|p| p.1).sum();
            let total_parts: f64 = parts.iter().map(|p| p.1).sum();
            assert_abs_diff_eq!(total_full, total_parts, epsilon = 1e-9);
        }
    }
}

fn central(plant: &StateSpace<f64>) -> Vec<ClusterModel> {
    vec![ClusterModel { zones: plant.zone_ids.clone(), model: plant.clone() }]
}

#[test]
fn single_cluster_controller_matches_centralized_bitwise() {
    let (b, plant, w) = bundled();
    let cfg = MpcConfig::default();
    let x0 = plant.uniform_state(20.0);
    let d = build_cluster_models(&b, &[b.zone_ids()]).unwrap();
    for fault in [Fault::None, Fault::SensorGain { zone: 3, gain: 1.1 }] {
        let a = run_mpc(&plant, &central(&plant), &w, &x0, &cfg, fault).unwrap();
        let c = run_mpc(&plant, &d, &w, &x0, &cfg, fault).unwrap();
        assert_eq!(a, c);
    }
}

#[test]
fn wide_band_needs_no_control() {
    let (_, plant, w) = bundled();
    let band = ComfortBand { lower: -100.0, upper: 100.0 };
    let cfg = MpcConfig { schedule: ComfortSchedule::new(vec![Some(band); 96]).unwrap(), ..MpcConfig::default() };
    let run = run_mpc(&plant, &central(&plant), &w, &plant.uniform_state(18.0), &cfg, Fault::None).unwrap();
    assert_eq!(run.outcome, Triple::new(0.0, 0.0, 0.0));
    assert!(run.lp_solves > 0);
}

#[test]
fn centralized_day_keeps_the_band() {
    let (_, plant, w) = bundled();
    let cfg = MpcConfig::default();
    let x0 = periodic_start(&plant, &w, &cfg, 6).unwrap();
    let run = run_mpc(&plant, &central(&plant), &w, &x0, &cfg, Fault::None).unwrap();
    assert!(run.outcome.yv_max < 1e-6, "{:?}", run.outcome);
    assert!(run.outcome.u_tot > 0.0);
    for u in &run.inputs {
        for (i, v) in u.iter().enumerate() {
            let (lo, hi) = plant.input_bounds[i];
            assert!(*v >= lo - 1e-6 && *v <= hi + 1e-6);
        }
    }
    let recomputed = day_outcome(&run.inputs, &run.outputs, &cfg.schedule, &[0, 1, 2, 3, 4]);
    assert_eq!(recomputed, run.outcome);
    let again = run_mpc(&plant, &central(&plant), &w, &run.final_state, &cfg, Fault::None).unwrap();
    assert!((&again.final_state - &run.final_state).amax() < 0.05);
}

#[test]
fn faults_act_on_the_target_zone() {
    let (_, plant, w) = bundled();
    let cfg = MpcConfig::default();
    let x0 = plant.uniform_state(21.0);
    let idle = run_mpc(&plant, &central(&plant), &w, &x0, &cfg, Fault::Uncontrolled { zone: 5 }).unwrap();
    assert!(idle.inputs.iter().all(|u| u[4] == 0.0));
    let stuck = run_mpc(&plant, &central(&plant), &w, &x0, &cfg, Fault::ActuatorStuckZero { zone: 2 }).unwrap();
    assert!(stuck.inputs.iter().all(|u| u[1] == 0.0));
    assert!(stuck.outcome.yv_ave > 0.0);
    assert!(run_mpc(&plant, &central(&plant), &w, &x0, &cfg, Fault::Uncontrolled { zone: 8 }).is_err());
}

#[test]
fn day_outcome_by_hand() {
    let band = ComfortBand { lower: 22.0, upper: 24.0 };
    let schedule = ComfortSchedule::new(vec![None, Some(band), Some(band)]).unwrap();
    let inputs = vec![DVector::from_vec(vec![1000.0, -2000.0]); 2];
    let outputs = vec![DVector::from_vec(vec![10.0, 10.0]), DVector::from_vec(vec![21.0, 23.0]), DVector::from_vec(vec![23.0, 24.5])];
    let t = day_outcome(&inputs, &outputs, &schedule, &[0, 1]);
    assert_abs_diff_eq!(t.u_tot, 6000.0 * 900.0 / 3.6e6, epsilon = 1e-12);
    assert_abs_diff_eq!(t.yv_ave, 1.5 / 4.0, epsilon = 1e-12);
    assert_eq!(t.yv_max, 1.0);
    assert_abs_diff_eq!(day_outcome(&inputs, &outputs, &schedule, &[1]).yv_ave, 0.25, epsilon = 1e-12);
}

#[test]
fn run_rejects_bad_arguments() {
    let (b, plant, w) = bundled();
    let cfg = MpcConfig::default();
    let x0 = plant.uniform_state(21.0);
    let short = w.slice(0, 95).unwrap();
    assert!(matches!(run_mpc(&plant, &central(&plant), &short, &x0, &cfg, Fault::None), Err(MpcError::Config(_))));
    let part = build_cluster_models(&b, &[vec![1, 2, 3, 4, 5]]).unwrap();
    let dup = [part[0].clone(), part[0].clone()];
    assert!(run_mpc(&plant, &dup, &w, &x0, &cfg, Fault::None).is_err());
    let bad = MpcConfig { horizon: 0, ..MpcConfig::default() };
    assert!(run_mpc(&plant, &central(&plant), &w, &x0, &bad, Fault::None).is_err());
}

#[test]
fn evaluation_is_thread_independent_and_serializes() {
    let (b, plant, w) = bundled();
    let cfg = MpcConfig { horizon: 8, ..MpcConfig::default() };
    let x0 = plant.uniform_state(21.0);
    let archs = vec![Architecture::new(vec![b.zone_ids()]), Architecture::new(vec![vec![1, 3, 4, 5], vec![2]])];
    let plan = EvaluationPlan::standard(&[1, 2], Some(5));
    let one = evaluate_architectures(&b, &w, &x0, &archs, &cfg, &plan, &five(), 1).unwrap();
    let many = evaluate_architectures(&b, &w, &x0, &archs, &cfg, &plan, &five(), 4).unwrap();
    assert_eq!(one, many);
    assert_eq!(one.rows[0].label, "{1,2,3,4,5}");
    assert_eq!(one.rows[0].metrics.odm, 0.0);
    assert_eq!(one.rows[0].nominal, one.baseline);
    assert_eq!(one.rows[1].extra.len(), 1);
    assert_eq!(EvaluationReport::from_json(&one.to_json()).unwrap(), one);
    let mut csv = Vec::new();
    one.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("rank,label,n,u_tot"));
    assert!(one.to_table().contains("{1,3,4,5},{2}"));
    let bad = EvaluationPlan { fault: FaultScenario::sensor_sweep(&[9], &[1.1]), extra: vec![] };
    assert!(evaluate_architectures(&b, &w, &x0, &archs, &cfg, &bad, &five(), 1).is_err());
}
