use super::*;
use crate::thermal::{build_model, bundled_weather, five_zone_building, BuildingDescription, DisturbanceSeries};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bundled_excitation(b: &BuildingDescription, seed: u64) -> ExcitationInput {
    let m = build_model(b).unwrap();
    generate_excitation(&m, &bundled_weather(b), &ComfortSchedule::office(), seed).unwrap()
}

#[test]
fn widening_examples() {
    let s = ComfortSchedule::office();
    let w = widen_comfort(&s);
    assert_eq!(w.band(40), Some(ComfortBand { lower: 21.0, upper: 25.0 }));
    assert_eq!(w.band(0), None);
    assert_eq!(w.len(), 96);
    let narrow = ComfortSchedule::new(vec![Some(ComfortBand { lower: 23.0, upper: 23.5 }), None]).unwrap();
    let wide = widen_comfort(&narrow);
    assert_eq!(wide.band(0), Some(ComfortBand { lower: 22.0, upper: 24.5 }));
    assert_eq!(wide.band(1), None);
    assert_eq!(wide.band(2), wide.band(0));
}

#[test]
fn office_schedule_shape() {
    let s = ComfortSchedule::office();
    let occupied: Vec<usize> = (0..96).filter(|k| s.is_occupied(*k)).collect();
    assert_eq!(occupied.first(), Some(&32));
    assert_eq!(occupied.last(), Some(&71));
    assert_eq!(occupied.len(), 40);
    assert_eq!(s.steps_to_occupancy(24), Some(8));
    assert_eq!(s.steps_to_occupancy(72), Some(56));
    let parsed = ComfortSchedule::from_toml("lower = 22.0\nupper = 24.0\nstart_hour = 8.0\nend_hour = 18.0\n").unwrap();
    assert_eq!(parsed, s);
    assert!(ComfortSchedule::new(vec![Some(ComfortBand { lower: 24.0, upper: 22.0 })]).is_err());
    assert!(ComfortSchedule::from_toml("lower = 22.0\nupper = 24.0\nstart_hour = 18.0\nend_hour = 8.0\n").is_err());
    assert!(ComfortSchedule::from_toml("lower = 22.0\n").is_err());
}

#[test]
fn distribution_examples() {
    let d = estimate_distribution(&[0.1, 0.5, 0.3, 0.9], 1).unwrap();
    assert_eq!(d.probabilities(), &[1.0]);
    assert!((d.midpoints()[0] - 0.45).abs() < 1e-15);

    let d = estimate_distribution(&[0.7; 50], 10).unwrap();
    assert!((d.expectation() - 0.7).abs() < 1e-15);
    assert_eq!(d.probabilities()[0], 1.0);
    assert!(d.midpoints().iter().all(|m| *m == 0.7));

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let samples: Vec<f64> = (0..100_000).map(|_| rng.gen::<f64>()).collect();
    let d = estimate_distribution(&samples, 10).unwrap();
    assert_eq!(d.bins(), 10);
    for p in d.probabilities() {
        assert!((p - 0.1).abs() < 0.05);
    }
    let total: f64 = d.probabilities().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);

    assert!(estimate_distribution(&[], 3).is_err());
    assert!(estimate_distribution(&[1.0], 0).is_err());
    assert!(estimate_distribution(&[f64::NAN], 2).is_err());
}

#[test]
fn empty_bins_keep_the_centre() {
    let d = estimate_distribution(&[0.0, 0.0, 1.0], 4).unwrap();
    assert_eq!(d.probabilities(), &[2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0]);
    assert_eq!(d.midpoints(), &[0.0, 0.375, 0.625, 1.0]);
}

proptest! {
    #[test]
    fn distribution_invariants(samples in proptest::collection::vec(0.0f64..5.0, 1..300), n_d in 1usize..15) {
        let d = estimate_distribution(&samples, n_d).unwrap();
        let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let total: f64 = d.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        for m in d.midpoints() {
            prop_assert!(*m >= lo && *m <= hi);
        }
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        prop_assert!((d.expectation() - mean).abs() <= 1e-9 * hi.max(1.0));
    }

    #[test]
    fn averaging_is_order_free(
        pairs in proptest::collection::vec((0.0f64..3.0, 0.0f64..3.0), 1..200)
    ) {
        let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let (iab, sab) = average_directions(&a, &b).unwrap();
        let (iba, sba) = average_directions(&b, &a).unwrap();
        prop_assert_eq!(iab, iba);
        prop_assert_eq!(&sab, &sba);
        prop_assert!(iab.lower() >= 0.0 && iab.lower() <= iab.upper());
        for s in &sab {
            prop_assert!(iab.contains(*s));
        }
    }
}

#[test]
fn excitation_is_deterministic_and_tracks() {
    let b = five_zone_building();
    let m = build_model(&b).unwrap();
    let w = bundled_weather(&b);
    let e1 = generate_excitation(&m, &w, &ComfortSchedule::office(), 11).unwrap();
    let e2 = generate_excitation(&m, &w, &ComfortSchedule::office(), 11).unwrap();
    assert_eq!(e1.u, e2.u);
    assert_eq!(e1.outputs, e2.outputs);
    assert_eq!(e1.x0, e2.x0);
    let bits = |e: &ExcitationInput| -> Vec<u64> { e.setpoints.iter().flat_map(|s| s.iter().map(|v| v.to_bits())).collect() };
    assert_eq!(bits(&e1), bits(&e2));
    assert_eq!(e1.len(), w.len());
    let e3 = generate_excitation(&m, &w, &ComfortSchedule::office(), 12).unwrap();
    assert_ne!(e1.u, e3.u);
    assert!(e1.warnings.is_empty(), "{:?}", e1.warnings);

    for u in &e1.u {
        for (i, (lo, hi)) in m.input_bounds.iter().enumerate() {
            assert!(u[i] >= *lo && u[i] <= *hi);
        }
    }
    let wide = widen_comfort(&ComfortSchedule::office());
    let (mut occupied, mut inside) = (0, 0);
    for (k, y) in e1.outputs.iter().enumerate() {
        if let Some(band) = wide.band(k) {
            for t in y.iter() {
                occupied += 1;
                inside += usize::from(band.contains(*t));
            }
        }
    }
    let frac = inside as f64 / occupied as f64;
    assert!(frac >= 0.95, "in-band fraction {frac}");

    let replay = m.simulate(&e1.u, &w.inputs(&m, None).unwrap(), &e1.x0).unwrap();
    assert_eq!(replay.outputs, e1.outputs);
}

#[test]
fn zero_capacity_actuators_stay_off() {
    let mut b = five_zone_building();
    b.zones[2].heat_max = 0.0;
    b.zones[2].cool_max = 0.0;
    let e = bundled_excitation(&b, 3);
    assert!(e.u.iter().all(|u| u[2] == 0.0));
    assert!(e.setpoints.iter().all(|s| s[2].is_nan()));
    assert!(e.warnings.iter().any(|w| w.contains("zone 3")));
}

#[test]
fn excitation_needs_a_year() {
    let b = five_zone_building();
    let m = build_model(&b).unwrap();
    let short = bundled_weather(&b).slice(0, 96 * 30).unwrap();
    assert!(matches!(generate_excitation(&m, &short, &ComfortSchedule::office(), 1), Err(InteractionError::Excitation(_))));
}

#[test]
fn pi_tuning_is_positive() {
    let m = build_model(&five_zone_building()).unwrap();
    for i in 0..5 {
        let fit = fit_first_order(&m, i);
        assert!(fit.gain > 0.0 && fit.tau > 0.0 && fit.delay > 0.0);
        let g = tune_pi(&fit);
        assert!(g.kp > 0.0 && g.ti > 0.0);
    }
}

#[test]
fn bundled_graph_properties() {
    let b = five_zone_building();
    let e = bundled_excitation(&b, 2023);
    let g = build_graph(&b, &e, DEFAULT_BINS).unwrap();
    let pairs: Vec<(u32, u32)> = g.edges.iter().map(|e| (e.a, e.b)).collect();
    assert_eq!(pairs, vec![(1, 5), (2, 4), (3, 5), (4, 5)]);
    assert_eq!(g.seed, Some(2023));
    let mut q = Quantifier::new(&b, &e).unwrap();
    for edge in &g.edges {
        let iv = edge.interval;
        eprintln!("{}-{}: [{:.4}, {:.4}] E={:.4}", edge.a, edge.b, iv.lower(), iv.upper(), edge.distribution.expectation());
        assert!(0.0 <= iv.lower() && iv.lower() <= iv.upper());
        assert!(iv.contains(edge.distribution.expectation()));
        for (m, p) in edge.distribution.midpoints().iter().zip(edge.distribution.probabilities()) {
            assert!(*p == 0.0 || iv.contains(*m));
        }
        let (back, samples_back) = q.interval(edge.b, edge.a).unwrap();
        let (fwd, samples_fwd) = q.interval(edge.a, edge.b).unwrap();
        assert_eq!(back, fwd);
        assert_eq!(back, iv);
        assert_eq!(samples_back, samples_fwd);
    }
    let text = g.to_toml();
    assert_eq!(InteractionGraph::from_toml(&text).unwrap(), g);

    assert!(matches!(q.interval(1, 2), Err(InteractionError::NotAdjacent(1, 2))));
    assert!(matches!(q.interval(1, 9), Err(InteractionError::Thermal(_))));
}

#[test]
fn stronger_opening_does_not_shrink_the_upper_endpoint() {
    let b = five_zone_building();
    let mut stronger = b.clone();
    let o = stronger.openings.iter_mut().find(|o| (o.a, o.b) == (4, 5) || (o.a, o.b) == (5, 4)).unwrap();
    o.resistance /= 2.0;
    let base = interaction_interval(&b, &bundled_excitation(&b, 2023), 4, 5).unwrap().0;
    let more = interaction_interval(&stronger, &bundled_excitation(&stronger, 2023), 4, 5).unwrap().0;
    assert!(more.upper() >= base.upper(), "{more:?} vs {base:?}");
}

#[test]
fn zones_without_a_shared_branch_do_not_interact() {
    let mut b = five_zone_building();
    b.walls.retain(|w| w.name != "z2-z4");
    let e = bundled_excitation(&b, 5);
    let mut q = Quantifier::new(&b, &e).unwrap();
    let d24 = q.directed_deviation(2, 4).unwrap();
    let d42 = q.directed_deviation(4, 2).unwrap();
    let (iv, _) = average_directions(&d24, &d42).unwrap();
    assert_eq!((iv.lower(), iv.upper()), (0.0, 0.0));
    assert!(matches!(q.interval(2, 4), Err(InteractionError::NotAdjacent(2, 4))));
}

#[test]
fn symmetric_pair_has_equal_directions() {
    let text = r#"
name = "twins"
[[zones]]
id = 1
capacitance = 4.0e5
volume = 60.0
heat_max = 3000.0
cool_max = 3000.0
[[zones]]
id = 2
capacitance = 4.0e5
volume = 60.0
heat_max = 3000.0
cool_max = 3000.0
[[walls]]
a = 1
b = "ambient"
kind = "3r2c"
r = [0.02, 0.08, 0.05]
c = [1.0e6, 4.0e5]
[[walls]]
a = 2
b = "ambient"
kind = "3r2c"
r = [0.02, 0.08, 0.05]
c = [1.0e6, 4.0e5]
[[walls]]
a = 1
b = 2
kind = "3r2c"
r = [0.03, 0.1, 0.03]
c = [5.0e5, 5.0e5]
[gains.internal_peak]
1 = 200.0
2 = 200.0
"#;
    let b = BuildingDescription::from_toml(text).unwrap();
    let m = build_model(&b).unwrap();
    let weather = DisturbanceSeries::synthetic_year(&b, 2023, 4);
    let n = weather.len();
    let u: Vec<DVector<f64>> = (0..n).map(|k| DVector::from_element(2, ((k / 8) % 7) as f64 * 300.0 - 600.0)).collect();
    let x0 = m.uniform_state(20.0);
    let outputs = m.simulate(&u, &weather.inputs(&m, None).unwrap(), &x0).unwrap().outputs;
    let e = ExcitationInput { u, disturbance: weather, seed: 0, setpoints: vec![], x0, outputs, warnings: vec![] };
    let mut q = Quantifier::new(&b, &e).unwrap();
    let d12 = q.directed_deviation(1, 2).unwrap();
    let d21 = q.directed_deviation(2, 1).unwrap();
    let max = |d: &[f64]| d.iter().copied().fold(0.0, f64::max);
    let min = |d: &[f64]| d.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((max(&d12) - max(&d21)).abs() <= 1e-10 * max(&d12));
    assert!((min(&d12) - min(&d21)).abs() <= 1e-10);
}
