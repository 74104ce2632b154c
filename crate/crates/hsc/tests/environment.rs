use ontodem_hsc::{default_series, hsc_knowledge, HscEnv, HscScenario, Interval, ThermalModel, POWER_LEVELS};
use ontodem_observation::{abstract_observation, ObservationHistory};
use ontodem_ontology::{Quality, Value};
use ontodem_rl::{Environment, RngStreams};
use proptest::prelude::*;

fn scenario(noise: f64, sigma: f64) -> HscScenario {
    let mut s = HscScenario::parse(&format!(r#"{{"noise_fraction": {noise}, "seed": 1, "episodes": 1, "steps": 96}}"#))
        .unwrap();
    s.thermal.sigma = sigma;
    s
}

#[test]
fn bundled_series_statistics() {
    let s = default_series().summary();
    assert!((s.min - -3.75).abs() < 0.01);
    assert!((s.max - 19.96).abs() < 0.01);
    assert!((s.mean - 6.47).abs() < 0.01);
    assert!((s.sd - 4.67).abs() < 0.01);
}

#[test]
fn discrete_dynamics_track_the_exponential_response() {
    let m = ThermalModel { sigma: 0.0, ..ThermalModel::default() };
    let (outside, power) = (5.0, 3000.0);
    let mut t = 10.0;
    let target = m.fixed_point(outside, power);
    for n in 1..=1000 {
        let next = m.next(t, outside, power);
        assert!((target - next).abs() <= (target - t).abs());
        t = next;
        let exact = m.analytic(10.0, outside, power, n);
        assert!((t - exact).abs() / exact.abs() < 0.01, "step {n}: {t} vs {exact}");
    }
}

#[test]
fn no_heating_cools_and_top_level_is_max_power() {
    assert_eq!(*POWER_LEVELS.last().unwrap(), 11000.0);
    let mut env = HscEnv::new(scenario(0.0, 0.0)).unwrap();
    let mut rng = RngStreams::new(1);
    env.reset(&mut rng.env);
    // Episodes start at 18 degrees, above every outdoor reading but the warmest.
    while env.outside() >= env.inside() {
        env.reset(&mut rng.env);
    }
    let before = env.inside();
    env.step(0, &mut rng.env).unwrap();
    assert!(env.inside() < before);
    assert!(env.step(12, &mut rng.env).is_err());
}

#[test]
fn clean_observation_without_noise() {
    let mut env = HscEnv::new(scenario(0.0, 0.05)).unwrap();
    let mut rng = RngStreams::new(4);
    env.reset(&mut rng.env);
    for _ in 0..96 {
        let obs = env.observe(&mut rng.noise);
        assert_eq!(obs, env.ground_truth());
        if env.step(5, &mut rng.env).unwrap().done {
            break;
        }
    }
    let m = env.hsc_metrics();
    assert!((0.0..=1.0).contains(&m.atsor));
    assert!(m.mse >= 0.0);
    assert_eq!(m.noisy_readings, 0);
}

#[test]
fn corruption_rate_matches_fraction() {
    let p = 0.02;
    let mut s = scenario(p, 0.05);
    // Detector off: only injected corruption is flagged.
    s.detector_window = 0;
    let mut env = HscEnv::new(s).unwrap();
    let mut rng = RngStreams::new(8);
    env.reset(&mut rng.env);
    let n = 100_000u64;
    let mut noisy = 0u64;
    for _ in 0..n {
        let obs = env.observe(&mut rng.noise);
        let r = obs.get(&"outside".into(), &"hasTemperature".into()).unwrap();
        if r.quality == Quality::Noisy {
            noisy += 1;
        }
    }
    let expected = p * n as f64;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    assert!((noisy as f64 - expected).abs() < 3.0 * sd, "{noisy} corrupted readings");
}

#[test]
fn abstraction_replaces_noise_with_class_mean() {
    let mut env = HscEnv::new(scenario(0.2, 0.05)).unwrap();
    let _ = hsc_knowledge().unwrap();
    let mut rng = RngStreams::new(12);
    env.reset(&mut rng.env);
    let mut history = ObservationHistory::new(8);
    let mut repaired = 0;
    for _ in 0..96 {
        let class = env.class_key();
        let raw = env.observe(&mut rng.noise);
        let out = abstract_observation(&raw, &class, &history);
        let reading = raw.get(&"outside".into(), &"hasTemperature".into()).unwrap();
        if reading.quality == Quality::Noisy {
            let clean: Vec<f64> = history
                .iter()
                .filter(|(_, k)| *k == class)
                .filter_map(|(s, _)| s.get(&"outside".into(), &"hasTemperature".into()))
                .filter(|r| r.quality == Quality::Clean)
                .filter_map(|r| r.value.as_ref().and_then(Value::as_f64))
                .collect();
            let got = out.get(&"outside".into(), &"hasTemperature".into()).unwrap();
            if clean.is_empty() {
                assert_eq!(got.quality, Quality::Unrepaired);
            } else {
                let mean = clean.iter().sum::<f64>() / clean.len() as f64;
                assert_eq!(got.quality, Quality::CleanImputed);
                assert!((got.value.as_ref().unwrap().as_f64().unwrap() - mean).abs() < 1e-9);
                repaired += 1;
            }
        } else {
            assert_eq!(out, raw);
        }
        history.push(raw, class);
        env.step(4, &mut rng.env).unwrap();
    }
    assert!(repaired > 0);
}

#[test]
fn runs_are_deterministic() {
    let run = || {
        let mut env = HscEnv::new(scenario(0.05, 0.05)).unwrap();
        let mut rng = RngStreams::new(21);
        env.reset(&mut rng.env);
        for k in 0..96 {
            env.observe(&mut rng.noise);
            env.step(k % 12, &mut rng.env).unwrap();
        }
        env.trace().to_vec()
    };
    assert_eq!(run(), run());
}

proptest! {
    #[test]
    fn metrics_bounds(trace in prop::collection::vec(10.0f64..30.0, 1..50)) {
        let comfort = Interval { lower: 20.0, upper: 24.0 };
        let a = ontodem_hsc::atsor(&trace, comfort);
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(ontodem_hsc::mse(&trace, comfort) >= 0.0);
        let pinned = vec![comfort.midpoint(); trace.len()];
        prop_assert_eq!(ontodem_hsc::atsor(&pinned, comfort), 0.0);
        prop_assert_eq!(ontodem_hsc::mse(&pinned, comfort), 0.0);
    }

    #[test]
    fn reward_falls_with_deviation_and_power(level in 0usize..11, seed in 0u64..50) {
        // One step from the same state: reward is minus squared deviation
        // minus a cost that grows with power.
        let mut env = HscEnv::new(scenario(0.0, 0.0)).unwrap();
        let mut rng = RngStreams::new(seed);
        env.reset(&mut rng.env);
        let mut a = env.clone();
        let mut b = env.clone();
        let mut ra = rng.env.clone();
        let mut rb = rng.env.clone();
        let out_a = a.step(level, &mut ra).unwrap().reward;
        let out_b = b.step(level + 1, &mut rb).unwrap().reward;
        let dev = |t: f64| (t - 22.0).powi(2);
        let cost_a = -out_a - dev(a.inside());
        let cost_b = -out_b - dev(b.inside());
        prop_assert!(cost_a >= 0.0);
        prop_assert!(cost_b > cost_a);
        if dev(b.inside()) >= dev(a.inside()) {
            prop_assert!(out_b < out_a);
        }
    }
}
