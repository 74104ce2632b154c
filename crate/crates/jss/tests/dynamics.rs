use ontodem_jss::{jss_knowledge, JssEnv, JssScenario, Load, NoiseSpec};
use ontodem_observation::{augment_observation_with, AugmentMode};
use ontodem_ontology::{Quality, Value};
use ontodem_rl::{Environment, RngStreams};
use proptest::prelude::*;
use rand::Rng;

fn scenario(load: &str, noise: &str) -> JssScenario {
    JssScenario::parse(&format!(
        r#"{{"load": "{load}", "due_mix": "high", "noise": {noise}, "seed": 1, "episodes": 1, "steps": 100}}"#
    ))
    .unwrap()
}

const NO_NOISE: &str = r#"{"kind": "none"}"#;

#[test]
fn orders_are_conserved_and_time_is_accounted() {
    for load in ["light", "heavy"] {
        let mut env = JssEnv::new(scenario(load, r#"{"kind": "level", "params": {"level": "high"}}"#)).unwrap();
        let mut rng = RngStreams::new(3);
        env.reset(&mut rng.env);
        for _ in 0..env.decision_budget() {
            let a = rng.exploration.random_range(0..8);
            let out = env.step(a, &mut rng.env).unwrap();
            let c = env.counts();
            assert_eq!(c.generated, c.queued + c.in_machines + c.processed + c.failed);
            for m in env.machines() {
                assert_eq!(m.elapsed(), env.tick());
                assert!(m.load() <= m.capacity);
            }
            assert!((0.0..=1.0).contains(&out.reward));
            if out.done {
                break;
            }
        }
        assert_eq!(env.tick(), 100);
        assert!(env.counts().processed > 0);
    }
}

#[test]
fn light_load_adds_three_orders_per_step() {
    let mut env = JssEnv::new(scenario("light", NO_NOISE)).unwrap();
    assert_eq!(env.scenario().load, Load::Light);
    let mut rng = RngStreams::new(5);
    env.reset(&mut rng.env);
    assert_eq!(env.counts().generated, 3);
    for step in 1..=30u64 {
        for _ in 0..3 {
            env.step(0, &mut rng.env).unwrap();
        }
        assert_eq!(env.tick(), step);
        assert_eq!(env.counts().generated, 3 * (step + 1));
    }
}

#[test]
fn full_machine_is_dispatch_infeasible() {
    let mut env = JssEnv::new(scenario("heavy", NO_NOISE)).unwrap();
    let mut rng = RngStreams::new(9);
    env.reset(&mut rng.env);
    let mut zero = 0;
    for _ in 0..60 {
        if env.step(0, &mut rng.env).unwrap().reward == 0.0 && env.machines()[0].is_full() {
            zero += 1;
        }
    }
    assert!(zero > 0);
    assert!(env.jss_metrics().infeasible > 0);
    assert!(env.step(8, &mut rng.env).is_err());
}

#[test]
fn capacity_noise_matches_its_rate() {
    let p = 0.01;
    let mut env =
        JssEnv::new(scenario("heavy", &format!(r#"{{"kind": "capacity", "params": {{"p": {p}}}}}"#))).unwrap();
    let mut rng = RngStreams::new(11);
    env.reset(&mut rng.env);
    for a in 0..8 {
        for _ in 0..4 {
            env.step(a, &mut rng.env).unwrap();
        }
    }
    let full: Vec<String> = env.machines().iter().filter(|m| m.is_full()).map(|m| m.name()).collect();
    assert!(full.len() >= 4);
    let (mut trials, mut flipped) = (0u64, 0u64);
    while trials < 100_000 {
        let obs = env.observe(&mut rng.noise);
        for m in &full {
            trials += 1;
            let r = obs.get(&m.as_str().into(), &"hasRemainingCapacity".into()).unwrap();
            if r.quality == Quality::Noisy {
                assert_eq!(r.value, Some(Value::sym("Free")));
                flipped += 1;
            }
        }
    }
    let rate = flipped as f64 / trials as f64;
    let sd = (p * (1.0 - p) / trials as f64).sqrt();
    assert!((rate - p).abs() < 3.0 * sd, "rate {rate}");
}

#[test]
fn augmentation_is_identity_without_noise() {
    let k = jss_knowledge().unwrap();
    let mut env = JssEnv::new(scenario("heavy", NO_NOISE)).unwrap();
    assert_eq!(env.scenario().noise, NoiseSpec::None);
    let mut rng = RngStreams::new(2);
    env.reset(&mut rng.env);
    for _ in 0..200 {
        let a = rng.exploration.random_range(0..8);
        env.step(a, &mut rng.env).unwrap();
        let obs = env.observe(&mut rng.noise);
        let aug = augment_observation_with(&obs, &k.rules, AugmentMode::MissingAndNoisy).unwrap();
        assert_eq!(aug, obs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn augmented_readings_agree_with_ground_truth(seed in 0u64..1000, steps in 1usize..300) {
        let k = jss_knowledge().unwrap();
        let noise = r#"{"kind": "level", "params": {"level": "high"}}"#;
        let mut s = scenario("heavy", noise);
        s.noise = NoiseSpec::Capacity { p: 0.3 };
        for s in [s, scenario("heavy", noise), scenario("light", r#"{"kind": "working_time", "params": {"machines": 8, "max": 4}}"#)] {
            let mut env = JssEnv::new(s).unwrap();
            let mut rng = RngStreams::new(seed);
            env.reset(&mut rng.env);
            for _ in 0..steps {
                let a = rng.exploration.random_range(0..8);
                env.step(a, &mut rng.env).unwrap();
            }
            let truth = env.ground_truth();
            let obs = env.observe(&mut rng.noise);
            let aug = augment_observation_with(&obs, &k.rules, AugmentMode::MissingAndNoisy).unwrap();
            for ((i, p), r) in aug.entries() {
                prop_assert!(r.quality != Quality::Noisy);
                if r.quality == Quality::CleanInferred {
                    prop_assert_eq!(r.value.as_ref(), truth.value(i.as_str(), p.as_str()));
                }
            }
            prop_assert_eq!(env.state_key(&aug), env.state_key(&truth));
        }
    }
}
