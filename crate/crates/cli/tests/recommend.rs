use ontodem_cli::{recommend_methods, Preconditions, Technique, Thresholds, TriggerMetrics};
use ontodem_rl::Method;
use proptest::prelude::*;

fn techniques(m: &TriggerMetrics, pre: &Preconditions) -> Vec<Technique> {
    recommend_methods(m, &Thresholds::default(), pre).into_iter().map(|r| r.technique).collect()
}

fn metrics() -> impl Strategy<Value = TriggerMetrics> {
    (
        (0.0..0.1f64, 0.0..0.5f64, 0.0..100.0f64),
        (0.0..1.0f64, -3.0..3.0f64, 0.0..3.0f64),
        (0.0..1.0f64, 0.0..20.0f64, 0.0..1.0f64),
    )
        .prop_map(|((noise, missing, dim), (dist, reward, delay), (imp, count, aimp))| TriggerMetrics {
            noise_fraction: noise,
            missing_fraction: missing,
            dimensionality: dim,
            ontology_distance: dist,
            reward,
            reward_delay: delay,
            importance: imp,
            action_count: count,
            action_importance: aimp,
        })
}

proptest! {
    /// Raising noise never withdraws a recommendation that noise triggered.
    #[test]
    fn more_noise_keeps_noise_methods(m in metrics(), extra in 0.0..0.5f64) {
        let pre = Preconditions::all();
        let before = techniques(&m, &pre);
        let after = techniques(&TriggerMetrics { noise_fraction: m.noise_fraction + extra, ..m }, &pre);
        for t in [Technique::Method(Method::Abstraction), Technique::Method(Method::Sampling)] {
            prop_assert!(!before.contains(&t) || after.contains(&t));
        }
    }

    /// Removing preconditions only ever removes recommendations.
    #[test]
    fn fewer_preconditions_fewer_methods(m in metrics()) {
        let all = techniques(&m, &Preconditions::all());
        let none = techniques(&m, &Preconditions::default());
        prop_assert!(none.iter().all(|t| all.contains(t)));
    }

    #[test]
    fn no_duplicates(m in metrics()) {
        let ts = techniques(&m, &Preconditions::all());
        for (i, t) in ts.iter().enumerate() {
            prop_assert!(!ts[i + 1..].contains(t));
        }
    }
}

#[test]
fn calm_situation_recommends_nothing() {
    let m = TriggerMetrics {
        dimensionality: 5.0,
        action_count: 3.0,
        importance: 0.1,
        action_importance: 0.1,
        ..TriggerMetrics::default()
    };
    assert!(techniques(&m, &Preconditions::all()).is_empty());
}
