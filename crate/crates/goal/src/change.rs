use std::collections::BTreeSet;

use ontodem_ontology::{concept_weight, observation_importance, ObservationSchema, Ontology, TemporalContext};
use serde::Deserialize;

use crate::error::GoalError;
use crate::valuation::Valuation;

/// Division guard for [`state_similarity_reward`].
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeThresholds {
    pub reward_low: f64,
    pub reward_high: f64,
    pub state_distance: f64,
    pub concept_importance: f64,
    pub total_importance: f64,
}

/// Which kind of change calls for a goal decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChangeCase {
    /// The reward left its expected band.
    RewardOutOfBand,
    /// The state value moved further than the distance threshold.
    StateShift,
    /// An important concept appeared or total importance is high.
    ImportantConcept,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChangeEvaluation {
    pub reward: f64,
    pub state_distance: f64,
    pub importance: f64,
    pub case: Option<ChangeCase>,
}

/// Absolute difference of the two schemas' values.
pub fn state_distance(prev: &ObservationSchema, curr: &ObservationSchema, valuation: &dyn Valuation) -> f64 {
    (valuation.value(prev) - valuation.value(curr)).abs()
}

/// Inverse state distance, guarded by `epsilon` when the states coincide.
///
/// # Panics
///
/// Panics unless `epsilon > 0`.
pub fn state_similarity_reward(
    prev: &ObservationSchema,
    curr: &ObservationSchema,
    valuation: &dyn Valuation,
    epsilon: f64,
) -> f64 {
    assert!(epsilon > 0.0, "epsilon must be positive");
    1.0 / state_distance(prev, curr, valuation).max(epsilon)
}

/// Scores the transition `prev -> curr` and reports the first change case
/// that fires, checked in the order reward, distance, importance.
pub fn evaluate_change(
    prev: &ObservationSchema,
    curr: &ObservationSchema,
    reward: f64,
    thresholds: &ChangeThresholds,
    valuation: &dyn Valuation,
    ontology: &Ontology,
    ctx: Option<&TemporalContext>,
) -> Result<ChangeEvaluation, GoalError> {
    let distance = state_distance(prev, curr, valuation);
    let importance = observation_importance(curr, ontology, ctx);
    let case = if reward < thresholds.reward_low || reward > thresholds.reward_high {
        Some(ChangeCase::RewardOutOfBand)
    } else if distance > thresholds.state_distance {
        Some(ChangeCase::StateShift)
    } else if importance > thresholds.total_importance || heavy_newcomer(prev, curr, ontology, ctx, thresholds)? {
        Some(ChangeCase::ImportantConcept)
    } else {
        None
    };
    Ok(ChangeEvaluation { reward, state_distance: distance, importance, case })
}

fn heavy_newcomer(
    prev: &ObservationSchema,
    curr: &ObservationSchema,
    ontology: &Ontology,
    ctx: Option<&TemporalContext>,
    thresholds: &ChangeThresholds,
) -> Result<bool, GoalError> {
    let seen: BTreeSet<_> = prev.observed_concepts();
    for (i, c) in curr.instances() {
        if !seen.contains(c) && concept_weight(i, curr, ontology, ctx)? > thresholds.concept_importance {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontodem_ontology::{Range, Reading, Relationship, Value, Weight, WeightSpec};

    fn thresholds() -> ChangeThresholds {
        ChangeThresholds {
            reward_low: -1.0,
            reward_high: 1.0,
            state_distance: 5.0,
            concept_importance: 0.8,
            total_importance: 10.0,
        }
    }

    fn total(s: &ObservationSchema) -> f64 {
        s.entries().values().filter_map(|r| r.value.as_ref()?.as_f64()).sum()
    }

    fn onto() -> Ontology {
        Ontology::builder("o")
            .concepts(["Order", "Urgent"])
            .properties(["hasValue"])
            .weighted(
                Relationship::new("Order", "hasValue", Range::Number),
                WeightSpec::fixed(Weight::new(0.4).unwrap()),
            )
            .weighted(
                Relationship::new("Urgent", "hasValue", Range::Number),
                WeightSpec::fixed(Weight::new(0.9).unwrap()),
            )
            .build()
            .unwrap()
    }

    fn valued(v: f64) -> ObservationSchema {
        let mut s = ObservationSchema::new(0);
        s.add_instance("o1", "Order");
        s.put("o1", "hasValue", Reading::clean(Value::Num(v)));
        s
    }

    #[test]
    fn distance_is_absolute_difference() {
        assert_eq!(state_distance(&valued(10.0), &valued(7.0), &total), 3.0);
    }

    #[test]
    fn quiet_transition_triggers_nothing() {
        let e = evaluate_change(&valued(10.0), &valued(7.0), 0.0, &thresholds(), &total, &onto(), None).unwrap();
        assert_eq!(e.case, None);
    }

    #[test]
    fn cases_in_priority_order() {
        let o = onto();
        let t = thresholds();
        let e = evaluate_change(&valued(0.0), &valued(100.0), 2.0, &t, &total, &o, None).unwrap();
        assert_eq!(e.case, Some(ChangeCase::RewardOutOfBand));
        let e = evaluate_change(&valued(0.0), &valued(100.0), 0.0, &t, &total, &o, None).unwrap();
        assert_eq!(e.case, Some(ChangeCase::StateShift));
        let mut curr = valued(1.0);
        curr.add_instance("u1", "Urgent");
        curr.put("u1", "hasValue", Reading::clean(Value::Num(0.0)));
        let e = evaluate_change(&valued(1.0), &curr, 0.0, &t, &total, &o, None).unwrap();
        assert_eq!(e.case, Some(ChangeCase::ImportantConcept));
        assert!((e.importance - 1.3).abs() < 1e-12);
    }

    #[test]
    fn similarity_reward_values() {
        assert_eq!(state_similarity_reward(&valued(0.0), &valued(2.0), &total, DEFAULT_EPSILON), 0.5);
        assert_eq!(state_similarity_reward(&valued(0.0), &valued(4.0), &total, DEFAULT_EPSILON), 0.25);
        let r = state_similarity_reward(&valued(3.0), &valued(3.0), &total, 1e-6);
        assert!((r - 1e6).abs() < 1e-3);
    }
}
