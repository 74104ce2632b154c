use std::collections::BTreeMap;

use ontodem_ontology::{Belief, ObservationSchema, Ontology, PropertyId, Subsumer};
use serde::Deserialize;

use crate::error::GoalError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

/// `Σ coefficient · total(property) ≤ bound`, where `total` sums the
/// numeric readings of the property over all instances.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearConstraint {
    pub terms: Vec<(PropertyId, f64)>,
    pub bound: f64,
}

impl LinearConstraint {
    pub fn mentions(&self, property: &PropertyId) -> bool {
        self.terms.iter().any(|(p, _)| p == property)
    }

    pub fn holds(&self, schema: &ObservationSchema) -> bool {
        let lhs: f64 = self.terms.iter().map(|(p, k)| k * property_total(schema, p)).sum();
        lhs <= self.bound
    }

    pub fn validate(&self, ontology: &Ontology) -> Result<(), GoalError> {
        match self.terms.iter().find(|(p, _)| !ontology.properties().contains(p)) {
            Some((p, _)) => Err(GoalError::UndeclaredProperty(p.to_string())),
            None => Ok(()),
        }
    }
}

/// Sum of the numeric readings of `property` across instances.
pub fn property_total(schema: &ObservationSchema, property: &PropertyId) -> f64 {
    schema.entries().iter().filter(|((_, p), _)| p == property).filter_map(|(_, r)| r.value.as_ref()?.as_f64()).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewardFn {
    pub property: PropertyId,
    pub direction: Direction,
    pub constraints: Vec<LinearConstraint>,
}

impl RewardFn {
    /// Signed property total, or 0 when any attached constraint is violated.
    pub fn evaluate(&self, schema: &ObservationSchema) -> f64 {
        if !self.constraints.iter().all(|c| c.holds(schema)) {
            return 0.0;
        }
        let total = property_total(schema, &self.property);
        match self.direction {
            Direction::Maximize => total,
            Direction::Minimize => -total,
        }
    }
}

/// Belief of every property the subsumer mentions.
pub fn deduce_beliefs(subsumer: &Subsumer, ontology: &Ontology) -> BTreeMap<PropertyId, Belief> {
    subsumer.expressions.iter().map(|(p, _)| (p.clone(), ontology.belief_of(p))).collect()
}

/// One reward function per property with a Positive or Negative belief,
/// carrying the constraints that mention it.
pub fn extract_reward_functions(
    beliefs: &BTreeMap<PropertyId, Belief>,
    constraints: &[LinearConstraint],
) -> Vec<RewardFn> {
    beliefs
        .iter()
        .filter_map(|(p, b)| {
            let direction = match b {
                Belief::Positive => Direction::Maximize,
                Belief::Negative => Direction::Minimize,
                Belief::Neutral => return None,
            };
            Some(RewardFn {
                property: p.clone(),
                direction,
                constraints: constraints.iter().filter(|c| c.mentions(p)).cloned().collect(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontodem_ontology::{Reading, Value};

    fn beliefs(xs: &[(&str, Belief)]) -> BTreeMap<PropertyId, Belief> {
        xs.iter().map(|(p, b)| (PropertyId::from(*p), *b)).collect()
    }

    #[test]
    fn directions_follow_beliefs() {
        let fs = extract_reward_functions(
            &beliefs(&[
                ("hasDueDate", Belief::Positive),
                ("hasWaitingTime", Belief::Negative),
                ("hasColor", Belief::Neutral),
            ]),
            &[],
        );
        assert_eq!(fs.len(), 2);
        assert_eq!((fs[0].property.as_str(), fs[0].direction), ("hasDueDate", Direction::Maximize));
        assert_eq!((fs[1].property.as_str(), fs[1].direction), ("hasWaitingTime", Direction::Minimize));
        assert!(extract_reward_functions(&beliefs(&[("hasColor", Belief::Neutral)]), &[]).is_empty());
    }

    #[test]
    fn violated_constraint_zeroes_reward() {
        let mut s = ObservationSchema::new(0);
        s.add_instance("o1", "Order");
        s.add_instance("o2", "Order");
        s.put("o1", "hasWaitingTime", Reading::clean(Value::Num(3.0)));
        s.put("o2", "hasWaitingTime", Reading::clean(Value::Num(4.0)));
        let c = LinearConstraint { terms: vec![("hasWaitingTime".into(), 1.0)], bound: 10.0 };
        let fs = extract_reward_functions(&beliefs(&[("hasWaitingTime", Belief::Negative)]), std::slice::from_ref(&c));
        assert_eq!(fs[0].evaluate(&s), -7.0);
        let tight = LinearConstraint { bound: 5.0, ..c };
        let fs = extract_reward_functions(&beliefs(&[("hasWaitingTime", Belief::Negative)]), &[tight]);
        assert_eq!(fs[0].evaluate(&s), 0.0);
    }
}
