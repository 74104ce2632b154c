use std::collections::BTreeMap;

use ontodem_ontology::{ConceptId, InstanceId, ObservationSchema};

/// `(weight, value)` pairs, one per concept.
pub type WeightedRow = Vec<(f64, f64)>;

/// Action efficiency: weighted mass of changed concepts over weighted mass
/// of observed concepts. Pairs are `(weight, value)`; an empty observed
/// mass gives 0.
pub fn efficiency(observed: &[(f64, f64)], changed: &[(f64, f64)]) -> f64 {
    let denominator: f64 = observed.iter().map(|(w, x)| w * x).sum();
    if denominator <= 0.0 {
        return 0.0;
    }
    changed.iter().map(|(w, y)| w * y).sum::<f64>() / denominator
}

/// `reward` plus the action's efficiency.
pub fn augment_reward(reward: f64, observed: &[(f64, f64)], changed: &[(f64, f64)]) -> f64 {
    reward + efficiency(observed, changed)
}

/// Per-action counts of observed and changed concept instances.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservationMatrix {
    observed: BTreeMap<(usize, ConceptId), f64>,
    changed: BTreeMap<(usize, ConceptId), f64>,
}

impl ObservationMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one transition taken with `action`. Every instance of `prev`
    /// counts as observed; it counts as changed when it vanished or any of
    /// its readings differ in `curr`.
    pub fn record(&mut self, action: usize, prev: &ObservationSchema, curr: &ObservationSchema) {
        for (i, c) in prev.instances() {
            *self.observed.entry((action, c.clone())).or_default() += 1.0;
            if instance_changed(i, prev, curr) {
                *self.changed.entry((action, c.clone())).or_default() += 1.0;
            }
        }
    }

    /// Weighted rows for `action`, ready for [`efficiency`].
    pub fn rows(&self, action: usize, weight: impl Fn(&ConceptId) -> f64) -> (WeightedRow, WeightedRow) {
        let row = |m: &BTreeMap<(usize, ConceptId), f64>| {
            m.range((action, ConceptId::from(""))..)
                .take_while(|((a, _), _)| *a == action)
                .map(|((_, c), v)| (weight(c), *v))
                .collect::<Vec<_>>()
        };
        (row(&self.observed), row(&self.changed))
    }

    pub fn efficiency(&self, action: usize, weight: impl Fn(&ConceptId) -> f64) -> f64 {
        let (x, y) = self.rows(action, weight);
        efficiency(&x, &y)
    }
}

fn instance_changed(i: &InstanceId, prev: &ObservationSchema, curr: &ObservationSchema) -> bool {
    if curr.concept_of(i) != prev.concept_of(i) {
        return true;
    }
    let readings = |s: &ObservationSchema| {
        s.entries().iter().filter(|((j, _), _)| j == i).map(|(k, r)| (k.clone(), r.value.clone())).collect::<Vec<_>>()
    };
    readings(prev) != readings(curr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontodem_ontology::{Reading, Value};

    #[test]
    fn hand_efficiency() {
        let e = efficiency(&[(1.0, 4.0), (2.0, 3.0)], &[(2.0, 5.0)]);
        assert!((e - 1.0).abs() < 1e-12);
        assert_eq!(augment_reward(2.5, &[(1.0, 4.0), (2.0, 3.0)], &[(2.0, 5.0)]), 3.5);
        assert_eq!(augment_reward(2.5, &[(1.0, 4.0)], &[(2.0, 0.0)]), 2.5);
        assert_eq!(efficiency(&[], &[(1.0, 1.0)]), 0.0);
    }

    #[test]
    fn matrix_counts_changes_per_action() {
        let mut prev = ObservationSchema::new(0);
        prev.add_instance("m1", "Machine");
        prev.add_instance("m2", "Machine");
        prev.add_instance("o1", "Order");
        prev.put("m1", "hasStatus", Reading::clean(Value::sym("Idle")));
        prev.put("m2", "hasStatus", Reading::clean(Value::sym("Idle")));
        let mut curr = prev.clone();
        curr.put("m1", "hasStatus", Reading::clean(Value::sym("Busy")));
        curr.remove_instance(&"o1".into());
        let mut m = ObservationMatrix::new();
        m.record(3, &prev, &curr);
        m.record(4, &prev, &prev);
        let (x, y) = m.rows(3, |c| if c.as_str() == "Order" { 2.0 } else { 1.0 });
        assert_eq!(x, vec![(1.0, 2.0), (2.0, 1.0)]);
        assert_eq!(y, vec![(1.0, 1.0), (2.0, 1.0)]);
        assert!((m.efficiency(3, |_| 1.0) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(m.efficiency(4, |_| 1.0), 0.0);
    }
}
