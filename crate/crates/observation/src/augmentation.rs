use std::collections::BTreeSet;

use ontodem_ontology::{InstanceId, ObservationSchema, PropertyId, Quality, Value};
use ontodem_rules::{forward_chain, FactBase, Rule, Term, DEFAULT_MAX_ITERATIONS};

use crate::config::AugmentMode;
use crate::error::ObservationError;

/// Fills Missing readings with values the rules derive from the rest of
/// the observation. Filled readings become CleanInferred; the rest stay
/// Missing.
pub fn augment_observation(schema: &ObservationSchema, rules: &[Rule]) -> Result<ObservationSchema, ObservationError> {
    augment_observation_with(schema, rules, AugmentMode::MissingOnly)
}

/// Like [`augment_observation`]. With [`AugmentMode::MissingAndNoisy`],
/// Noisy readings of any property a rule head can derive are first
/// withdrawn to Missing so the rules decide them afresh.
pub fn augment_observation_with(
    schema: &ObservationSchema,
    rules: &[Rule],
    mode: AugmentMode,
) -> Result<ObservationSchema, ObservationError> {
    let mut out = schema.clone();
    if mode == AugmentMode::MissingAndNoisy {
        let derivable: BTreeSet<&str> =
            rules.iter().flat_map(|r| r.head.iter().map(|a| a.predicate.as_str())).collect();
        for ((_, p), r) in out.entries_mut() {
            if r.quality == Quality::Noisy && derivable.contains(p.as_str()) {
                r.value = None;
                r.quality = Quality::Missing;
            }
        }
    }
    let missing: Vec<(InstanceId, PropertyId)> =
        out.entries().iter().filter(|(_, r)| r.quality == Quality::Missing).map(|(k, _)| k.clone()).collect();
    if missing.is_empty() || rules.is_empty() {
        return Ok(out);
    }
    let facts: FactBase = out.to_facts().into_iter().collect();
    let closure = forward_chain(rules, &facts, DEFAULT_MAX_ITERATIONS)?;
    for (instance, property) in missing {
        let subject = Term::sym(instance.as_str());
        let derived = closure
            .tuples_with_first(property.as_str(), &subject)
            .find(|t| t.len() == 2)
            .and_then(|t| Value::from_term(&t[1]));
        if let Some(v) = derived {
            let r = out.get_mut(&instance, &property).expect("key taken from schema");
            r.value = Some(v);
            r.quality = Quality::CleanInferred;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontodem_ontology::Reading;
    use ontodem_rules::parse_rules;

    const CAPACITY: &str = "JobShopScheduler(?i), hasInputBuffer(?a,?x), hasOutputBuffer(?a,?y), \
        hasProcessingBuffer(?a,?z), hasNumber(?x,?n1), hasNumber(?y,?n2), hasNumber(?z,?n3), \
        hasInitialCapacity(?a,?c), hasSum(?n1,?n2,?n3,?N), isLess(?N,?c) -> hasRemainingCapacity(?a, Free);";

    fn machine(capacity: Reading, load: [f64; 3]) -> ObservationSchema {
        let mut s = ObservationSchema::new(0);
        s.add_instance("jss", "JobShopScheduler");
        s.add_instance("m1", "Machine");
        for (b, n) in ["in1", "out1", "proc1"].iter().zip(load) {
            s.add_instance(*b, "Buffer");
            s.put(b, "hasNumber", Reading::clean(Value::Num(n)));
        }
        s.put("m1", "hasInputBuffer", Reading::clean(Value::sym("in1")));
        s.put("m1", "hasOutputBuffer", Reading::clean(Value::sym("out1")));
        s.put("m1", "hasProcessingBuffer", Reading::clean(Value::sym("proc1")));
        s.put("m1", "hasInitialCapacity", Reading::clean(Value::Num(5.0)));
        s.put("m1", "hasRemainingCapacity", capacity);
        s
    }

    #[test]
    fn missing_capacity_is_inferred() {
        let rules = parse_rules(CAPACITY).unwrap();
        let out = augment_observation(&machine(Reading::missing(), [1.0, 1.0, 1.0]), &rules).unwrap();
        let r = out.get(&"m1".into(), &"hasRemainingCapacity".into()).unwrap();
        assert_eq!(r.value, Some(Value::sym("Free")));
        assert_eq!(r.quality, Quality::CleanInferred);
    }

    #[test]
    fn underivable_entry_stays_missing() {
        let rules = parse_rules(CAPACITY).unwrap();
        let out = augment_observation(&machine(Reading::missing(), [2.0, 2.0, 1.0]), &rules).unwrap();
        let r = out.get(&"m1".into(), &"hasRemainingCapacity".into()).unwrap();
        assert_eq!(r.quality, Quality::Missing);
    }

    #[test]
    fn noisy_reading_kept_unless_mode_allows() {
        let rules = parse_rules(CAPACITY).unwrap();
        let s = machine(Reading::noisy(Value::sym("Free")), [2.0, 2.0, 1.0]);
        assert_eq!(augment_observation(&s, &rules).unwrap(), s);
        let out = augment_observation_with(&s, &rules, AugmentMode::MissingAndNoisy).unwrap();
        let r = out.get(&"m1".into(), &"hasRemainingCapacity".into()).unwrap();
        assert_eq!(r.quality, Quality::Missing);
        assert!(r.value.is_none());
    }
}
