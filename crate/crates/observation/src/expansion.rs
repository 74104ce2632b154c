use std::collections::BTreeMap;

use ontodem_ontology::{ConceptId, InstanceId, ObservationSchema, Ontology, PropertyId, Reading, Value};

/// Extra sources an agent can consult: additional instances and readings
/// not in the raw observation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SensorBindings {
    pub instances: BTreeMap<InstanceId, ConceptId>,
    pub values: BTreeMap<(InstanceId, PropertyId), Value>,
}

impl SensorBindings {
    pub fn is_empty(&self) -> bool {
        self.instances.is_empty() && self.values.is_empty()
    }
}

/// Adds ontology-declared instances and properties missing from `schema`.
///
/// Bound instances whose concept the ontology declares are added. Then every
/// instance gains each property its concept (or an ancestor) declares; the
/// value comes from `bindings` when bound and is flagged Missing otherwise.
/// Existing readings are never changed.
pub fn expand_observation(
    schema: &ObservationSchema,
    ontology: &Ontology,
    bindings: &SensorBindings,
) -> ObservationSchema {
    let mut out = schema.clone();
    for (i, c) in &bindings.instances {
        if ontology.concepts().contains(c) && out.concept_of(i).is_none() {
            out.add_instance(i.clone(), c.clone());
        }
    }
    let instances: Vec<(InstanceId, ConceptId)> = out.instances().iter().map(|(i, c)| (i.clone(), c.clone())).collect();
    for (instance, concept) in instances {
        let lineage = ontology.path_to_root(&concept);
        let declared: Vec<PropertyId> = ontology
            .relationships()
            .iter()
            .filter(|r| lineage.contains(&r.domain))
            .map(|r| r.property.clone())
            .collect();
        for property in declared {
            if out.get(&instance, &property).is_some() {
                continue;
            }
            let reading = match bindings.values.get(&(instance.clone(), property.clone())) {
                Some(v) => Reading::clean(v.clone()),
                None => Reading::missing(),
            };
            out.set(instance.clone(), property, reading).expect("instance present");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontodem_ontology::{Quality, Range, Relationship};

    fn traffic() -> Ontology {
        Ontology::builder("t")
            .concepts(["Thing", "Lane", "TrafficCongestion"])
            .properties(["hasVehicleCount", "hasCongestion", "hasLevel"])
            .subclass("Lane", "Thing")
            .relationship(Relationship::new("Lane", "hasVehicleCount", Range::Number))
            .relationship(Relationship::new("Lane", "hasCongestion", Range::Concept("TrafficCongestion".into())))
            .relationship(Relationship::new("TrafficCongestion", "hasLevel", Range::Text))
            .build()
            .unwrap()
    }

    fn lane() -> ObservationSchema {
        let mut s = ObservationSchema::new(0);
        s.add_instance("l1", "Lane");
        s.put("l1", "hasVehicleCount", Reading::clean(Value::Num(12.0)));
        s
    }

    #[test]
    fn bound_concept_and_value_added() {
        let mut b = SensorBindings::default();
        b.instances.insert("tc1".into(), "TrafficCongestion".into());
        b.values.insert(("tc1".into(), "hasLevel".into()), Value::sym("High"));
        b.values.insert(("l1".into(), "hasCongestion".into()), Value::sym("tc1"));
        let out = expand_observation(&lane(), &traffic(), &b);
        assert_eq!(out.concept_of(&"tc1".into()), Some(&ConceptId::from("TrafficCongestion")));
        assert_eq!(out.value("tc1", "hasLevel"), Some(&Value::sym("High")));
        assert_eq!(out.value("l1", "hasCongestion"), Some(&Value::sym("tc1")));
    }

    #[test]
    fn unbound_property_enters_missing() {
        let out = expand_observation(&lane(), &traffic(), &SensorBindings::default());
        let r = out.get(&"l1".into(), &"hasCongestion".into()).unwrap();
        assert_eq!(r.quality, Quality::Missing);
        assert!(r.value.is_none());
    }

    #[test]
    fn complete_schema_with_no_bindings_is_identity() {
        let mut s = lane();
        s.put("l1", "hasCongestion", Reading::clean(Value::sym("None")));
        assert_eq!(expand_observation(&s, &traffic(), &SensorBindings::default()), s);
    }
}
