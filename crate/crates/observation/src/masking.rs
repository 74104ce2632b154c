use std::collections::BTreeSet;

use ontodem_ontology::{concept_similarity, ActionOntology, InstanceId, ObservationSchema, Ontology};
use ontodem_rules::Term;

use crate::error::ObservationError;

/// Drops every instance whose concept is less similar than `threshold` to
/// all concepts bound by `action`. An action ontology with no bound
/// concepts drops everything.
pub fn mask_observation(
    schema: &ObservationSchema,
    ontology: &Ontology,
    action: &ActionOntology,
    threshold: f64,
) -> Result<ObservationSchema, ObservationError> {
    let mut keep_concepts = BTreeSet::new();
    for c in schema.observed_concepts() {
        if !ontology.concepts().contains(c) {
            continue;
        }
        for cy in action.bound_concepts() {
            if concept_similarity(c, ontology, cy, action)? >= threshold {
                keep_concepts.insert(c.clone());
                break;
            }
        }
    }
    let keep: BTreeSet<InstanceId> =
        schema.instances().iter().filter(|(_, c)| keep_concepts.contains(*c)).map(|(i, _)| i.clone()).collect();
    Ok(retain_instances(schema, &keep))
}

/// Copy of `schema` restricted to `keep`. Relation tuples that name a
/// removed instance are removed as well.
pub(crate) fn retain_instances(schema: &ObservationSchema, keep: &BTreeSet<InstanceId>) -> ObservationSchema {
    if keep.len() == schema.instances().len() {
        return schema.clone();
    }
    let mut out = ObservationSchema::new(schema.timestamp);
    for (i, c) in schema.instances() {
        if keep.contains(i) {
            out.add_instance(i.clone(), c.clone());
        }
    }
    for ((i, p), r) in schema.entries() {
        if keep.contains(i) {
            out.set(i.clone(), p.clone(), r.clone()).expect("instance kept");
        }
    }
    for rel in schema.relations() {
        let names_removed = rel.terms.iter().any(|t| match t {
            Term::Sym(s) => {
                let id = InstanceId::from(s.as_str());
                schema.concept_of(&id).is_some() && !keep.contains(&id)
            }
            _ => false,
        });
        if !names_removed {
            out.add_relation(rel.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ontodem_ontology::{ActionId, ConceptId, Range, Reading, Relationship, Value};
    use ontodem_rules::Atom;

    fn onto() -> Ontology {
        Ontology::builder("jss")
            .concepts(["Machine", "Buffer", "Order", "Weather"])
            .properties(["hasInputBuffer", "hasNumber", "hasDueDate", "hasRain"])
            .relationship(Relationship::new("Machine", "hasInputBuffer", Range::Concept("Buffer".into())))
            .relationship(Relationship::new("Buffer", "hasNumber", Range::Number))
            .relationship(Relationship::new("Order", "hasDueDate", Range::Number))
            .relationship(Relationship::new("Weather", "hasRain", Range::Number))
            .build()
            .unwrap()
    }

    fn schema() -> ObservationSchema {
        let mut s = ObservationSchema::new(3);
        s.add_instance("m1", "Machine");
        s.add_instance("b1", "Buffer");
        s.add_instance("w", "Weather");
        s.put("m1", "hasInputBuffer", Reading::clean(Value::sym("b1")));
        s.put("b1", "hasNumber", Reading::clean(Value::Num(2.0)));
        s.put("w", "hasRain", Reading::clean(Value::Num(0.0)));
        s.add_relation(Atom::new("near", vec![Term::sym("m1"), Term::sym("w")]));
        s
    }

    #[test]
    fn unrelated_concept_is_masked() {
        let o = onto();
        let a = ActionOntology::project(
            ActionId::from("assign"),
            &o,
            &[ConceptId::from("Machine"), ConceptId::from("Buffer")],
        )
        .unwrap();
        let out = mask_observation(&schema(), &o, &a, 0.3).unwrap();
        assert!(out.concept_of(&"w".into()).is_none());
        assert!(out.concept_of(&"m1".into()).is_some());
        assert!(out.relations().is_empty());
    }

    #[test]
    fn empty_action_ontology_masks_everything() {
        let a = ActionOntology::empty(ActionId::from("noop"));
        let out = mask_observation(&schema(), &onto(), &a, 0.3).unwrap();
        assert!(out.instances().is_empty());
        assert!(out.entries().is_empty());
    }
}
