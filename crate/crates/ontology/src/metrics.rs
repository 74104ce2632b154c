use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::OntologyError;
use crate::ids::{ConceptId, InstanceId, PropertyId, TemporalContext};
use crate::model::{Belief, ConceptStructure, Ontology, Range, Relationship};
use crate::schema::{ObservationSchema, Value};

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Squared set similarity `(|X∩Y|/|X| + |X∩Y|/|Y|) / 2`, with 0/0 read as 0.
fn squared_overlap<T: Ord>(x: &BTreeSet<T>, y: &BTreeSet<T>) -> f64 {
    let common = x.intersection(y).count();
    (ratio(common, x.len()) + ratio(common, y.len())) / 2.0
}

/// Similarity from raw neighborhood and property sets.
pub fn similarity_from_sets<N: Ord, F: Ord>(
    nx: &BTreeSet<N>,
    ny: &BTreeSet<N>,
    fx: &BTreeSet<F>,
    fy: &BTreeSet<F>,
) -> f64 {
    let alpha = ratio(nx.len(), nx.len() + ny.len());
    let beta = ratio(fx.len(), fx.len() + fy.len());
    let radicand = (alpha * squared_overlap(nx, ny) + beta * squared_overlap(fx, fy)) / 2.0;
    radicand.sqrt()
}

/// Structural similarity of `cx` (in `a`) and `cy` (in `b`).
///
/// Compares one-hop neighborhoods and property sets. Identical structures
/// score `sqrt(0.5)`, disjoint ones score 0.
pub fn concept_similarity<A, B>(cx: &ConceptId, a: &A, cy: &ConceptId, b: &B) -> Result<f64, OntologyError>
where
    A: ConceptStructure + ?Sized,
    B: ConceptStructure + ?Sized,
{
    if !a.has_concept(cx) {
        return Err(OntologyError::UnknownConcept(cx.clone()));
    }
    if !b.has_concept(cy) {
        return Err(OntologyError::UnknownConcept(cy.clone()));
    }
    Ok(similarity_from_sets(&a.neighborhood(cx), &b.neighborhood(cy), &a.property_set(cx), &b.property_set(cy)))
}

/// Element of a schema for set-based comparison.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SchemaElement {
    Concept(ConceptId),
    Entry(InstanceId, PropertyId),
}

pub fn schema_elements(s: &ObservationSchema) -> BTreeSet<SchemaElement> {
    let mut out: BTreeSet<SchemaElement> =
        s.observed_concepts().into_iter().map(|c| SchemaElement::Concept(c.clone())).collect();
    out.extend(s.entries().keys().map(|(i, p)| SchemaElement::Entry(i.clone(), p.clone())));
    out
}

/// Jaccard distance between two sets; 0 when both are empty.
pub fn jaccard_distance<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    1.0 - a.intersection(b).count() as f64 / union as f64
}

/// Jaccard distance over observed concepts and entry keys.
pub fn schema_distance(a: &ObservationSchema, b: &ObservationSchema) -> f64 {
    jaccard_distance(&schema_elements(a), &schema_elements(b))
}

/// Generalization of an observation: least common ancestors of the observed
/// concepts plus one existential expression per observed property.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subsumer {
    pub ancestors: BTreeSet<ConceptId>,
    pub expressions: BTreeSet<(PropertyId, Belief)>,
}

impl fmt::Display for Subsumer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.ancestors.iter().map(ToString::to_string).collect();
        for (property, belief) in &self.expressions {
            let stem = property.stem();
            parts.push(match belief {
                Belief::Positive => format!("(∃has.{stem}, ∀has.PositiveBelief)"),
                Belief::Negative => format!("(∃has.{stem}, ∀has.NegativeBelief)"),
                Belief::Neutral => format!("∃has.{stem}"),
            });
        }
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn least_common_ancestor(paths: &[Vec<ConceptId>]) -> Option<ConceptId> {
    let first = paths.first()?;
    first.iter().find(|c| paths[1..].iter().all(|p| p.contains(c))).cloned()
}

/// Extracts the subsumer of `schema`.
///
/// Observed concepts are grouped by hierarchy root and each group
/// contributes its deepest common ancestor.
pub fn extract_subsumer(schema: &ObservationSchema, ontology: &Ontology) -> Result<Subsumer, OntologyError> {
    let mut by_root: BTreeMap<ConceptId, Vec<Vec<ConceptId>>> = BTreeMap::new();
    for c in schema.observed_concepts() {
        if !ontology.concepts().contains(c) {
            return Err(OntologyError::OrphanConcept(c.clone()));
        }
        let path = ontology.path_to_root(c);
        let root = path.last().cloned().expect("path contains the concept");
        by_root.entry(root).or_default().push(path);
    }
    let ancestors = by_root.values().filter_map(|paths| least_common_ancestor(paths)).collect();
    let expressions = schema.observed_properties().into_iter().map(|p| (p.clone(), ontology.belief_of(p))).collect();
    Ok(Subsumer { ancestors, expressions })
}

fn range_matches(ontology: &Ontology, schema: &ObservationSchema, range: &Range, value: &Value) -> bool {
    match (range, value) {
        (Range::Number, Value::Num(_)) => true,
        (Range::Text, Value::Sym(_)) => true,
        (Range::Concept(c), Value::Sym(s)) => {
            let as_concept = ConceptId::from(s.as_str());
            if ontology.concepts().contains(&as_concept) {
                return ontology.is_a(&as_concept, c);
            }
            schema.concept_of(&InstanceId::from(s.as_str())).is_some_and(|ic| ontology.is_a(ic, c))
        }
        _ => false,
    }
}

/// Weighted relationships that apply to `instance` in `schema`.
pub fn applicable_relationships<'o>(
    instance: &InstanceId,
    schema: &ObservationSchema,
    ontology: &'o Ontology,
) -> Result<BTreeSet<&'o Relationship>, OntologyError> {
    let concept = schema.concept_of(instance).ok_or_else(|| OntologyError::UnknownInstance(instance.clone()))?;
    let lineage = ontology.path_to_root(concept);
    let mut out = BTreeSet::new();
    for rel in ontology.weights().keys() {
        if !lineage.contains(&rel.domain) {
            continue;
        }
        let Some(value) = schema.get(instance, &rel.property).and_then(|r| r.value.as_ref()) else {
            continue;
        };
        if range_matches(ontology, schema, &rel.range, value) {
            out.insert(rel);
        }
    }
    Ok(out)
}

/// Importance of an observed instance: mean weight of its applicable
/// relationships under `ctx`, or 0 when none apply.
pub fn concept_weight(
    instance: &InstanceId,
    schema: &ObservationSchema,
    ontology: &Ontology,
    ctx: Option<&TemporalContext>,
) -> Result<f64, OntologyError> {
    let rels = applicable_relationships(instance, schema, ontology)?;
    if rels.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = rels.iter().map(|r| ontology.weights()[*r].resolve(ctx).get()).sum();
    Ok(total / rels.len() as f64)
}

/// Sum of [`concept_weight`] over every observed instance.
pub fn observation_importance(schema: &ObservationSchema, ontology: &Ontology, ctx: Option<&TemporalContext>) -> f64 {
    schema.instances().keys().map(|i| concept_weight(i, schema, ontology, ctx).expect("instance is observed")).sum()
}
